#pragma once

#include <cmath>
#include <cstdint>

#include "polardyn/party_graph.hpp"
#include "polardyn/types.hpp"

namespace polardyn {

// Neighbor tallies of a node split by group (relative to the node) and stance.
struct NeighborCounts {
  std::int64_t in_1 = 0;
  std::int64_t in_0 = 0;
  std::int64_t out_1 = 0;
  std::int64_t out_0 = 0;

  std::int64_t total() const noexcept { return in_1 + in_0 + out_1 + out_0; }
};

NeighborCounts count_neighbors(const PartyGraph& graph, PartyGraph::Index node);

// Definition 1: (m_in_1 - m_in_0) / degree and (m_out_1 - m_out_0) / degree.
// Isolated nodes get the zero vector.
InfluenceVector influence_def1(const NeighborCounts& counts);
InfluenceVector influence_def1(const PartyGraph& graph, PartyGraph::Index node);

// Definition 2: net fraction within the in-group and within the out-group,
// each normalized by its own group size. An empty group contributes 0.
InfluenceVector influence_def2(const NeighborCounts& counts);
InfluenceVector influence_def2(const PartyGraph& graph, PartyGraph::Index node);

struct MessageCounts {
  std::int64_t stance_1 = 0;
  std::int64_t stance_0 = 0;
};

// Message-exposure variant. Both nets are divided by the grand total of all
// messages seen (in-group plus out-group), which is what the reference worked
// example computes (70/30 in, 7/3 out -> 40/110 and 4/110). Dividing the
// in-group net by in-group messages only would give 40/100 instead.
// All-zero counts give the zero vector; negative counts throw Error(Input).
InfluenceVector influence_messages(MessageCounts in_group, MessageCounts out_group);

// Dispatches on the graph-based measures; MessageCount throws Error(Config)
// because a graph carries no per-message exposure.
InfluenceVector influence(const NeighborCounts& counts, InfluenceMeasureKind kind);
InfluenceVector influence(const PartyGraph& graph, PartyGraph::Index node,
                          InfluenceMeasureKind kind);

// Standard logistic, evaluated without overflow for any finite input.
template <typename Scalar>
Scalar logistic(Scalar x) {
  using std::exp;
  if (x >= Scalar(0)) {
    return Scalar(1) / (Scalar(1) + exp(-x));
  }
  const Scalar e = exp(x);
  return e / (Scalar(1) + e);
}

double logit(double p);

// Log-odds of leaving `current`: alpha * d_in - beta * d_out - delta, with the
// influence components taken toward the opposite stance.
double switch_logit(const ModelParams& params, const InfluenceVector& inf, Stance current);

// Probability that a node holding `current` switches at its next update.
double transition_probability(const ModelParams& params, const InfluenceVector& inf,
                              Stance current);

}  // namespace polardyn
