#include "polardyn/core_model.hpp"

#include <cmath>
#include <string>

#include "polardyn/error.hpp"

namespace polardyn {

Party party_from_int(long value) {
  if (value != 0 && value != 1) {
    throw Error(ErrorCategory::Input, "party must be 0 or 1, got " + std::to_string(value));
  }
  return static_cast<Party>(value);
}

Stance stance_from_int(long value) {
  if (value != 0 && value != 1) {
    throw Error(ErrorCategory::Input, "stance must be 0 or 1, got " + std::to_string(value));
  }
  return static_cast<Stance>(value);
}

std::string_view to_string(InfluenceMeasureKind kind) {
  switch (kind) {
    case InfluenceMeasureKind::DegreeNormalizedCount: return "degree-normalized-count";
    case InfluenceMeasureKind::GroupFraction: return "group-fraction";
    case InfluenceMeasureKind::MessageCount: return "message-count";
  }
  return "unknown";
}

InfluenceMeasureKind parse_measure(std::string_view text) {
  if (text == "def1" || text == "degree-normalized-count") {
    return InfluenceMeasureKind::DegreeNormalizedCount;
  }
  if (text == "def2" || text == "group-fraction") return InfluenceMeasureKind::GroupFraction;
  if (text == "messages" || text == "message-count") return InfluenceMeasureKind::MessageCount;
  throw Error(ErrorCategory::Config, "unknown influence measure '" + std::string(text) +
                                         "' (expected def1, def2 or messages)");
}

void ModelParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(delta)) {
    throw Error(ErrorCategory::Config, "model parameters must be finite");
  }
  if (alpha < 0.0) throw Error(ErrorCategory::Config, "alpha must be >= 0");
  if (delta < 0.0) throw Error(ErrorCategory::Config, "delta must be >= 0");
  if (beta < 0.0 && !allow_outgroup_love) {
    throw Error(ErrorCategory::Config,
                "beta < 0 (out-group love) requires allow_outgroup_love to be enabled");
  }
}

NeighborCounts count_neighbors(const PartyGraph& graph, PartyGraph::Index node) {
  if (node >= graph.size()) {
    throw Error(ErrorCategory::Input, "node index " + std::to_string(node) + " out of range");
  }
  NeighborCounts c;
  const Party own = graph.party(node);
  for (const auto u : graph.neighbors(node)) {
    const bool same = graph.party(u) == own;
    const bool one = graph.stance(u) == Stance::One;
    if (same) {
      (one ? c.in_1 : c.in_0) += 1;
    } else {
      (one ? c.out_1 : c.out_0) += 1;
    }
  }
  return c;
}

InfluenceVector influence_def1(const NeighborCounts& c) {
  const auto degree = c.total();
  if (degree == 0) return {};
  const double m = static_cast<double>(degree);
  return InfluenceVector::from_stance_one(static_cast<double>(c.in_1 - c.in_0) / m,
                                          static_cast<double>(c.out_1 - c.out_0) / m);
}

InfluenceVector influence_def1(const PartyGraph& graph, PartyGraph::Index node) {
  return influence_def1(count_neighbors(graph, node));
}

namespace {

double net_fraction(std::int64_t ones, std::int64_t zeros) {
  const auto total = ones + zeros;
  return total == 0 ? 0.0 : static_cast<double>(ones - zeros) / static_cast<double>(total);
}

}  // namespace

InfluenceVector influence_def2(const NeighborCounts& c) {
  return InfluenceVector::from_stance_one(net_fraction(c.in_1, c.in_0),
                                          net_fraction(c.out_1, c.out_0));
}

InfluenceVector influence_def2(const PartyGraph& graph, PartyGraph::Index node) {
  return influence_def2(count_neighbors(graph, node));
}

InfluenceVector influence_messages(MessageCounts in_group, MessageCounts out_group) {
  if (in_group.stance_1 < 0 || in_group.stance_0 < 0 || out_group.stance_1 < 0 ||
      out_group.stance_0 < 0) {
    throw Error(ErrorCategory::Input, "message counts must be non-negative");
  }
  const auto total = in_group.stance_1 + in_group.stance_0 + out_group.stance_1 + out_group.stance_0;
  if (total == 0) return {};
  const double t = static_cast<double>(total);
  return InfluenceVector::from_stance_one(
      static_cast<double>(in_group.stance_1 - in_group.stance_0) / t,
      static_cast<double>(out_group.stance_1 - out_group.stance_0) / t);
}

InfluenceVector influence(const NeighborCounts& counts, InfluenceMeasureKind kind) {
  switch (kind) {
    case InfluenceMeasureKind::DegreeNormalizedCount: return influence_def1(counts);
    case InfluenceMeasureKind::GroupFraction: return influence_def2(counts);
    case InfluenceMeasureKind::MessageCount: break;
  }
  throw Error(ErrorCategory::Config,
              "message-count influence needs per-message exposure and is not defined on a graph");
}

InfluenceVector influence(const PartyGraph& graph, PartyGraph::Index node,
                          InfluenceMeasureKind kind) {
  return influence(count_neighbors(graph, node), kind);
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

double switch_logit(const ModelParams& params, const InfluenceVector& inf, Stance current) {
  return params.alpha * inf.toward_switch_in(current) -
         params.beta * inf.toward_switch_out(current) - params.delta;
}

double transition_probability(const ModelParams& params, const InfluenceVector& inf,
                              Stance current) {
  return logistic(switch_logit(params, inf, current));
}

}  // namespace polardyn
