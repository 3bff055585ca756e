#include "polardyn/generators.hpp"

#include <cmath>
#include <string>

#include "polardyn/core_model.hpp"
#include "polardyn/error.hpp"
#include "polardyn/rng.hpp"

namespace polardyn {

namespace {

PartyGraph::Builder labelled_nodes(std::size_t n, double red_fraction) {
  if (n < 2) throw Error(ErrorCategory::Config, "graph needs at least 2 nodes");
  if (!(red_fraction >= 0.0 && red_fraction <= 1.0)) {
    throw Error(ErrorCategory::Config, "red fraction must lie in [0, 1]");
  }
  const auto reds = static_cast<std::size_t>(std::llround(red_fraction * static_cast<double>(n)));
  PartyGraph::Builder b;
  for (std::size_t v = 0; v < n; ++v) {
    b.add_node("v" + std::to_string(v), v < n - reds ? Party::Blue : Party::Red);
  }
  return b;
}

}  // namespace

PartyGraph complete_graph(std::size_t n, double red_fraction) {
  auto b = labelled_nodes(n, red_fraction);
  b.reserve_edges(n * (n - 1) / 2);
  for (PartyGraph::Index u = 0; u < n; ++u) {
    for (PartyGraph::Index v = u + 1; v < n; ++v) b.add_edge(u, v);
  }
  return std::move(b).build();
}

PartyGraph two_block_graph(std::size_t n, double red_fraction, double p_in, double p_out,
                           std::uint64_t seed) {
  const auto ok = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!ok(p_in) || !ok(p_out)) {
    throw Error(ErrorCategory::Config, "edge probabilities must lie in [0, 1]");
  }
  auto b = labelled_nodes(n, red_fraction);
  const auto reds = static_cast<std::size_t>(std::llround(red_fraction * static_cast<double>(n)));
  const auto blues = n - reds;
  Rng rng(seed);
  for (PartyGraph::Index u = 0; u < n; ++u) {
    const bool u_blue = u < blues;
    for (PartyGraph::Index v = u + 1; v < n; ++v) {
      const bool same = u_blue == (v < blues);
      if (rng.bernoulli(same ? p_in : p_out)) b.add_edge(u, v);
    }
  }
  return std::move(b).build();
}

std::vector<TransitionRecord> sample_transitions(const ModelParams& params, std::size_t count,
                                                 std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  std::vector<TransitionRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    TransitionRecord rec;
    rec.before = rng.bernoulli(0.5) ? Stance::One : Stance::Zero;
    const double x_in = rng.uniform(-1.0, 1.0);
    const double x_out = rng.uniform(-1.0, 1.0);
    // Stance-1 holders are pulled by the stance-0 components.
    const double sign = rec.before == Stance::Zero ? 1.0 : -1.0;
    rec.influence = InfluenceVector::from_stance_one(sign * x_in, sign * x_out);
    const double p = logistic(params.alpha * x_in - params.beta * x_out - params.delta);
    rec.after = rng.bernoulli(p) ? flipped(rec.before) : rec.before;
    rec.node_id = "s" + std::to_string(i);
    rec.time = static_cast<std::int64_t>(i);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace polardyn
