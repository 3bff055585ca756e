#include "polardyn/network_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "polardyn/error.hpp"

namespace polardyn {

namespace {

void validate_bernoulli(const BernoulliStances& b) {
  const auto ok = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!ok(b.theta_blue) || !ok(b.theta_red)) {
    throw Error(ErrorCategory::Config, "initial prevalences must lie in [0, 1]");
  }
}

void validate_measure(InfluenceMeasureKind measure) {
  if (measure == InfluenceMeasureKind::MessageCount) {
    throw Error(ErrorCategory::Config,
                "network simulation supports def1 and def2 only; message-count influence "
                "needs per-message exposure data");
  }
}

}  // namespace

void init_stances(PartyGraph& graph, const InitialStanceSpec& spec, Rng& rng) {
  if (const auto* explicit_map = std::get_if<ExplicitStances>(&spec)) {
    for (PartyGraph::Index v = 0; v < graph.size(); ++v) {
      const auto it = explicit_map->find(graph.id(v));
      if (it == explicit_map->end()) {
        throw Error(ErrorCategory::Input, "no initial stance for node '" + graph.id(v) + "'");
      }
      graph.set_stance(v, it->second);
    }
    return;
  }
  const auto& b = std::get<BernoulliStances>(spec);
  validate_bernoulli(b);
  for (PartyGraph::Index v = 0; v < graph.size(); ++v) {
    const double p = graph.party(v) == Party::Blue ? b.theta_blue : b.theta_red;
    graph.set_stance(v, rng.bernoulli(p) ? Stance::One : Stance::Zero);
  }
}

void SimConfig::validate() const {
  params.validate();
  validate_measure(measure);
  if (horizon_events < 1) throw Error(ErrorCategory::Config, "horizon_events must be >= 1");
  if (record_every < 1) throw Error(ErrorCategory::Config, "record_every must be >= 1");
  if (const auto* b = std::get_if<BernoulliStances>(&init)) validate_bernoulli(*b);
}

StepResult step(PartyGraph& graph, const ModelParams& params, InfluenceMeasureKind measure,
                Rng& rng) {
  if (graph.size() == 0) throw Error(ErrorCategory::Input, "cannot step an empty graph");
  StepResult result;
  result.node = static_cast<PartyGraph::Index>(rng.below(graph.size()));
  const auto inf = influence(graph, result.node, measure);
  const double p = transition_probability(params, inf, graph.stance(result.node));
  if (rng.uniform() < p) {
    graph.flip_stance(result.node);
    result.switched = true;
  }
  return result;
}

Simulator::Simulator(PartyGraph graph, ModelParams params, InfluenceMeasureKind measure)
    : graph_(std::move(graph)), params_(params), measure_(measure) {
  params_.validate();
  validate_measure(measure_);
  if (graph_.size() == 0) throw Error(ErrorCategory::Input, "cannot simulate an empty graph");
  complete_ = graph_.is_complete();
  for (PartyGraph::Index v = 0; v < graph_.size(); ++v) {
    ++global_[as_int(graph_.party(v))][as_int(graph_.stance(v))];
  }
  if (!complete_) {
    local_.resize(graph_.size());
    for (PartyGraph::Index v = 0; v < graph_.size(); ++v) local_[v] = count_neighbors(graph_, v);
  }
}

NeighborCounts Simulator::counts(PartyGraph::Index node) const {
  if (!complete_) return local_.at(node);
  const int p = as_int(graph_.party(node));
  const int s = as_int(graph_.stance(node));
  NeighborCounts c;
  c.in_1 = global_[p][1] - (s == 1 ? 1 : 0);
  c.in_0 = global_[p][0] - (s == 0 ? 1 : 0);
  c.out_1 = global_[1 - p][1];
  c.out_0 = global_[1 - p][0];
  return c;
}

InfluenceVector Simulator::influence(PartyGraph::Index node) const {
  return polardyn::influence(counts(node), measure_);
}

double Simulator::prevalence(Party p) const {
  const auto i = as_int(p);
  const auto total = global_[i][0] + global_[i][1];
  return total == 0 ? 0.0 : static_cast<double>(global_[i][1]) / static_cast<double>(total);
}

void Simulator::flip(PartyGraph::Index node) {
  const Party party = graph_.party(node);
  const Stance old_stance = graph_.stance(node);
  --global_[as_int(party)][as_int(old_stance)];
  ++global_[as_int(party)][1 - as_int(old_stance)];
  graph_.flip_stance(node);
  if (complete_) return;
  const bool was_one = old_stance == Stance::One;
  for (const auto u : graph_.neighbors(node)) {
    auto& c = local_[u];
    if (graph_.party(u) == party) {
      (was_one ? c.in_1 : c.in_0) -= 1;
      (was_one ? c.in_0 : c.in_1) += 1;
    } else {
      (was_one ? c.out_1 : c.out_0) -= 1;
      (was_one ? c.out_0 : c.out_1) += 1;
    }
  }
}

StepResult Simulator::step(Rng& rng) {
  StepResult result;
  result.node = static_cast<PartyGraph::Index>(rng.below(graph_.size()));
  const double p = transition_probability(params_, influence(result.node), graph_.stance(result.node));
  if (rng.uniform() < p) {
    flip(result.node);
    result.switched = true;
  }
  return result;
}

Trajectory run(const PartyGraph& graph, const SimConfig& config) {
  config.validate();
  PartyGraph g = graph;
  Rng rng(config.seed);
  init_stances(g, config.init, rng);
  Simulator sim(std::move(g), config.params, config.measure);

  Trajectory traj;
  traj.node_count = sim.graph().size();
  traj.rows.reserve(static_cast<std::size_t>(
      (config.horizon_events + config.record_every - 1) / config.record_every + 1));
  const auto snapshot = [&](std::uint64_t event) {
    traj.rows.push_back({event, sim.prevalence(Party::Blue), sim.prevalence(Party::Red)});
  };
  snapshot(0);
  for (std::uint64_t e = 1; e <= config.horizon_events; ++e) {
    sim.step(rng);
    if (e % config.record_every == 0 || e == config.horizon_events) snapshot(e);
  }
  return traj;
}

std::vector<Trajectory> ensemble_run(const PartyGraph& graph, const SimConfig& config,
                                     std::size_t replicates, unsigned threads) {
  if (replicates < 1) throw Error(ErrorCategory::Config, "replicates must be >= 1");
  config.validate();
  std::vector<Trajectory> out(replicates);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, replicates));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < replicates; i = next++) {
      SimConfig c = config;
      c.seed = derive_seed(config.seed, i);
      out[i] = run(graph, c);
    }
  };
  if (threads <= 1) {
    worker();
    return out;
  }
  // Exceptions cannot escape a worker: config was validated above and run()
  // only throws on invalid configs.
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

Trajectory ensemble_mean(const std::vector<Trajectory>& trajectories) {
  if (trajectories.empty()) throw Error(ErrorCategory::Input, "empty ensemble");
  Trajectory mean = trajectories.front();
  for (std::size_t i = 1; i < trajectories.size(); ++i) {
    const auto& t = trajectories[i];
    if (t.rows.size() != mean.rows.size()) {
      throw Error(ErrorCategory::Input, "ensemble trajectories differ in length");
    }
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      mean.rows[k].theta_blue += t.rows[k].theta_blue;
      mean.rows[k].theta_red += t.rows[k].theta_red;
    }
  }
  const double n = static_cast<double>(trajectories.size());
  for (auto& row : mean.rows) {
    row.theta_blue /= n;
    row.theta_red /= n;
  }
  return mean;
}

std::string_view to_string(PanelScheme scheme) {
  return scheme == PanelScheme::Synchronous ? "sync" : "async";
}

PanelScheme parse_panel_scheme(std::string_view text) {
  if (text == "sync") return PanelScheme::Synchronous;
  if (text == "async") return PanelScheme::Asynchronous;
  throw Error(ErrorCategory::Config,
              "unknown panel scheme '" + std::string(text) + "' (expected sync or async)");
}

StancePanel simulate_panel(const PartyGraph& graph, const PanelSimConfig& config) {
  config.params.validate();
  validate_measure(config.measure);
  if (config.intervals < 1) throw Error(ErrorCategory::Config, "intervals must be >= 1");
  PartyGraph g = graph;
  Rng rng(config.seed);
  init_stances(g, config.init, rng);
  Simulator sim(std::move(g), config.params, config.measure);
  const auto n = sim.graph().size();

  StancePanel panel;
  panel.rows.reserve(n * (config.intervals + 1));
  const auto snapshot = [&](std::int64_t interval) {
    const auto& gr = sim.graph();
    for (PartyGraph::Index v = 0; v < n; ++v) {
      panel.rows.push_back({gr.id(v), interval, gr.party(v), gr.stance(v)});
    }
  };
  snapshot(0);
  std::vector<PartyGraph::Index> to_flip;
  for (std::size_t k = 1; k <= config.intervals; ++k) {
    if (config.scheme == PanelScheme::Synchronous) {
      to_flip.clear();
      for (PartyGraph::Index v = 0; v < n; ++v) {
        const double p =
            transition_probability(config.params, sim.influence(v), sim.graph().stance(v));
        if (rng.uniform() < p) to_flip.push_back(v);
      }
      for (const auto v : to_flip) sim.flip(v);
    } else {
      for (std::size_t e = 0; e < n; ++e) sim.step(rng);
    }
    snapshot(static_cast<std::int64_t>(k));
  }
  return panel;
}

}  // namespace polardyn
