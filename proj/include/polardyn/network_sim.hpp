#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "polardyn/core_model.hpp"
#include "polardyn/panel.hpp"
#include "polardyn/party_graph.hpp"
#include "polardyn/rng.hpp"

namespace polardyn {

using ExplicitStances = std::unordered_map<std::string, Stance>;

struct BernoulliStances {
  double theta_blue = 0.5;
  double theta_red = 0.5;
};

using InitialStanceSpec = std::variant<ExplicitStances, BernoulliStances>;

// Assigns every node a stance. Bernoulli draws are made in node-index order.
// An explicit map missing a node throws Error(Input) naming that node.
void init_stances(PartyGraph& graph, const InitialStanceSpec& spec, Rng& rng);

struct SimConfig {
  ModelParams params;
  InfluenceMeasureKind measure = InfluenceMeasureKind::DegreeNormalizedCount;
  std::uint64_t horizon_events = 1;
  std::uint64_t record_every = 1;
  std::uint64_t seed = 0;
  InitialStanceSpec init = BernoulliStances{};

  void validate() const;
};

struct TrajectoryRow {
  std::uint64_t event = 0;
  double theta_blue = 0.0;
  double theta_red = 0.0;
};

struct Trajectory {
  std::size_t node_count = 0;
  std::vector<TrajectoryRow> rows;

  // Continuous model time of a row: events per node.
  double time(const TrajectoryRow& row) const {
    return static_cast<double>(row.event) / static_cast<double>(node_count);
  }
};

struct StepResult {
  PartyGraph::Index node = 0;
  bool switched = false;
};

// One asynchronous update: a uniformly sampled node switches with the model
// probability. Influence is recomputed from the graph.
StepResult step(PartyGraph& graph, const ModelParams& params, InfluenceMeasureKind measure,
                Rng& rng);

// Same dynamics as step() with neighbor tallies maintained incrementally.
// Complete graphs use four global (party, stance) counters instead of
// per-node tallies.
class Simulator {
 public:
  Simulator(PartyGraph graph, ModelParams params, InfluenceMeasureKind measure);

  StepResult step(Rng& rng);

  // Flips a node's stance and updates the tallies of everything that sees it.
  void flip(PartyGraph::Index node);

  NeighborCounts counts(PartyGraph::Index node) const;
  InfluenceVector influence(PartyGraph::Index node) const;

  const PartyGraph& graph() const noexcept { return graph_; }
  double prevalence(Party p) const;

 private:
  PartyGraph graph_;
  ModelParams params_;
  InfluenceMeasureKind measure_;
  bool complete_ = false;
  // [party][stance]
  std::int64_t global_[2][2] = {{0, 0}, {0, 0}};
  std::vector<NeighborCounts> local_;
};

// Copies the graph, initializes stances from config.init using the run's
// generator, then advances horizon_events updates. Rows: initial state plus a
// snapshot after every record_every events and after the last event.
Trajectory run(const PartyGraph& graph, const SimConfig& config);

// Replicate i runs with seed derive_seed(config.seed, i). Replicates are
// independent and may execute on up to `threads` workers (0 = hardware).
std::vector<Trajectory> ensemble_run(const PartyGraph& graph, const SimConfig& config,
                                     std::size_t replicates, unsigned threads = 0);

// Pointwise mean of equally-shaped trajectories.
Trajectory ensemble_mean(const std::vector<Trajectory>& trajectories);

enum class PanelScheme {
  // Each interval every node updates exactly once from the interval-start
  // state (synchronous sweep).
  Synchronous,
  // Snapshots of the asynchronous dynamics every n events.
  Asynchronous,
};

std::string_view to_string(PanelScheme scheme);
PanelScheme parse_panel_scheme(std::string_view text);

struct PanelSimConfig {
  ModelParams params;
  InfluenceMeasureKind measure = InfluenceMeasureKind::DegreeNormalizedCount;
  std::size_t intervals = 20;  // number of transitions; intervals + 1 snapshots
  PanelScheme scheme = PanelScheme::Synchronous;
  std::uint64_t seed = 0;
  InitialStanceSpec init = BernoulliStances{};
};

// Every node is observed at every snapshot.
StancePanel simulate_panel(const PartyGraph& graph, const PanelSimConfig& config);

}  // namespace polardyn
