#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polardyn/meanfield.hpp"

namespace polardyn {

enum class Outcome {
  Consensus,
  PartisanPolarization,
  NonPartisanSplit,
  Crossover,
  Horseshoe,
  Other,
};

std::string_view to_string(Outcome outcome);

// Endpoint classification thresholds. The model only separates regimes
// visually; these values are fixed for the release, and changing any of
// them is a breaking change.
struct ClassifierThresholds {
  static constexpr double kConsensusGap = 0.1;      // |theta_B - theta_R| below
  static constexpr double kConsensusExtreme = 0.1;  // both within this of 0 or 1
  static constexpr double kPolarizedGap = 0.5;      // gap above, opposite sides of 0.5
  static constexpr double kSplitBand = 0.05;        // both within this of 0.5
  static constexpr double kCrossoverGap = 0.01;     // gap magnitude counted as a sign
  static constexpr double kHorseshoeAgree = 0.1;    // extremes within this of each other
  static constexpr double kHorseshoeApart = 0.5;    // extremes beyond this from moderates
};

// Priority: crossover, consensus, partisan polarization, non-partisan split,
// other.
Outcome classify_two_party(std::span<const MeanFieldState> trajectory);

// Horseshoe iff the two extreme groups agree and both differ from the
// moderate group; otherwise Other.
Outcome classify_multi_party(const Eigen::VectorXd& endpoint, Eigen::Index extreme_a,
                             Eigen::Index extreme_b, Eigen::Index moderate);

double terminal_gap(std::span<const MeanFieldState> trajectory);  // theta_B - theta_R at the end
bool is_consensus_pro(std::span<const MeanFieldState> trajectory);

struct ScenarioRecord {
  std::string id;
  std::string description;
  std::string parameters;      // human-readable parameter set
  std::string provenance;      // where the numbers come from
  std::vector<double> endpoint;
  Outcome outcome = Outcome::Other;
  std::optional<Outcome> expected;
  bool pass = true;
};

// A relational assertion across scenarios (orderings, limits).
struct CheckRecord {
  std::string id;
  std::string description;
  bool pass = false;
};

struct RegimeReport {
  std::string suite_id;
  std::vector<ScenarioRecord> scenarios;
  std::vector<CheckRecord> checks;

  bool all_pass() const;
  const ScenarioRecord& scenario(std::string_view id) const;
  const CheckRecord& check(std::string_view id) const;
};

struct SuiteTrajectory {
  std::string scenario_id;
  std::vector<MeanFieldState> two_party;
  std::vector<MultiPartyState<double>> multi_party;
  std::vector<std::string> labels;
};

struct SuiteResult {
  RegimeReport report;
  std::vector<SuiteTrajectory> trajectories;
};

// Documented suite ids.
std::vector<std::string> suite_ids();

// Throws Error(Config) for an unknown id.
SuiteResult run_figure_suite(std::string_view suite_id);

// Writes <dir>/<scenario>.csv for each trajectory and <dir>/summary.txt.
void write_suite(const SuiteResult& result, const std::filesystem::path& dir,
                 const std::string& metadata_header);

std::string format_report(const RegimeReport& report);

// Calibrated two-party issue: estimated parameters plus measured r and
// common initial prevalence.
struct IssueConfig {
  std::string name;
  ModelParams params;
  double r = 0.5;
  double theta0 = 0.5;
};

// Shipped calibrations (estimated coefficient tables and measured shares).
IssueConfig masking_all_users();
IssueConfig masking_partisans();
IssueConfig lockdowns_all_users();
IssueConfig lockdowns_partisans();
// Message-exposure estimates with the same r and theta(0).
IssueConfig masking_all_users_messages();
IssueConfig masking_partisans_messages();
IssueConfig lockdowns_all_users_messages();
IssueConfig lockdowns_partisans_messages();

TwoPartyConfig to_two_party(const IssueConfig& issue, double t_end = 100.0,
                            double epsilon = 0.01);

struct SweepResult {
  RegimeReport report;
  std::vector<SuiteTrajectory> trajectories;
};

// One trajectory per beta at the issue's alpha, delta, r and theta(0).
// Negative betas run with out-group love enabled. The report carries one
// scenario per beta and a check that the terminal gap is non-decreasing
// along an ascending grid.
SweepResult outgroup_sweep(const IssueConfig& issue, std::span<const double> beta_grid,
                           double t_end = 100.0, double epsilon = 0.01);

// Shipped five-group configurations (HL, L, I, R, HR with shares
// 5/25/40/25/5 %). The matrices are constructed, not transcribed.
struct MultiPartyScenario {
  EmotionMatrix<double> em;
  Eigen::VectorXd theta0;
};
MultiPartyScenario five_group_alignment();
MultiPartyScenario five_group_horseshoe();

}  // namespace polardyn
