#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polardyn/config.hpp"
#include "polardyn/estimation.hpp"
#include "polardyn/meanfield.hpp"
#include "polardyn/network_sim.hpp"
#include "polardyn/panel.hpp"
#include "polardyn/party_graph.hpp"

namespace polardyn::io {

// File formats (all CSV, comma separated, '#' lines are comments):
//   edges       u,v                 one undirected edge per line; optional
//                                   header line "u,v"
//   nodes       node_id,party      party in {0,1}; optional header
//   stances     node_id,stance     explicit initial stances; optional header
//   panel       node_id,interval,party,stance                (header required)
//   observations node_id,time_index,party,stance_t,stance_t1,d_in_1,d_out_1
//                                                             (header required)

struct CsvRecord {
  std::size_t line = 0;  // 1-based line number in the file
  std::vector<std::string> fields;
};

// Reads data rows. If `header` is non-empty the first data line must equal
// it (required) or may equal it (optional_header), otherwise Error(Parse).
// A file without any data line yields no records.
std::vector<CsvRecord> read_csv(const std::filesystem::path& path,
                                const std::vector<std::string>& header,
                                bool optional_header);

struct GraphLoad {
  PartyGraph graph;
  std::size_t duplicate_edges = 0;
};

// Errors name file and line: missing attribute for an edge endpoint,
// non-binary party, self-loop, malformed line.
GraphLoad load_graph(const std::filesystem::path& edge_path,
                     const std::filesystem::path& attr_path);
void write_graph(std::ostream& edges, std::ostream& nodes, const PartyGraph& graph);
void save_graph(const PartyGraph& graph, const std::filesystem::path& edge_path,
                const std::filesystem::path& attr_path);

ExplicitStances load_stances(const std::filesystem::path& path);

StancePanel load_panel(const std::filesystem::path& path);
void write_panel(std::ostream& out, const StancePanel& panel);

struct ObservationRow {
  std::string node_id;
  std::int64_t time_index = 0;
  Party party = Party::Blue;
  TransitionRecord record;
};

std::vector<ObservationRow> load_observations(const std::filesystem::path& path);
void write_observations(std::ostream& out, const std::vector<ObservationRow>& rows);

// Run provenance written as leading '#' lines of every output file:
//   # polardyn <version>
//   # command: <name>
//   # config_hash: <16 hex digits>
//   # rng: <algorithm>
//   # measure: <kind>            (when the command has one)
//   # seed: <n>                  (when the command has one)
//   # set <key> = <value>        (every resolved config key, sorted)
// The `set` lines alone reproduce the run (see `polardyn replay`).
struct RunMetadata {
  std::string command;
  KeyValueConfig config;
  std::optional<std::string> measure;
  std::optional<std::uint64_t> seed;
};

void write_metadata(std::ostream& out, const RunMetadata& meta);
RunMetadata read_metadata(const std::filesystem::path& path);

// event,t,theta_blue,theta_red  (and a leading replicate column when given)
void write_trajectory(std::ostream& out, const Trajectory& traj,
                      std::optional<std::size_t> replicate = std::nullopt,
                      bool header = true);

// t,theta_blue,theta_red,days  every `every`-th state plus the last one.
void write_meanfield(std::ostream& out, const std::vector<MeanFieldState>& states,
                     double days_per_unit, std::size_t every = 1);

// t,theta_<label>...,days
void write_multiparty(std::ostream& out, const std::vector<MultiPartyState<double>>& states,
                      const std::vector<std::string>& labels, double days_per_unit,
                      std::size_t every = 1);

// key = value estimation report. Standard errors come from the inverse
// observed information; the pseudo-R2 is McFadden's.
void write_estimation(std::ostream& out, const EstimationResult& result);

// Writes `content` to `path`, creating parent directories; Error(Io) on failure.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace polardyn::io
