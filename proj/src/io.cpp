#include "polardyn/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "polardyn/error.hpp"
#include "polardyn/rng.hpp"

#ifndef POLARDYN_VERSION
#define POLARDYN_VERSION "dev"
#endif

namespace polardyn::io {

namespace {

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + fields[i];
  return out;
}

void expect_fields(const std::filesystem::path& path, const CsvRecord& rec, std::size_t n) {
  if (rec.fields.size() != n) {
    throw Error(ErrorCategory::Parse, where(path, rec.line) + ": expected " + std::to_string(n) +
                                          " fields, found " + std::to_string(rec.fields.size()));
  }
}

long parse_binary_int(const std::filesystem::path& path, const CsvRecord& rec,
                      const std::string& field, std::string_view what) {
  try {
    return static_cast<long>(parse_int(field, what));
  } catch (const Error& e) {
    throw Error(ErrorCategory::Parse, where(path, rec.line) + ": " + e.what());
  }
}

Party field_party(const std::filesystem::path& path, const CsvRecord& rec,
                  const std::string& field) {
  const long v = parse_binary_int(path, rec, field, "party");
  if (v != 0 && v != 1) {
    throw Error(ErrorCategory::Input,
                where(path, rec.line) + ": party must be 0 or 1, got " + std::to_string(v));
  }
  return party_from_int(v);
}

Stance field_stance(const std::filesystem::path& path, const CsvRecord& rec,
                    const std::string& field, std::string_view what) {
  const long v = parse_binary_int(path, rec, field, what);
  if (v != 0 && v != 1) {
    throw Error(ErrorCategory::Input, where(path, rec.line) + ": " + std::string(what) +
                                          " must be 0 or 1, got " + std::to_string(v));
  }
  return stance_from_int(v);
}

double field_double(const std::filesystem::path& path, const CsvRecord& rec,
                    const std::string& field, std::string_view what) {
  try {
    return parse_double(field, what);
  } catch (const Error& e) {
    throw Error(ErrorCategory::Parse, where(path, rec.line) + ": " + e.what());
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::Io, "cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<CsvRecord> read_csv(const std::filesystem::path& path,
                                const std::vector<std::string>& header, bool optional_header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::Io, "cannot open " + path.string());
  std::vector<CsvRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    CsvRecord rec{line_no, split(t, ',')};
    if (first && !header.empty()) {
      first = false;
      if (rec.fields == header) continue;
      if (!optional_header) {
        throw Error(ErrorCategory::Parse, where(path, line_no) + ": expected header '" +
                                              join(header) + "'");
      }
    }
    first = false;
    records.push_back(std::move(rec));
  }
  if (in.bad()) throw Error(ErrorCategory::Io, "error reading " + path.string());
  return records;
}

GraphLoad load_graph(const std::filesystem::path& edge_path,
                     const std::filesystem::path& attr_path) {
  PartyGraph::Builder builder;
  for (const auto& rec : read_csv(attr_path, {"node_id", "party"}, true)) {
    expect_fields(attr_path, rec, 2);
    if (rec.fields[0].empty()) {
      throw Error(ErrorCategory::Parse, where(attr_path, rec.line) + ": empty node id");
    }
    const Party party = field_party(attr_path, rec, rec.fields[1]);
    if (builder.has_node(rec.fields[0])) {
      throw Error(ErrorCategory::Input,
                  where(attr_path, rec.line) + ": duplicate node '" + rec.fields[0] + "'");
    }
    builder.add_node(rec.fields[0], party);
  }
  const auto edges = read_csv(edge_path, {"u", "v"}, true);
  builder.reserve_edges(edges.size());
  for (const auto& rec : edges) {
    expect_fields(edge_path, rec, 2);
    for (const auto& end : rec.fields) {
      if (!builder.has_node(end)) {
        throw Error(ErrorCategory::Input, where(edge_path, rec.line) + ": node '" + end +
                                              "' has no party attribute in " +
                                              attr_path.string());
      }
    }
    if (rec.fields[0] == rec.fields[1]) {
      throw Error(ErrorCategory::Input,
                  where(edge_path, rec.line) + ": self-loop on '" + rec.fields[0] + "'");
    }
    builder.add_edge(rec.fields[0], rec.fields[1]);
  }
  GraphLoad out;
  out.duplicate_edges = builder.duplicate_edges();
  out.graph = std::move(builder).build();
  return out;
}

void write_graph(std::ostream& edges, std::ostream& nodes, const PartyGraph& graph) {
  nodes << "node_id,party\n";
  for (PartyGraph::Index v = 0; v < graph.size(); ++v) {
    nodes << graph.id(v) << ',' << as_int(graph.party(v)) << '\n';
  }
  edges << "u,v\n";
  for (const auto& [u, v] : graph.edges()) edges << graph.id(u) << ',' << graph.id(v) << '\n';
}

void save_graph(const PartyGraph& graph, const std::filesystem::path& edge_path,
                const std::filesystem::path& attr_path) {
  std::ostringstream edges;
  std::ostringstream nodes;
  write_graph(edges, nodes, graph);
  write_file(attr_path, nodes.str());
  write_file(edge_path, edges.str());
}

ExplicitStances load_stances(const std::filesystem::path& path) {
  ExplicitStances out;
  for (const auto& rec : read_csv(path, {"node_id", "stance"}, true)) {
    expect_fields(path, rec, 2);
    const Stance s = field_stance(path, rec, rec.fields[1], "stance");
    if (!out.emplace(rec.fields[0], s).second) {
      throw Error(ErrorCategory::Input,
                  where(path, rec.line) + ": duplicate node '" + rec.fields[0] + "'");
    }
  }
  return out;
}

StancePanel load_panel(const std::filesystem::path& path) {
  StancePanel panel;
  for (const auto& rec : read_csv(path, {"node_id", "interval", "party", "stance"}, false)) {
    expect_fields(path, rec, 4);
    PanelRow row;
    row.node_id = rec.fields[0];
    row.interval = parse_binary_int(path, rec, rec.fields[1], "interval");
    row.party = field_party(path, rec, rec.fields[2]);
    row.stance = field_stance(path, rec, rec.fields[3], "stance");
    panel.rows.push_back(std::move(row));
  }
  panel.validate();
  return panel;
}

void write_panel(std::ostream& out, const StancePanel& panel) {
  out << "node_id,interval,party,stance\n";
  for (const auto& row : panel.rows) {
    out << row.node_id << ',' << row.interval << ',' << as_int(row.party) << ','
        << as_int(row.stance) << '\n';
  }
}

std::vector<ObservationRow> load_observations(const std::filesystem::path& path) {
  std::vector<ObservationRow> rows;
  const std::vector<std::string> header = {"node_id", "time_index", "party", "stance_t",
                                           "stance_t1", "d_in_1", "d_out_1"};
  for (const auto& rec : read_csv(path, header, false)) {
    expect_fields(path, rec, 7);
    ObservationRow row;
    row.node_id = rec.fields[0];
    row.time_index = parse_binary_int(path, rec, rec.fields[1], "time_index");
    row.party = field_party(path, rec, rec.fields[2]);
    row.record.before = field_stance(path, rec, rec.fields[3], "stance_t");
    row.record.after = field_stance(path, rec, rec.fields[4], "stance_t1");
    const double in_1 = field_double(path, rec, rec.fields[5], "d_in_1");
    const double out_1 = field_double(path, rec, rec.fields[6], "d_out_1");
    if (std::abs(in_1) > 1.0 || std::abs(out_1) > 1.0) {
      throw Error(ErrorCategory::Input,
                  where(path, rec.line) + ": influence components must lie in [-1, 1]");
    }
    row.record.influence = InfluenceVector::from_stance_one(in_1, out_1);
    row.record.node_id = row.node_id;
    row.record.time = row.time_index;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_observations(std::ostream& out, const std::vector<ObservationRow>& rows) {
  out << "node_id,time_index,party,stance_t,stance_t1,d_in_1,d_out_1\n";
  for (const auto& row : rows) {
    out << row.node_id << ',' << row.time_index << ',' << as_int(row.party) << ','
        << as_int(row.record.before) << ',' << as_int(row.record.after) << ','
        << format_double(row.record.influence.d_in_1) << ','
        << format_double(row.record.influence.d_out_1) << '\n';
  }
}

void write_metadata(std::ostream& out, const RunMetadata& meta) {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, config_hash(meta.config));
  out << "# polardyn " << POLARDYN_VERSION << '\n';
  out << "# command: " << meta.command << '\n';
  out << "# config_hash: " << hash << '\n';
  out << "# rng: " << Rng::kAlgorithm << '\n';
  if (meta.measure) out << "# measure: " << *meta.measure << '\n';
  if (meta.seed) out << "# seed: " << *meta.seed << '\n';
  for (const auto& [k, v] : meta.config.entries()) out << "# set " << k << " = " << v << '\n';
}

RunMetadata read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::Io, "cannot open " + path.string());
  RunMetadata meta;
  std::string line;
  std::size_t line_no = 0;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = trim(line);
    if (t.empty()) continue;
    if (t.front() != '#') break;
    const std::string_view body = trim(t.substr(1));
    const auto take = [&](std::string_view prefix, auto&& fn) {
      if (body.substr(0, prefix.size()) != prefix) return false;
      fn(trim(body.substr(prefix.size())));
      return true;
    };
    any = take("polardyn ", [](std::string_view) {}) || any;
    take("command:", [&](std::string_view v) { meta.command = std::string(v); });
    take("measure:", [&](std::string_view v) { meta.measure = std::string(v); });
    take("seed:", [&](std::string_view v) {
      meta.seed = static_cast<std::uint64_t>(parse_int(v, "seed"));
    });
    take("set ", [&](std::string_view v) {
      const std::size_t eq = v.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorCategory::Parse, where(path, line_no) + ": malformed set line");
      }
      meta.config.set(std::string(trim(v.substr(0, eq))), std::string(trim(v.substr(eq + 1))));
    });
  }
  if (!any || meta.command.empty()) {
    throw Error(ErrorCategory::Parse, path.string() + ": no polardyn metadata header");
  }
  return meta;
}

void write_trajectory(std::ostream& out, const Trajectory& traj,
                      std::optional<std::size_t> replicate, bool header) {
  if (header) out << (replicate ? "replicate," : "") << "event,t,theta_blue,theta_red\n";
  for (const auto& row : traj.rows) {
    if (replicate) out << *replicate << ',';
    out << row.event << ',' << format_double(traj.time(row)) << ','
        << format_double(row.theta_blue) << ',' << format_double(row.theta_red) << '\n';
  }
}

void write_meanfield(std::ostream& out, const std::vector<MeanFieldState>& states,
                     double days_per_unit, std::size_t every) {
  if (every == 0) every = 1;
  out << "t,theta_blue,theta_red,days\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i % every != 0 && i + 1 != states.size()) continue;
    const auto& s = states[i];
    out << format_double(s.t) << ',' << format_double(s.theta_blue) << ','
        << format_double(s.theta_red) << ',' << format_double(s.t * days_per_unit) << '\n';
  }
}

void write_multiparty(std::ostream& out, const std::vector<MultiPartyState<double>>& states,
                      const std::vector<std::string>& labels, double days_per_unit,
                      std::size_t every) {
  if (every == 0) every = 1;
  out << 't';
  for (const auto& label : labels) out << ",theta_" << label;
  out << ",days\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (i % every != 0 && i + 1 != states.size()) continue;
    const auto& s = states[i];
    out << format_double(s.t);
    for (Eigen::Index g = 0; g < s.theta.size(); ++g) out << ',' << format_double(s.theta(g));
    out << ',' << format_double(s.t * days_per_unit) << '\n';
  }
}

void write_estimation(std::ostream& out, const EstimationResult& r) {
  out << "alpha_hat = " << format_double(r.alpha_hat) << '\n'
      << "beta_hat = " << format_double(r.beta_hat) << '\n'
      << "delta_hat = " << format_double(r.delta_hat) << '\n'
      << "std_error_alpha = " << format_double(r.std_errors[0]) << '\n'
      << "std_error_beta = " << format_double(r.std_errors[1]) << '\n'
      << "std_error_delta = " << format_double(r.std_errors[2]) << '\n'
      << "pseudo_r2_mcfadden = " << format_double(r.pseudo_r2) << '\n'
      << "log_likelihood = " << format_double(r.log_likelihood) << '\n'
      << "null_log_likelihood = " << format_double(r.null_log_likelihood) << '\n'
      << "n_obs = " << r.n_obs << '\n'
      << "converged = " << (r.converged ? "true" : "false") << '\n'
      << "iterations = " << r.iterations << '\n'
      << "gradient_norm = " << format_double(r.gradient_norm) << '\n'
      << "intercept_only = " << (r.intercept_only ? "true" : "false") << '\n'
      << "ridge = " << format_double(r.ridge) << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCategory::Io, "error writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace polardyn::io
