#include "polardyn/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "polardyn/config.hpp"
#include "polardyn/error.hpp"
#include "polardyn/experiments.hpp"
#include "polardyn/generators.hpp"
#include "polardyn/io.hpp"
#include "polardyn/rng.hpp"

namespace polardyn::cli {

namespace {

namespace fs = std::filesystem;

struct Context {
  std::string command;
  KeyValueConfig cfg;
  fs::path out_dir;
  std::ostream* log = &std::cout;

  std::string header() const {
    io::RunMetadata meta;
    meta.command = command;
    meta.config = cfg;
    if (cfg.has("measure")) meta.measure = cfg.get("measure");
    if (cfg.has("seed")) meta.seed = cfg.get_uint("seed");
    std::ostringstream ss;
    io::write_metadata(ss, meta);
    return ss.str();
  }

  void emit(const std::string& name, const std::string& body) const {
    const fs::path path = out_dir / name;
    io::write_file(path, header() + body);
    *log << "wrote " << path.string() << '\n';
  }
};

struct Command {
  std::string name;
  std::string summary;
  ConfigSchema schema;
  std::function<int(const Context&)> run;
};

// Shared key groups.

ConfigSchema model_keys() {
  return {{"alpha", "", "in-group love, >= 0 (required)"},
          {"beta", "", "out-group hate (required; < 0 needs allow_outgroup_love)"},
          {"delta", "", "inertia, >= 0 (required)"},
          {"allow_outgroup_love", "false", "accept beta < 0"}};
}

ConfigSchema graph_keys(const std::string& n, const std::string& r) {
  return {{"graph", "complete", "complete | two-block | file"},
          {"graph.n", n, "node count for generated graphs"},
          {"graph.r", r, "red fraction for generated graphs"},
          {"graph.p_in", "0.1", "two-block same-party edge probability"},
          {"graph.p_out", "0.02", "two-block cross-party edge probability"},
          {"graph.seed", "1", "two-block edge seed"},
          {"graph.edges", "", "edge CSV (graph = file)"},
          {"graph.nodes", "", "node attribute CSV (graph = file)"}};
}

ConfigSchema fit_keys() {
  return {{"ridge", "0", "L2 penalty on the influence coefficients"},
          {"intercept_only", "false", "fit only the inertia term"},
          {"tolerance", "1e-8", "gradient-norm convergence tolerance"},
          {"max_iterations", "100", "Newton iteration cap"}};
}

ConfigSchema concat(std::initializer_list<ConfigSchema> parts) {
  ConfigSchema out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

ModelParams model_params(const KeyValueConfig& c) {
  ModelParams p{c.get_double("alpha"), c.get_double("beta"), c.get_double("delta"),
                c.get_bool("allow_outgroup_love")};
  p.validate();
  return p;
}

FitOptions fit_options(const KeyValueConfig& c) {
  FitOptions o;
  o.ridge = c.get_double("ridge");
  o.intercept_only = c.get_bool("intercept_only");
  o.gradient_tolerance = c.get_double("tolerance");
  o.max_iterations = static_cast<int>(c.get_int("max_iterations"));
  if (!(o.gradient_tolerance > 0.0)) throw Error(ErrorCategory::Config, "tolerance must be > 0");
  if (o.max_iterations < 1) throw Error(ErrorCategory::Config, "max_iterations must be >= 1");
  return o;
}

std::size_t positive_size(const KeyValueConfig& c, const std::string& key) {
  const auto v = c.get_uint(key);
  if (v == 0) throw Error(ErrorCategory::Config, key + " must be >= 1");
  return static_cast<std::size_t>(v);
}

PartyGraph load_graph_source(const KeyValueConfig& c) {
  const std::string& kind = c.get("graph");
  if (kind == "complete") return complete_graph(positive_size(c, "graph.n"), c.get_double("graph.r"));
  if (kind == "two-block") {
    return two_block_graph(positive_size(c, "graph.n"), c.get_double("graph.r"),
                           c.get_double("graph.p_in"), c.get_double("graph.p_out"),
                           c.get_uint("graph.seed"));
  }
  if (kind == "file") {
    auto loaded = io::load_graph(c.get("graph.edges"), c.get("graph.nodes"));
    if (loaded.duplicate_edges > 0) {
      std::cerr << "warning: ignored " << loaded.duplicate_edges << " duplicate edges\n";
    }
    return std::move(loaded.graph);
  }
  throw Error(ErrorCategory::Config,
              "graph must be complete, two-block or file, got '" + kind + "'");
}

InitialStanceSpec initial_stances(const KeyValueConfig& c) {
  if (c.has("init.stances")) return io::load_stances(c.get("init.stances"));
  return BernoulliStances{c.get_double("init.theta_blue"), c.get_double("init.theta_red")};
}

std::string estimation_body(const EstimationResult& r) {
  std::ostringstream ss;
  io::write_estimation(ss, r);
  return ss.str();
}

// Subcommands.

int cmd_simulate(const Context& ctx) {
  const auto& c = ctx.cfg;
  const PartyGraph graph = load_graph_source(c);
  SimConfig sim;
  sim.params = model_params(c);
  sim.measure = parse_measure(c.get("measure"));
  const double horizon = c.get_double("horizon");
  if (!(horizon > 0.0)) throw Error(ErrorCategory::Config, "horizon must be > 0");
  sim.horizon_events = static_cast<std::uint64_t>(
      std::llround(horizon * static_cast<double>(graph.size())));
  sim.record_every = c.get_uint("record_every");
  if (sim.record_every == 0) sim.record_every = graph.size();
  sim.seed = c.get_uint("seed");
  sim.init = initial_stances(c);
  const std::size_t replicates = positive_size(c, "replicates");
  const auto threads = static_cast<unsigned>(c.get_uint("threads"));

  std::ostringstream body;
  if (replicates == 1) {
    io::write_trajectory(body, run(graph, sim));
    ctx.emit("trajectory.csv", body.str());
    return 0;
  }
  const auto runs = ensemble_run(graph, sim, replicates, threads);
  for (std::size_t i = 0; i < runs.size(); ++i) io::write_trajectory(body, runs[i], i, i == 0);
  ctx.emit("trajectory.csv", body.str());
  std::ostringstream mean;
  io::write_trajectory(mean, ensemble_mean(runs));
  ctx.emit("trajectory_mean.csv", mean.str());
  return 0;
}

TwoPartyConfig two_party_config(const KeyValueConfig& c) {
  TwoPartyConfig mf;
  mf.params = model_params(c);
  mf.r = c.get_double("r");
  mf.measure = parse_measure(c.get("measure"));
  mf.theta_blue_0 = c.get_double("theta_blue_0");
  mf.theta_red_0 = c.get_double("theta_red_0");
  mf.epsilon = c.get_double("epsilon");
  mf.t_end = c.get_double("t_end");
  mf.validate();
  return mf;
}

int cmd_meanfield(const Context& ctx) {
  const auto& c = ctx.cfg;
  const auto traj = integrate_two_party(two_party_config(c));
  std::ostringstream body;
  io::write_meanfield(body, traj, c.get_double("days_per_unit"), positive_size(c, "output_every"));
  ctx.emit("meanfield.csv", body.str());
  *ctx.log << "outcome: " << to_string(classify_two_party(traj)) << '\n';
  return 0;
}

int cmd_multiparty(const Context& ctx) {
  const auto& c = ctx.cfg;
  EmotionMatrix<double> em;
  const auto rows = c.get_matrix("A");
  const auto n = static_cast<Eigen::Index>(rows.size());
  em.A.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != n) {
      throw Error(ErrorCategory::Config, "A must be square");
    }
    for (Eigen::Index j = 0; j < n; ++j) em.A(i, j) = rows[i][j];
  }
  const auto to_vector = [n](const std::vector<double>& v, const std::string& key) {
    if (v.size() == 1) return Eigen::VectorXd::Constant(n, v[0]).eval();
    if (static_cast<Eigen::Index>(v.size()) != n) {
      throw Error(ErrorCategory::Config, key + " needs one entry per group");
    }
    return Eigen::Map<const Eigen::VectorXd>(v.data(), n).eval();
  };
  em.r = to_vector(c.get_doubles("r"), "r");
  em.delta = to_vector(c.get_doubles("delta"), "delta");
  if (c.has("labels")) {
    em.labels = c.get_strings("labels");
  } else {
    for (Eigen::Index i = 0; i < n; ++i) em.labels.push_back("g" + std::to_string(i));
  }
  const Eigen::VectorXd theta0 = to_vector(c.get_doubles("theta0"), "theta0");
  const auto traj =
      integrate_multi_party(em, theta0, c.get_double("epsilon"), c.get_double("t_end"));
  std::ostringstream body;
  io::write_multiparty(body, traj, em.labels, c.get_double("days_per_unit"),
                       positive_size(c, "output_every"));
  ctx.emit("multiparty.csv", body.str());
  if (n >= 3) {
    const Outcome o = classify_multi_party(traj.back().theta, 0, n - 1, n / 2);
    *ctx.log << "outcome: " << to_string(o) << '\n';
  }
  return 0;
}

int cmd_estimate(const Context& ctx) {
  const auto rows = io::load_observations(ctx.cfg.get("observations"));
  std::vector<TransitionRecord> records;
  records.reserve(rows.size());
  for (const auto& r : rows) records.push_back(r.record);
  const auto obs = build_observations_case1(records);
  const auto result = fit_logistic(obs, fit_options(ctx.cfg));
  std::string body = estimation_body(result);
  body += "measure = " + std::string(to_string(parse_measure(ctx.cfg.get("measure")))) + "\n";
  ctx.emit("estimate.txt", body);
  return 0;
}

int cmd_panel_estimate(const Context& ctx) {
  const auto panel = io::load_panel(ctx.cfg.get("panel"));
  Case2Options opt;
  opt.coding = parse_transition_coding(ctx.cfg.get("coding"));
  const auto obs = build_observations_case2(panel, opt);
  if (obs.interval_pairs_skipped > 0) {
    std::cerr << "warning: skipped " << obs.interval_pairs_skipped
              << " interval pairs with no shared node\n";
  }
  const auto result = fit_logistic(obs.rows, fit_options(ctx.cfg));
  std::string body = estimation_body(result);
  body += "coding = " + std::string(to_string(opt.coding)) + "\n";
  body += "measure = degree-normalized-count\n";
  body += "interval_pairs_used = " + std::to_string(obs.interval_pairs_used) + "\n";
  body += "interval_pairs_skipped = " + std::to_string(obs.interval_pairs_skipped) + "\n";
  ctx.emit("estimate.txt", body);
  return 0;
}

PanelSimConfig panel_config(const KeyValueConfig& c, std::uint64_t seed) {
  PanelSimConfig pc;
  pc.params = model_params(c);
  pc.measure = parse_measure(c.get("measure"));
  pc.intervals = positive_size(c, "intervals");
  pc.scheme = parse_panel_scheme(c.get("scheme"));
  pc.seed = seed;
  pc.init = initial_stances(c);
  return pc;
}

int cmd_synth(const Context& ctx) {
  const auto& c = ctx.cfg;
  const std::string& kind = c.get("kind");
  if (kind == "observations") {
    const auto records = sample_transitions(model_params(c), positive_size(c, "rows"),
                                            c.get_uint("seed"));
    std::vector<io::ObservationRow> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back({r.node_id, r.time, Party::Blue, r});
    std::ostringstream body;
    io::write_observations(body, rows);
    ctx.emit("observations.csv", body.str());
    return 0;
  }
  const PartyGraph graph = load_graph_source(c);
  if (kind == "graph") {
    std::ostringstream edges;
    std::ostringstream nodes;
    io::write_graph(edges, nodes, graph);
    ctx.emit("edges.csv", edges.str());
    ctx.emit("nodes.csv", nodes.str());
    return 0;
  }
  if (kind == "panel") {
    std::ostringstream body;
    io::write_panel(body, simulate_panel(graph, panel_config(c, c.get_uint("seed"))));
    ctx.emit("panel.csv", body.str());
    return 0;
  }
  throw Error(ErrorCategory::Config, "kind must be panel, observations or graph, got '" + kind + "'");
}

int cmd_roundtrip(const Context& ctx) {
  const auto& c = ctx.cfg;
  const PartyGraph graph = load_graph_source(c);
  const ModelParams truth = model_params(c);
  const FitOptions fit = fit_options(c);
  Case2Options opt;
  opt.coding = parse_transition_coding(c.get("coding"));
  const std::size_t replicates = positive_size(c, "replicates");
  const double tol_se = c.get_double("tolerance_se");

  std::ostringstream body;
  body << "replicate,seed,alpha_hat,beta_hat,delta_hat,se_alpha,se_beta,se_delta,"
          "z_alpha,z_beta,z_delta,pass\n";
  std::size_t passed = 0;
  for (std::size_t i = 0; i < replicates; ++i) {
    const std::uint64_t seed = derive_seed(c.get_uint("seed"), i);
    const auto panel = simulate_panel(graph, panel_config(c, seed));
    const auto obs = build_observations_case2(panel, opt);
    const auto r = fit_logistic(obs.rows, fit);
    const double truth_v[3] = {truth.alpha, truth.beta, truth.delta};
    const double hat[3] = {r.alpha_hat, r.beta_hat, r.delta_hat};
    double z[3];
    bool ok = true;
    for (int k = 0; k < 3; ++k) {
      z[k] = (hat[k] - truth_v[k]) / r.std_errors[k];
      ok = ok && std::abs(z[k]) <= tol_se;
    }
    passed += ok ? 1 : 0;
    body << i << ',' << seed;
    for (double v : hat) body << ',' << format_double(v);
    for (double v : r.std_errors) body << ',' << format_double(v);
    for (double v : z) body << ',' << format_double(v);
    body << ',' << (ok ? "true" : "false") << '\n';
  }
  ctx.emit("roundtrip.csv", body.str());
  *ctx.log << "recovered within " << format_double(tol_se) << " SE: " << passed << "/"
           << replicates << '\n';
  return 0;
}

int cmd_sweep(const Context& ctx) {
  const auto& c = ctx.cfg;
  TwoPartyConfig base;
  base.measure = parse_measure(c.get("measure"));
  base.theta_blue_0 = c.get_double("theta_blue_0");
  base.theta_red_0 = c.get_double("theta_red_0");
  base.epsilon = c.get_double("epsilon");
  base.t_end = c.get_double("t_end");
  const bool love = c.get_bool("allow_outgroup_love");
  std::ostringstream body;
  body << "alpha,beta,delta,r,theta_blue_end,theta_red_end,gap,outcome\n";
  for (const double a : c.get_doubles("alpha")) {
    for (const double b : c.get_doubles("beta")) {
      for (const double d : c.get_doubles("delta")) {
        for (const double r : c.get_doubles("r")) {
          TwoPartyConfig cfg = base;
          cfg.params = {a, b, d, love};
          cfg.r = r;
          const auto traj = integrate_two_party(cfg);
          const auto& end = traj.back();
          body << format_double(a) << ',' << format_double(b) << ',' << format_double(d) << ','
               << format_double(r) << ',' << format_double(end.theta_blue) << ','
               << format_double(end.theta_red) << ','
               << format_double(end.theta_blue - end.theta_red) << ','
               << to_string(classify_two_party(traj)) << '\n';
        }
      }
    }
  }
  ctx.emit("sweep.csv", body.str());
  return 0;
}

int cmd_suite(const Context& ctx) {
  const std::string& id = ctx.cfg.get("id");
  std::vector<std::string> ids;
  if (id == "all") {
    ids = suite_ids();
  } else {
    ids.push_back(id);
  }
  bool all_pass = true;
  std::string summary;
  for (const auto& sid : ids) {
    const auto result = run_figure_suite(sid);
    write_suite(result, ctx.out_dir / sid, ctx.header());
    all_pass = all_pass && result.report.all_pass();
    summary += format_report(result.report);
    *ctx.log << sid << ": " << (result.report.all_pass() ? "PASS" : "FAIL") << '\n';
  }
  ctx.emit("summary.txt", summary);
  return all_pass ? 0 : 1;
}

ConfigSchema measure_key() {
  return {{"measure", "degree-normalized-count",
           "degree-normalized-count | group-fraction (aliases def1, def2)"}};
}

ConfigSchema init_keys(const std::string& b, const std::string& r) {
  return {{"init.theta_blue", b, "initial stance-1 probability for blue nodes"},
          {"init.theta_red", r, "initial stance-1 probability for red nodes"},
          {"init.stances", "", "explicit node_id,stance CSV (overrides the probabilities)"}};
}

ConfigSchema panel_keys() {
  return {{"intervals", "20", "number of interval transitions"},
          {"scheme", "sync", "sync (every node updates once per interval) | async"},
          {"seed", "1", "RNG seed"}};
}

std::vector<Command> commands() {
  std::vector<Command> cmds;
  cmds.push_back({"simulate", "stochastic dynamics on a graph",
                  concat({model_keys(), measure_key(), graph_keys("2000", "0.3"),
                          init_keys("0.5", "0.5"),
                          {{"horizon", "10", "model time units (events per node)"},
                           {"record_every", "0", "events between rows (0 = node count)"},
                           {"seed", "1", "RNG seed"},
                           {"replicates", "1", "independent runs; > 1 also writes the mean"},
                           {"threads", "0", "worker threads (0 = hardware)"}}}),
                  cmd_simulate});
  cmds.push_back({"meanfield", "two-party mean-field integration",
                  concat({model_keys(), measure_key(),
                          {{"r", "", "red fraction (required)"},
                           {"theta_blue_0", "0.5", "initial blue prevalence"},
                           {"theta_red_0", "0.5", "initial red prevalence"},
                           {"epsilon", "0.01", "Euler step"},
                           {"t_end", "100", "horizon in model units"},
                           {"days_per_unit", "7", "display scale for the days column"},
                           {"output_every", "1", "write every k-th step"}}}),
                  cmd_meanfield});
  cmds.push_back({"multiparty", "N-group emotion-matrix integration",
                  {{"A", "", "emotion matrix, rows separated by ';' (required)"},
                   {"r", "", "group shares summing to 1 (required)"},
                   {"delta", "", "inertia, one value or one per group (required)"},
                   {"labels", "", "group labels"},
                   {"theta0", "", "initial prevalences, one value or one per group (required)"},
                   {"epsilon", "0.01", "Euler step"},
                   {"t_end", "100", "horizon in model units"},
                   {"days_per_unit", "7", "display scale for the days column"},
                   {"output_every", "1", "write every k-th step"}},
                  cmd_multiparty});
  cmds.push_back({"estimate", "fit from observed influences",
                  concat({{{"observations", "", "observation CSV (required)"},
                           {"measure", "degree-normalized-count",
                            "measure the covariates were computed with (recorded only)"}},
                          fit_keys()}),
                  cmd_estimate});
  cmds.push_back({"panel-estimate", "fit from a stance panel on a complete graph",
                  concat({{{"panel", "", "panel CSV (required)"},
                           {"coding", "change", "change (J = stance changed) | direction"}},
                          fit_keys()}),
                  cmd_panel_estimate});
  cmds.push_back({"synth", "synthetic panels, observations or graphs",
                  concat({{{"kind", "panel", "panel | observations | graph"},
                           {"rows", "100000", "observation rows (kind = observations)"}},
                          model_keys(), measure_key(), graph_keys("2000", "0.3"),
                          init_keys("0.9", "0.9"), panel_keys()}),
                  cmd_synth});
  cmds.push_back({"roundtrip", "synthesize panels and recover the parameters",
                  concat({model_keys(), measure_key(), graph_keys("2000", "0.3"),
                          init_keys("0.9", "0.9"), panel_keys(),
                          {{"coding", "change", "change | direction"},
                           {"replicates", "1", "seeds derived from seed"},
                           {"tolerance_se", "3", "pass band in standard errors"}},
                          fit_keys()}),
                  cmd_roundtrip});
  cmds.push_back({"sweep", "grid of mean-field endpoints and outcomes",
                  concat({{{"alpha", "", "comma list (required)"},
                           {"beta", "", "comma list (required)"},
                           {"delta", "", "comma list (required)"},
                           {"r", "", "comma list (required)"},
                           {"allow_outgroup_love", "false", "accept beta < 0"},
                           {"theta_blue_0", "0.8", "initial blue prevalence"},
                           {"theta_red_0", "0.8", "initial red prevalence"},
                           {"epsilon", "0.01", "Euler step"},
                           {"t_end", "100", "horizon in model units"}},
                          measure_key()}),
                  cmd_sweep});
  cmds.push_back({"suite", "regime reproduction suites",
                  {{"id", "all", "suite id or all"}}, cmd_suite});
  return cmds;
}

std::string schema_help(const ConfigSchema& schema) {
  std::ostringstream ss;
  ss << "Config keys (--config file or --set key=value):\n";
  for (const auto& k : schema) {
    ss << "  " << k.name;
    if (!k.default_value.empty()) ss << " [" << k.default_value << "]";
    ss << "\n      " << k.help << '\n';
  }
  return ss.str();
}

fs::path default_out_dir() {
  const char* env = std::getenv("POLARDYN_OUTPUT_DIR");
  return env && *env ? fs::path(env) : fs::path(".");
}

int execute(const Command& cmd, const KeyValueConfig& user, const fs::path& out) {
  Context ctx;
  ctx.command = cmd.name;
  ctx.cfg = resolve(cmd.schema, user);
  ctx.out_dir = out;
  return cmd.run(ctx);
}

int run_impl(int argc, const char* const* argv) {
  CLI::App app{"polardyn: affective-polarization dynamics and estimation"};
  app.set_version_flag("--version", POLARDYN_VERSION);
  app.require_subcommand(1);

  const auto cmds = commands();
  struct Args {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
  };
  std::vector<Args> args(cmds.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    auto* sub = app.add_subcommand(cmds[i].name, cmds[i].summary);
    sub->add_option("--config", args[i].config, "key = value config file");
    sub->add_option("--set", args[i].sets, "override one key (key=value), repeatable");
    sub->add_option("--out", args[i].out, "output directory (default $POLARDYN_OUTPUT_DIR or .)");
    sub->footer(schema_help(cmds[i].schema));
    subs.push_back(sub);
  }
  std::string replay_file;
  std::string replay_out;
  auto* replay = app.add_subcommand("replay", "re-run a command from an output's metadata header");
  replay->add_option("file", replay_file, "any file written by polardyn")->required();
  replay->add_option("--out", replay_out, "output directory (default $POLARDYN_OUTPUT_DIR or .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error[usage]: " << e.what() << '\n';
    return exit_code(ErrorCategory::Usage);
  }

  try {
    if (replay->parsed()) {
      const auto meta = io::read_metadata(replay_file);
      for (const auto& cmd : cmds) {
        if (cmd.name == meta.command) {
          return execute(cmd, meta.config, replay_out.empty() ? default_out_dir() : fs::path(replay_out));
        }
      }
      throw Error(ErrorCategory::Parse, "cannot replay command '" + meta.command + "'");
    }
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (!subs[i]->parsed()) continue;
      KeyValueConfig user;
      if (!args[i].config.empty()) user = KeyValueConfig::load(args[i].config);
      for (const auto& s : args[i].sets) user.set_assignment(s);
      return execute(cmds[i], user, args[i].out.empty() ? default_out_dir() : fs::path(args[i].out));
    }
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.category()) << "]: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error[io]: " << e.what() << '\n';
    return exit_code(ErrorCategory::Io);
  }
  return exit_code(ErrorCategory::Usage);
}

}  // namespace

int run(int argc, const char* const* argv) { return run_impl(argc, argv); }

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"polardyn"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_impl(static_cast<int>(argv.size()), argv.data());
}

}  // namespace polardyn::cli
