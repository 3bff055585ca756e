#include <doctest.h>

#include <fstream>
#include <functional>
#include <sstream>

#include "polardyn/error.hpp"
#include "polardyn/generators.hpp"
#include "polardyn/io.hpp"

using namespace polardyn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "polardyn_test_io";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write(const std::string& name, const std::string& text) {
  const auto p = scratch(name);
  std::ofstream(p) << text;
  return p;
}

std::pair<ErrorCategory, std::string> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return {e.category(), e.what()};
  }
  FAIL("expected an error");
  return {ErrorCategory::Usage, ""};
}

}  // namespace

TEST_CASE("load a small graph") {
  const auto edges = write("e.csv", "a,b\nb,c\n");
  const auto nodes = write("n.csv", "node_id,party\na,0\nb,0\nc,1\n");
  const auto g = io::load_graph(edges, nodes).graph;
  CHECK(g.size() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.party(g.index_of("c")) == Party::Red);
  CHECK(g.degree(g.index_of("b")) == 2);
}

TEST_CASE("graph loading errors") {
  const auto nodes = write("n2.csv", "a,0\nb,1\n");
  auto [cat, msg] = error_of([&] { io::load_graph(write("loop.csv", "a,a\n"), nodes); });
  CHECK(cat == ErrorCategory::Input);
  CHECK(msg.find("loop.csv:1") != std::string::npos);
  CHECK(msg.find("self-loop") != std::string::npos);

  std::tie(cat, msg) = error_of([&] { io::load_graph(write("miss.csv", "a,b\nb,z\n"), nodes); });
  CHECK(cat == ErrorCategory::Input);
  CHECK(msg.find("miss.csv:2") != std::string::npos);
  CHECK(msg.find("'z'") != std::string::npos);

  std::tie(cat, msg) = error_of([&] { io::load_graph(write("ok.csv", "a,b\n"), write("bad.csv", "a,0\nb,2\n")); });
  CHECK(cat == ErrorCategory::Input);
  CHECK(msg.find("bad.csv:2") != std::string::npos);

  std::tie(cat, msg) = error_of([&] { io::load_graph(write("short.csv", "a\n"), nodes); });
  CHECK(cat == ErrorCategory::Parse);

  std::tie(cat, msg) = error_of([&] { io::load_graph(scratch("absent.csv"), nodes); });
  CHECK(cat == ErrorCategory::Io);

  const auto dup = io::load_graph(write("dup.csv", "u,v\na,b\nb,a\n# comment\na,b\n"), nodes);
  CHECK(dup.duplicate_edges == 2);
  CHECK(dup.graph.edge_count() == 1);
}

TEST_CASE("large two-block graph round-trips") {
  const auto g = two_block_graph(10000, 0.4, 0.001, 0.0002, 3);
  io::save_graph(g, scratch("big_e.csv"), scratch("big_n.csv"));
  const auto back = io::load_graph(scratch("big_e.csv"), scratch("big_n.csv")).graph;
  CHECK(back == g);
  io::save_graph(back, scratch("big_e2.csv"), scratch("big_n2.csv"));
  CHECK(io::read_file(scratch("big_e.csv")) == io::read_file(scratch("big_e2.csv")));
}

TEST_CASE("panel round trip") {
  StancePanel p;
  p.rows = {{"x", 0, Party::Blue, Stance::One}, {"y", 0, Party::Red, Stance::Zero}, {"x", 1, Party::Blue, Stance::Zero}};
  std::ostringstream ss;
  io::write_panel(ss, p);
  io::write_file(scratch("panel.csv"), ss.str());
  const auto back = io::load_panel(scratch("panel.csv"));
  REQUIRE(back.rows.size() == 3);
  CHECK(back.rows[2].node_id == "x");
  CHECK(back.rows[2].interval == 1);
  CHECK(back.rows[1].party == Party::Red);
  CHECK(back.rows[0].stance == Stance::One);

  CHECK(error_of([&] { io::load_panel(write("nohead.csv", "x,0,0,1\n")); }).first == ErrorCategory::Parse);
  CHECK(error_of([&] { io::load_panel(write("st.csv", "node_id,interval,party,stance\nx,0,0,3\n")); }).first ==
        ErrorCategory::Input);
  CHECK(error_of([&] {
          io::load_panel(write("flip.csv", "node_id,interval,party,stance\nx,0,0,1\nx,1,1,1\n"));
        }).first == ErrorCategory::Input);
}

TEST_CASE("observation round trip") {
  std::vector<io::ObservationRow> rows(2);
  rows[0].node_id = "u1";
  rows[0].time_index = 3;
  rows[0].record = {Stance::Zero, Stance::One, InfluenceVector::from_stance_one(0.1, -0.3), "u1", 3};
  rows[1].node_id = "u2";
  rows[1].party = Party::Red;
  rows[1].record = {Stance::One, Stance::One, InfluenceVector::from_stance_one(1.0 / 3, 0.0), "u2", 0};
  std::ostringstream ss;
  io::write_observations(ss, rows);
  io::write_file(scratch("obs.csv"), ss.str());
  const auto back = io::load_observations(scratch("obs.csv"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].record.influence.d_out_0 == 0.3);
  CHECK(back[1].record.influence.d_in_1 == 1.0 / 3);
  CHECK(back[1].party == Party::Red);
  CHECK(back[0].record.after == Stance::One);

  CHECK(io::load_observations(write("empty.csv", "")).empty());
  CHECK(error_of([&] {
          io::load_observations(write("big.csv",
                                      "node_id,time_index,party,stance_t,stance_t1,d_in_1,d_out_1\n"
                                      "a,0,0,0,1,1.5,0\n"));
        }).first == ErrorCategory::Input);
}

TEST_CASE("metadata header round trip") {
  io::RunMetadata meta;
  meta.command = "meanfield";
  meta.config.set("alpha", "3.75");
  meta.config.set("r", "0.18");
  meta.measure = "degree-normalized-count";
  meta.seed = 42;
  std::ostringstream ss;
  io::write_metadata(ss, meta);
  ss << "t,theta_blue,theta_red,days\n0,0.9,0.9,0\n";
  const std::string text = ss.str();
  CHECK(text.find("# polardyn ") == 0);
  CHECK(text.find("# rng: mt19937_64+splitmix64\n") != std::string::npos);
  CHECK(text.find("# seed: 42\n") != std::string::npos);
  io::write_file(scratch("meta.csv"), text);
  const auto back = io::read_metadata(scratch("meta.csv"));
  CHECK(back.command == "meanfield");
  CHECK(back.config.entries() == meta.config.entries());
  CHECK(*back.seed == 42);
  CHECK(error_of([&] { io::read_metadata(write("plain.csv", "a,b\n")); }).first == ErrorCategory::Parse);
}

TEST_CASE("trajectory writers") {
  Trajectory t;
  t.node_count = 4;
  t.rows = {{0, 0.5, 0.25}, {2, 0.75, 0.25}};
  std::ostringstream a;
  io::write_trajectory(a, t);
  CHECK(a.str() == "event,t,theta_blue,theta_red\n0,0,0.5,0.25\n2,0.5,0.75,0.25\n");
  std::ostringstream b;
  io::write_trajectory(b, t, 3);
  CHECK(b.str().find("replicate,event") == 0);
  CHECK(b.str().find("\n3,2,0.5,") != std::string::npos);

  std::vector<MeanFieldState> s = {{0.9, 0.9, 0}, {0.91, 0.8, 0.01}, {0.92, 0.7, 0.02}};
  std::ostringstream c;
  io::write_meanfield(c, s, 1, 2);
  CHECK(c.str() == "t,theta_blue,theta_red,days\n0,0.9,0.9,0\n0.02,0.92,0.7,0.02\n");
}
