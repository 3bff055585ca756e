#include <doctest.h>

#include <cmath>
#include <vector>

#include "polardyn/core_model.hpp"
#include "polardyn/error.hpp"
#include "polardyn/rng.hpp"

using namespace polardyn;

namespace {

// Blue focal node v0 with `in` blue and `out` red leaf neighbors; the first
// in_1 / out_1 of them hold stance 1.
PartyGraph star(int in, int in_1, int out, int out_1) {
  PartyGraph::Builder b;
  b.add_node("v", Party::Blue);
  for (int i = 0; i < in; ++i) b.add_node("b" + std::to_string(i), Party::Blue);
  for (int i = 0; i < out; ++i) b.add_node("r" + std::to_string(i), Party::Red);
  for (int i = 1; i <= in + out; ++i) b.add_edge(0, static_cast<PartyGraph::Index>(i));
  auto g = std::move(b).build();
  for (int i = 0; i < in_1; ++i) g.set_stance(g.index_of("b" + std::to_string(i)), Stance::One);
  for (int i = 0; i < out_1; ++i) g.set_stance(g.index_of("r" + std::to_string(i)), Stance::One);
  return g;
}

PartyGraph random_graph(Rng& rng, std::size_t n, double p) {
  PartyGraph::Builder b;
  for (std::size_t v = 0; v < n; ++v) {
    b.add_node("n" + std::to_string(v), rng.bernoulli(0.5) ? Party::Red : Party::Blue);
  }
  for (PartyGraph::Index u = 0; u < n; ++u) {
    for (PartyGraph::Index v = u + 1; v < n; ++v) {
      if (rng.bernoulli(p)) b.add_edge(u, v);
    }
  }
  auto g = std::move(b).build();
  for (PartyGraph::Index v = 0; v < n; ++v) {
    g.set_stance(v, rng.bernoulli(0.5) ? Stance::One : Stance::Zero);
  }
  return g;
}

}  // namespace

TEST_CASE("definition 1 worked example") {
  const auto g = star(100, 70, 10, 7);
  const auto inf = influence_def1(g, 0);
  CHECK(inf.d_in_1 == doctest::Approx(40.0 / 110).epsilon(1e-15));
  CHECK(inf.d_out_1 == doctest::Approx(4.0 / 110).epsilon(1e-15));
  CHECK(inf.d_in_0 == -inf.d_in_1);
  CHECK(inf.d_out_0 == -inf.d_out_1);
}

TEST_CASE("definition 1 unanimity and isolated nodes") {
  const auto g = star(5, 5, 0, 0);
  const auto inf = influence_def1(g, 0);
  CHECK(inf.d_in_1 == 1.0);
  CHECK(inf.d_out_1 == 0.0);

  PartyGraph::Builder b;
  b.add_node("lonely", Party::Red);
  b.add_node("other", Party::Blue);
  const auto iso = std::move(b).build();
  const auto zero = influence_def1(iso, 0);
  CHECK(zero.d_in_1 == 0.0);
  CHECK(zero.d_out_1 == 0.0);
  CHECK(influence_def2(iso, 0).d_in_1 == 0.0);
}

TEST_CASE("definition 1 on a 4-node path") {
  PartyGraph::Builder b;
  b.add_node("a", Party::Blue);
  b.add_node("b", Party::Blue);
  b.add_node("c", Party::Red);
  b.add_node("d", Party::Red);
  b.add_edge("a", "b");
  b.add_edge("b", "c");
  b.add_edge("c", "d");
  auto g = std::move(b).build();
  g.set_stance(0, Stance::One);
  g.set_stance(3, Stance::One);
  const auto inf = influence_def1(g, 1);
  CHECK(inf.d_in_1 == 0.5);
  CHECK(inf.d_out_1 == -0.5);
}

TEST_CASE("definition 2 examples") {
  const auto inf = influence_def2(star(100, 70, 10, 7), 0);
  CHECK(inf.d_in_1 == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(inf.d_out_1 == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(inf.d_in_0 == -inf.d_in_1);

  CHECK(influence_def2(star(10, 5, 3, 1), 0).d_in_1 == 0.0);

  const auto small = influence_def2(star(3, 2, 1, 0), 0);
  CHECK(small.d_in_1 == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(small.d_out_1 == -1.0);

  // Empty out-group gives 0, not NaN.
  CHECK(influence_def2(star(3, 3, 0, 0), 0).d_out_1 == 0.0);
}

TEST_CASE("message-count measure") {
  const auto inf = influence_messages({70, 30}, {7, 3});
  CHECK(inf.d_in_1 == doctest::Approx(40.0 / 110).epsilon(1e-15));
  CHECK(inf.d_out_1 == doctest::Approx(4.0 / 110).epsilon(1e-15));
  CHECK(inf.d_out_0 == -inf.d_out_1);

  for (int k : {1, 4, 17}) {
    const auto bal = influence_messages({k, k}, {2 * k, 2 * k});
    CHECK(bal.d_in_1 == 0.0);
    CHECK(bal.d_out_1 == 0.0);
  }
  const auto split = influence_messages({5, 0}, {0, 5});
  CHECK(split.d_in_1 == 0.5);
  CHECK(split.d_out_1 == -0.5);
  CHECK(influence_messages({0, 0}, {0, 0}).d_in_1 == 0.0);
  CHECK_THROWS_AS((influence_messages({-1, 0}, {0, 0})), Error);
}

TEST_CASE("message-count is not a graph measure") {
  const auto g = star(2, 1, 1, 1);
  try {
    influence(g, 0, InfluenceMeasureKind::MessageCount);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Config);
  }
}

TEST_CASE("transition probability examples") {
  const InfluenceVector some = InfluenceVector::from_stance_one(0.3, -0.7);
  CHECK(transition_probability({0, 0, 0}, some, Stance::Zero) == 0.5);
  CHECK(transition_probability({0, 0, 0}, some, Stance::One) == 0.5);
  CHECK(transition_probability({0, 0, 0.63}, {}, Stance::Zero) ==
        doctest::Approx(1.0 / (1.0 + std::exp(0.63))).epsilon(1e-15));
  CHECK(transition_probability({0, 0, 0.63}, {}, Stance::Zero) == doctest::Approx(0.3475).epsilon(1e-4));
  CHECK(transition_probability({1, 1, 0}, InfluenceVector::from_stance_one(0.4, 0.4),
                               Stance::Zero) == 0.5);
}

TEST_CASE("logistic stays finite far into the tails") {
  CHECK(logistic(800.0) == 1.0);
  CHECK(logistic(-800.0) == 0.0);
  CHECK(std::isfinite(logistic(-1e308)));
  CHECK(logistic(-30.0) > 0.0);
  CHECK(logistic(0.0) == 0.5);
}

TEST_CASE("model parameter validation") {
  CHECK_NOTHROW(ModelParams{3.75, 0.25, 0.63}.validate());
  CHECK_THROWS_AS((ModelParams{-1, 0, 0}.validate()), Error);
  CHECK_THROWS_AS((ModelParams{1, 0, -0.1}.validate()), Error);
  CHECK_THROWS_AS((ModelParams{1, -0.5, 0}.validate()), Error);
  CHECK_NOTHROW(ModelParams({1, -0.5, 0, true}).validate());
  CHECK_THROWS_AS((ModelParams{NAN, 0, 0}.validate()), Error);
}

TEST_CASE("measure names") {
  CHECK(parse_measure("def1") == InfluenceMeasureKind::DegreeNormalizedCount);
  CHECK(parse_measure("group-fraction") == InfluenceMeasureKind::GroupFraction);
  CHECK(parse_measure("messages") == InfluenceMeasureKind::MessageCount);
  for (auto k : {InfluenceMeasureKind::DegreeNormalizedCount, InfluenceMeasureKind::GroupFraction,
                 InfluenceMeasureKind::MessageCount}) {
    CHECK(parse_measure(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_measure("def3"), Error);
}

TEST_CASE("property: logit linearity") {
  Rng rng(11);
  double worst = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const ModelParams p{rng.uniform(0, 6), rng.uniform(0, 3), rng.uniform(0, 2)};
    const double a = rng.uniform(-1, 1);
    const double b = rng.uniform(-1, 1) * (1 - std::abs(a));
    const auto inf = InfluenceVector::from_stance_one(a, b);
    const Stance s = rng.bernoulli(0.5) ? Stance::One : Stance::Zero;
    const double linear = p.alpha * inf.toward_switch_in(s) - p.beta * inf.toward_switch_out(s) - p.delta;
    worst = std::max(worst, std::abs(logit(transition_probability(p, inf, s)) - linear));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("property: antisymmetry, definition bounds and brute force on random graphs") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(7);  // at most 8 nodes
    const auto g = random_graph(rng, n, rng.uniform(0.2, 1.0));

    // Independent adjacency matrix for exhaustive enumeration.
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;

    for (PartyGraph::Index v = 0; v < n; ++v) {
      int m[2][2] = {{0, 0}, {0, 0}};  // [same party][stance]
      int deg = 0;
      for (PartyGraph::Index u = 0; u < n; ++u) {
        if (!adj[v][u]) continue;
        ++deg;
        ++m[g.party(u) == g.party(v) ? 1 : 0][as_int(g.stance(u))];
      }
      const auto d1 = influence_def1(g, v);
      const auto d2 = influence_def2(g, v);
      const double e_in1 = deg ? double(m[1][1] - m[1][0]) / deg : 0.0;
      const double e_out1 = deg ? double(m[0][1] - m[0][0]) / deg : 0.0;
      const int nin = m[1][1] + m[1][0];
      const int nout = m[0][1] + m[0][0];
      CHECK(d1.d_in_1 == e_in1);
      CHECK(d1.d_out_1 == e_out1);
      CHECK(d2.d_in_1 == (nin ? double(m[1][1] - m[1][0]) / nin : 0.0));
      CHECK(d2.d_out_1 == (nout ? double(m[0][1] - m[0][0]) / nout : 0.0));

      for (const auto& inf : {d1, d2}) {
        CHECK(inf.d_in_0 == -inf.d_in_1);
        CHECK(inf.d_out_0 == -inf.d_out_1);
        CHECK(std::abs(inf.d_in_1) <= 1.0);
        CHECK(std::abs(inf.d_out_1) <= 1.0);
      }
      CHECK(std::abs(d1.d_in_1) + std::abs(d1.d_out_1) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("property: stance relabel symmetry") {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = random_graph(rng, 12, 0.5);
    auto h = g;
    for (PartyGraph::Index v = 0; v < h.size(); ++v) h.flip_stance(v);
    const ModelParams p{rng.uniform(0, 6), rng.uniform(0, 3), rng.uniform(0, 2)};
    for (auto kind : {InfluenceMeasureKind::DegreeNormalizedCount, InfluenceMeasureKind::GroupFraction}) {
      for (PartyGraph::Index v = 0; v < g.size(); ++v) {
        const auto a = influence(g, v, kind);
        const auto b = influence(h, v, kind);
        CHECK(b.d_in_1 == -a.d_in_1);
        CHECK(b.d_out_1 == -a.d_out_1);
        // p(1|0) in one labelling is p(0|1) in the other.
        CHECK(transition_probability(p, a, Stance::Zero) ==
              transition_probability(p, b, Stance::One));
        CHECK(transition_probability(p, a, Stance::One) ==
              transition_probability(p, b, Stance::Zero));
      }
    }
  }
}
