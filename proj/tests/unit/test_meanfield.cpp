#include <doctest.h>

#include <cmath>

#include "polardyn/error.hpp"
#include "polardyn/meanfield.hpp"
#include "polardyn/rng.hpp"

using namespace polardyn;

namespace {

TwoPartyConfig two(ModelParams p, double r, double tb, double tr) {
  TwoPartyConfig c;
  c.params = p;
  c.r = r;
  c.theta_blue_0 = tb;
  c.theta_red_0 = tr;
  return c;
}

double sigma(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST_CASE("rates at the even state reduce to the inertia") {
  for (auto kind : {InfluenceMeasureKind::DegreeNormalizedCount, InfluenceMeasureKind::GroupFraction}) {
    auto c = two({5, 2, 0.7}, 0.3, 0.5, 0.5);
    c.measure = kind;
    const auto r = two_party_rates({0.5, 0.5, 0}, c);
    for (double p : {r.blue_01, r.blue_10, r.red_01, r.red_10}) CHECK(p == doctest::Approx(sigma(-0.7)));
  }
}

TEST_CASE("closed-form rates") {
  const auto r = two_party_rates({1.0, 0.5, 0}, two({1, 0, 0}, 0.5, 1.0, 0.5));
  CHECK(r.blue_01 == doctest::Approx(0.6225).epsilon(1e-4));
  CHECK(r.blue_10 == doctest::Approx(0.3775).epsilon(1e-4));

  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p{rng.uniform(0, 6), rng.uniform(0, 3), rng.uniform(0, 2)};
    const double rr = rng.uniform(0.05, 0.95);
    const double tb = rng.uniform();
    const double tr = rng.uniform();
    const auto got = two_party_rates({tb, tr, 0}, two(p, rr, tb, tr));
    const double lb = p.alpha * (1 - rr) * (2 * tb - 1) - p.beta * rr * (2 * tr - 1);
    const double lr = p.alpha * rr * (2 * tr - 1) - p.beta * (1 - rr) * (2 * tb - 1);
    CHECK(got.blue_01 == doctest::Approx(sigma(lb - p.delta)).epsilon(1e-12));
    CHECK(got.blue_10 == doctest::Approx(sigma(-lb - p.delta)).epsilon(1e-12));
    CHECK(got.red_01 == doctest::Approx(sigma(lr - p.delta)).epsilon(1e-12));
    CHECK(got.red_10 == doctest::Approx(sigma(-lr - p.delta)).epsilon(1e-12));

    auto c2 = two(p, rr, tb, tb);
    c2.measure = InfluenceMeasureKind::GroupFraction;
    const auto eq = two_party_rates({tb, tb, 0}, c2);
    CHECK(eq.blue_01 == eq.red_01);
    CHECK(eq.blue_10 == eq.red_10);
  }
}

TEST_CASE("derivative: fixed point and boundary signs") {
  Rng rng(6);
  for (int i = 0; i < 500; ++i) {
    const ModelParams p{rng.uniform(0, 20), rng.uniform(0, 10), rng.uniform(0, 5)};
    const double rr = rng.uniform(0.01, 0.99);
    const auto zero = two_party_derivative({0.5, 0.5, 0}, two(p, rr, 0.5, 0.5));
    CHECK(zero(0) == 0.0);
    CHECK(zero(1) == 0.0);
    const double other = rng.uniform();
    CHECK(two_party_derivative({1.0, other, 0}, two(p, rr, 1.0, other))(0) <= 0.0);
    CHECK(two_party_derivative({0.0, other, 0}, two(p, rr, 0.0, other))(0) >= 0.0);
    CHECK(two_party_derivative({other, 1.0, 0}, two(p, rr, other, 1.0))(1) <= 0.0);
    CHECK(two_party_derivative({other, 0.0, 0}, two(p, rr, other, 0.0))(1) >= 0.0);
  }
}

TEST_CASE("masking calibration: red declines faster at the start") {
  const auto d = two_party_derivative({0.9, 0.9, 0}, two({3.75, 0.25, 0.63}, 0.18, 0.9, 0.9));
  CHECK(d(1) < 0.0);
  CHECK(d(0) > d(1));
}

TEST_CASE("integration grid and fixed point") {
  auto c = two({6, 6, 4}, 0.3, 0.5, 0.5);
  c.t_end = 10;
  const auto traj = integrate_two_party(c);
  REQUIRE(traj.size() == 1001);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    CHECK(traj[k].t == doctest::Approx(k * 0.01).epsilon(1e-12));
    CHECK(traj[k].theta_blue == 0.5);
    CHECK(traj[k].theta_red == 0.5);
  }
}

TEST_CASE("regimes") {
  // Just off the fixed point, strong mutual hate splits the groups.
  const auto polar = integrate_two_party(two({6, 6, 4}, 0.3, 0.6, 0.6)).back();
  CHECK(polar.theta_blue > 0.9);
  CHECK(polar.theta_red < 0.1);

  const auto mask = integrate_two_party(two({3.75, 0.25, 0.63}, 0.18, 0.9, 0.9));
  CHECK(mask.front().theta_blue == 0.9);
  CHECK(mask.front().theta_red == 0.9);
  CHECK(mask.back().theta_blue > 0.9);
  CHECK(mask.back().theta_red < 0.5);
  for (std::size_t k = mask.size() / 2; k < mask.size(); ++k) {
    CHECK(mask[k].theta_blue - mask[k].theta_red > 0.4);
  }
}

TEST_CASE("containment with coarse steps") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    auto c = two({rng.uniform(0, 30), rng.uniform(0, 15), rng.uniform(0, 6)}, rng.uniform(0.05, 0.95),
                 rng.uniform(), rng.uniform());
    c.epsilon = 0.1;
    c.t_end = 50;
    for (const auto& s : integrate_two_party(c)) {
      REQUIRE(s.theta_blue >= 0.0);
      REQUIRE(s.theta_blue <= 1.0);
      REQUIRE(s.theta_red >= 0.0);
      REQUIRE(s.theta_red <= 1.0);
    }
  }
}

TEST_CASE("group-fraction measure keeps equal starts equal") {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const double t0 = rng.uniform();
    auto c = two({rng.uniform(0, 10), rng.uniform(0, 5), rng.uniform(0, 3)}, rng.uniform(0.05, 0.95), t0, t0);
    c.measure = InfluenceMeasureKind::GroupFraction;
    for (const auto& s : integrate_two_party(c)) REQUIRE(std::abs(s.theta_blue - s.theta_red) <= 1e-12);
  }
}

TEST_CASE("stance relabel symmetry") {
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const ModelParams p{rng.uniform(0, 8), rng.uniform(0, 4), rng.uniform(0, 3)};
    const double rr = rng.uniform(0.05, 0.95);
    const double tb = rng.uniform();
    const double tr = rng.uniform();
    const auto a = integrate_two_party(two(p, rr, tb, tr));
    const auto b = integrate_two_party(two(p, rr, 1 - tb, 1 - tr));
    double worst = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      worst = std::max({worst, std::abs(a[k].theta_blue - (1 - b[k].theta_blue)),
                        std::abs(a[k].theta_red - (1 - b[k].theta_red))});
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("Euler endpoint converges at first order") {
  auto c = two({3.75, 0.25, 0.63}, 0.18, 0.9, 0.9);
  c.t_end = 20;
  std::vector<MeanFieldState> ends;
  for (double eps : {0.04, 0.02, 0.01, 0.005}) {
    c.epsilon = eps;
    ends.push_back(integrate_two_party(c).back());
  }
  for (std::size_t i = 0; i + 2 < ends.size(); ++i) {
    const double d1 = std::hypot(ends[i].theta_blue - ends[i + 1].theta_blue, ends[i].theta_red - ends[i + 1].theta_red);
    const double d2 = std::hypot(ends[i + 1].theta_blue - ends[i + 2].theta_blue,
                                 ends[i + 1].theta_red - ends[i + 2].theta_red);
    CHECK(d1 / d2 >= 1.5);
  }
}

TEST_CASE("two-party configuration errors") {
  auto c = two({1, 1, 1}, 0.0, 0.5, 0.5);
  CHECK_THROWS_AS(integrate_two_party(c), Error);
  c.r = 0.5;
  c.epsilon = 0.2;
  CHECK_THROWS_AS(integrate_two_party(c), Error);
  c.epsilon = 0.01;
  c.measure = InfluenceMeasureKind::MessageCount;
  CHECK_THROWS_AS(integrate_two_party(c), Error);
  c.measure = InfluenceMeasureKind::DegreeNormalizedCount;
  c.theta_red_0 = 1.5;
  CHECK_THROWS_AS(integrate_two_party(c), Error);
}

TEST_CASE("multi-party rates") {
  EmotionMatrix<double> em;
  em.A = Eigen::MatrixXd::Random(4, 4) * 5;
  em.r = Eigen::Vector4d(0.1, 0.2, 0.3, 0.4);
  em.delta = Eigen::Vector4d(0.5, 1, 1.5, 2);
  const auto even = multi_party_rates<double>(Eigen::VectorXd::Constant(4, 0.5), em);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(even.p01(i) == doctest::Approx(sigma(-em.delta(i))));
    CHECK(even.p10(i) == doctest::Approx(sigma(-em.delta(i))));
  }
  CHECK(multi_party_derivative<double>(Eigen::VectorXd::Constant(4, 0.5), em).cwiseAbs().maxCoeff() == 0.0);

  EmotionMatrix<double> one;
  one.A = Eigen::MatrixXd::Constant(1, 1, 2.5);
  one.r = Eigen::VectorXd::Ones(1);
  one.delta = Eigen::VectorXd::Zero(1);
  const auto single = multi_party_rates<double>(Eigen::VectorXd::Ones(1), one);
  CHECK(single.p01(0) == doctest::Approx(sigma(2.5)));
  CHECK(single.p10(0) == doctest::Approx(sigma(-2.5)));

  try {
    multi_party_rates<double>(Eigen::VectorXd::Constant(3, 0.5), em);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Input);
  }
}

TEST_CASE("two-group embedding reproduces the two-party rates") {
  Rng rng(10);
  for (int i = 0; i < 2000; ++i) {
    const ModelParams p{rng.uniform(0, 10), rng.uniform(0, 5), rng.uniform(0, 3)};
    const double rr = rng.uniform(0.01, 0.99);
    const double tb = rng.uniform();
    const double tr = rng.uniform();
    const auto em = EmotionMatrix<double>::two_party(p, rr);
    const auto m = multi_party_rates<double>(Eigen::Vector2d(tb, tr).eval(), em);
    const auto t = two_party_rates({tb, tr, 0}, two(p, rr, tb, tr));
    CHECK(std::abs(m.p01(0) - t.blue_01) < 1e-12);
    CHECK(std::abs(m.p10(0) - t.blue_10) < 1e-12);
    CHECK(std::abs(m.p01(1) - t.red_01) < 1e-12);
    CHECK(std::abs(m.p10(1) - t.red_10) < 1e-12);
  }
}

TEST_CASE("multi-party engine is generic in the scalar type") {
  const auto em = EmotionMatrix<long double>::two_party({3, 1, 0.5}, 0.4L);
  VectorX<long double> theta(2);
  theta << 0.7L, 0.2L;
  const auto traj = integrate_multi_party(em, theta, 0.01L, 5.0L);
  const auto ref = integrate_two_party(two({3, 1, 0.5}, 0.4, 0.7, 0.2));
  CHECK(static_cast<double>(traj.back().theta(0)) == doctest::Approx(ref[500].theta_blue).epsilon(1e-12));
}

TEST_CASE("multi-party integration") {
  EmotionMatrix<double> em;
  em.A = Eigen::MatrixXd::Constant(3, 3, 2.0);
  em.r = Eigen::Vector3d(0.2, 0.3, 0.5);
  em.delta = Eigen::Vector3d::Constant(1.0);
  const auto flat = integrate_multi_party(em, Eigen::VectorXd::Constant(3, 0.5).eval(), 0.01, 10.0);
  for (const auto& s : flat) CHECK((s.theta.array() == 0.5).all());

  auto bad = em;
  bad.r = Eigen::Vector3d(0.2, 0.3, 0.6);
  CHECK_THROWS_AS(integrate_multi_party(bad, Eigen::VectorXd::Constant(3, 0.5).eval(), 0.01, 1.0), Error);
  bad = em;
  bad.delta(1) = -1;
  CHECK_THROWS_AS(integrate_multi_party(bad, Eigen::VectorXd::Constant(3, 0.5).eval(), 0.01, 1.0), Error);
  CHECK_THROWS_AS(integrate_multi_party(em, Eigen::VectorXd::Constant(2, 0.5).eval(), 0.01, 1.0), Error);
  CHECK_THROWS_AS(integrate_multi_party(em, Eigen::VectorXd::Constant(3, 1.5).eval(), 0.01, 1.0), Error);
}
