#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "polardyn/core_model.hpp"
#include "polardyn/error.hpp"
#include "polardyn/types.hpp"

namespace polardyn {

// ---------------------------------------------------------------------------
// Two-party fully connected dynamics

struct MeanFieldState {
  double theta_blue = 0.5;
  double theta_red = 0.5;
  double t = 0.0;
};

struct TwoPartyConfig {
  ModelParams params;
  double r = 0.5;  // fraction of red nodes
  InfluenceMeasureKind measure = InfluenceMeasureKind::DegreeNormalizedCount;
  double theta_blue_0 = 0.5;
  double theta_red_0 = 0.5;
  double epsilon = 0.01;
  double t_end = 100.0;

  void validate() const;
};

struct TwoPartyRates {
  double blue_01 = 0.0;
  double blue_10 = 0.0;
  double red_01 = 0.0;
  double red_10 = 0.0;
};

// Switch probabilities of a blue/red node in the infinite complete graph.
// Under the degree-normalized measure the in/out terms carry the group
// shares (1 - r, r); under the group-fraction measure they do not.
TwoPartyRates two_party_rates(const MeanFieldState& state, const TwoPartyConfig& config);

// (dtheta_blue/dt, dtheta_red/dt).
Eigen::Vector2d two_party_derivative(const MeanFieldState& state, const TwoPartyConfig& config);

// Forward Euler from t = 0 to t_end with step epsilon, clamping to [0, 1]
// after each step. Row k is at t = k * epsilon; row 0 is the initial state.
std::vector<MeanFieldState> integrate_two_party(const TwoPartyConfig& config);

// ---------------------------------------------------------------------------
// N-party dynamics (degree-normalized measure only)

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// A(i, j) is the emotion of group i toward group j; r holds group shares
// (summing to 1) and delta per-group inertia.
template <typename Scalar>
struct EmotionMatrix {
  MatrixX<Scalar> A;
  VectorX<Scalar> r;
  VectorX<Scalar> delta;
  std::vector<std::string> labels;

  Eigen::Index groups() const { return A.rows(); }

  void validate() const {
    const Eigen::Index n = A.rows();
    if (n < 1 || A.cols() != n) {
      throw Error(ErrorCategory::Config, "emotion matrix must be square and non-empty");
    }
    if (r.size() != n || delta.size() != n) {
      throw Error(ErrorCategory::Config, "group sizes and inertias must have one entry per group");
    }
    if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != n) {
      throw Error(ErrorCategory::Config, "group labels must have one entry per group");
    }
    if ((r.array() <= Scalar(0)).any()) {
      throw Error(ErrorCategory::Config, "group sizes must be positive");
    }
    using std::abs;
    if (abs(r.sum() - Scalar(1)) > Scalar(1e-12)) {
      throw Error(ErrorCategory::Config, "group sizes must sum to 1");
    }
    if ((delta.array() < Scalar(0)).any()) {
      throw Error(ErrorCategory::Config, "inertias must be non-negative");
    }
    if (!A.allFinite()) {
      throw Error(ErrorCategory::Config, "emotion matrix entries must be finite");
    }
  }

  // N = 2 embedding of the two-party model: group 0 blue, group 1 red.
  static EmotionMatrix two_party(const ModelParams& params, Scalar red_fraction) {
    EmotionMatrix em;
    em.A.resize(2, 2);
    em.A << Scalar(params.alpha), Scalar(-params.beta), Scalar(-params.beta), Scalar(params.alpha);
    em.r.resize(2);
    em.r << Scalar(1) - red_fraction, red_fraction;
    em.delta = VectorX<Scalar>::Constant(2, Scalar(params.delta));
    em.labels = {"blue", "red"};
    return em;
  }
};

template <typename Scalar>
struct MultiPartyState {
  VectorX<Scalar> theta;
  Scalar t = Scalar(0);
};

template <typename Scalar>
struct MultiPartyRates {
  VectorX<Scalar> p01;
  VectorX<Scalar> p10;
};

// p01_i = logistic(sum_j A_ij r_j (2 theta_j - 1) - delta_i); p10_i flips the
// sign of the influence term.
template <typename Scalar>
MultiPartyRates<Scalar> multi_party_rates(const VectorX<Scalar>& theta,
                                          const EmotionMatrix<Scalar>& em) {
  if (theta.size() != em.groups()) {
    throw Error(ErrorCategory::Input, "state dimension " + std::to_string(theta.size()) +
                                          " does not match " + std::to_string(em.groups()) +
                                          " groups");
  }
  const VectorX<Scalar> pull =
      em.A * (em.r.array() * (Scalar(2) * theta.array() - Scalar(1))).matrix();
  auto sigma = [](Scalar x) { return logistic(x); };
  MultiPartyRates<Scalar> rates;
  rates.p01 = (pull - em.delta).unaryExpr(sigma);
  rates.p10 = (-pull - em.delta).unaryExpr(sigma);
  return rates;
}

template <typename Scalar>
VectorX<Scalar> multi_party_derivative(const VectorX<Scalar>& theta,
                                       const EmotionMatrix<Scalar>& em) {
  const auto rates = multi_party_rates(theta, em);
  return ((Scalar(1) - theta.array()) * rates.p01.array() - theta.array() * rates.p10.array())
      .matrix();
}

// One clamped Euler step.
template <typename Scalar>
VectorX<Scalar> multi_party_euler_step(const VectorX<Scalar>& theta,
                                       const EmotionMatrix<Scalar>& em, Scalar epsilon) {
  return (theta + epsilon * multi_party_derivative(theta, em))
      .cwiseMax(Scalar(0))
      .cwiseMin(Scalar(1));
}

std::size_t euler_step_count(double epsilon, double t_end);

template <typename Scalar>
std::vector<MultiPartyState<Scalar>> integrate_multi_party(const EmotionMatrix<Scalar>& em,
                                                           const VectorX<Scalar>& theta0,
                                                           Scalar epsilon, Scalar t_end) {
  em.validate();
  if (theta0.size() != em.groups()) {
    throw Error(ErrorCategory::Config, "initial state needs one prevalence per group");
  }
  if ((theta0.array() < Scalar(0)).any() || (theta0.array() > Scalar(1)).any()) {
    throw Error(ErrorCategory::Config, "initial prevalences must lie in [0, 1]");
  }
  if (!(epsilon > Scalar(0)) || epsilon > Scalar(0.1)) {
    throw Error(ErrorCategory::Config, "epsilon must lie in (0, 0.1]");
  }
  const std::size_t steps = euler_step_count(double(epsilon), double(t_end));
  std::vector<MultiPartyState<Scalar>> out;
  out.reserve(steps + 1);
  out.push_back({theta0, Scalar(0)});
  VectorX<Scalar> theta = theta0;
  for (std::size_t k = 1; k <= steps; ++k) {
    theta = multi_party_euler_step(theta, em, epsilon);
    out.push_back({theta, Scalar(k) * epsilon});
  }
  return out;
}

}  // namespace polardyn
