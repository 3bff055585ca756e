#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polardyn/panel.hpp"
#include "polardyn/types.hpp"

namespace polardyn {

// One regression row: j = 1 iff the stance changed; x_in / x_out are the
// in-group and out-group prevalences of the stance opposite to the one held.
struct TransitionObservation {
  int j = 0;
  double x_in = 0.0;
  double x_out = 0.0;
  std::string node_id;
  std::int64_t time = -1;
};

// A node's stance at two adjacent times together with the influence it saw
// at the first.
struct TransitionRecord {
  Stance before = Stance::Zero;
  Stance after = Stance::Zero;
  InfluenceVector influence;
  std::string node_id;
  std::int64_t time = -1;
};

std::vector<TransitionObservation> build_observations_case1(
    std::span<const TransitionRecord> records);

enum class TransitionCoding {
  // J = 1 iff the stance changed; every row kept.
  ChangeIndicator,
  // Only rows with a change are kept; J = 1 for 0 -> 1 and J = 0 for 1 -> 0.
  Direction,
};

std::string_view to_string(TransitionCoding coding);
TransitionCoding parse_transition_coding(std::string_view text);

struct Case2Options {
  TransitionCoding coding = TransitionCoding::ChangeIndicator;
};

struct Case2Observations {
  std::vector<TransitionObservation> rows;
  std::size_t interval_pairs_used = 0;
  std::size_t interval_pairs_skipped = 0;  // consecutive intervals with no shared node
};

// Fully connected aggregation. For each pair of consecutive intervals
// (t, t + 1) the nodes present in both form the sample; with N the sample size,
//   net_blue = (#blue stance-1 - #blue stance-0) / N at t, red alike,
// the focal node included. A stance-0 node sees (x_in, x_out) =
// (net_own, net_other); a stance-1 node sees the negation.
Case2Observations build_observations_case2(const StancePanel& panel, Case2Options options = {});

struct FitOptions {
  double gradient_tolerance = 1e-8;
  int max_iterations = 100;
  // L2 penalty (ridge / 2) * (b1^2 + b2^2); the intercept is never penalized.
  double ridge = 0.0;
  // Fit only the intercept: delta_hat = -logit(mean J).
  bool intercept_only = false;
  // Any coefficient past this magnitude with a non-vanishing gradient is
  // reported as separation.
  double divergence_threshold = 30.0;
};

struct EstimationResult {
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  double delta_hat = 0.0;
  // Standard errors of (alpha_hat, beta_hat, delta_hat) from the inverse
  // observed information; NaN for coefficients not fitted.
  std::array<double, 3> std_errors{};
  double pseudo_r2 = 0.0;  // McFadden: 1 - ll / ll_intercept_only
  double log_likelihood = 0.0;
  double null_log_likelihood = 0.0;
  std::size_t n_obs = 0;
  bool converged = false;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool intercept_only = false;
  double ridge = 0.0;
};

// Newton-Raphson (IRLS) with step halving on the Bernoulli log-likelihood of
// logit P(J = 1) = b0 + b1 x_in + b2 x_out, reporting alpha = b1,
// beta = -b2, delta = -b0.
// Throws Error(Input) with "insufficient observations" below 3 rows,
// Error(Singular) for a rank-deficient design, Error(Separation) when the
// coefficients diverge and Error(Convergence) when the iteration cap is hit.
EstimationResult fit_logistic(std::span<const TransitionObservation> observations,
                              const FitOptions& options = {});

// logistic(alpha_hat x_in - beta_hat x_out - delta_hat). Requires a converged fit.
double predict_switch_probability(const EstimationResult& result, double x_in, double x_out);

// Design columns (1, x_in, x_out) and response J.
Eigen::MatrixXd design_matrix(std::span<const TransitionObservation> observations);
Eigen::VectorXd response_vector(std::span<const TransitionObservation> observations);

// Unpenalized Bernoulli log-likelihood and its gradient in the regression
// coefficients b = (b0, b1, b2). Probabilities are clipped to [1e-12, 1 - 1e-12].
double log_likelihood(const Eigen::VectorXd& coef, const Eigen::MatrixXd& X,
                      const Eigen::VectorXd& y);
Eigen::VectorXd log_likelihood_gradient(const Eigen::VectorXd& coef, const Eigen::MatrixXd& X,
                                        const Eigen::VectorXd& y);

}  // namespace polardyn
