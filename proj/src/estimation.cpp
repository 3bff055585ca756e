#include "polardyn/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "polardyn/core_model.hpp"
#include "polardyn/error.hpp"

namespace polardyn {

void StancePanel::validate() const {
  std::unordered_map<std::string, Party> party_of;
  std::set<std::pair<std::string, std::int64_t>> seen;
  for (const auto& row : rows) {
    if (!seen.emplace(row.node_id, row.interval).second) {
      throw Error(ErrorCategory::Input, "node '" + row.node_id + "' appears twice in interval " +
                                            std::to_string(row.interval));
    }
    const auto [it, inserted] = party_of.emplace(row.node_id, row.party);
    if (!inserted && it->second != row.party) {
      throw Error(ErrorCategory::Input, "node '" + row.node_id + "' changes party");
    }
  }
}

std::vector<TransitionObservation> build_observations_case1(
    std::span<const TransitionRecord> records) {
  std::vector<TransitionObservation> out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    TransitionObservation obs;
    obs.j = rec.before != rec.after ? 1 : 0;
    obs.x_in = rec.influence.toward_switch_in(rec.before);
    obs.x_out = rec.influence.toward_switch_out(rec.before);
    obs.node_id = rec.node_id;
    obs.time = rec.time;
    out.push_back(std::move(obs));
  }
  return out;
}

std::string_view to_string(TransitionCoding coding) {
  return coding == TransitionCoding::ChangeIndicator ? "change" : "direction";
}

TransitionCoding parse_transition_coding(std::string_view text) {
  if (text == "change") return TransitionCoding::ChangeIndicator;
  if (text == "direction") return TransitionCoding::Direction;
  throw Error(ErrorCategory::Config,
              "unknown transition coding '" + std::string(text) + "' (expected change or direction)");
}

Case2Observations build_observations_case2(const StancePanel& panel, Case2Options options) {
  if (panel.rows.empty()) throw Error(ErrorCategory::Input, "stance panel is empty");
  panel.validate();

  std::map<std::int64_t, std::vector<const PanelRow*>> by_interval;
  for (const auto& row : panel.rows) by_interval[row.interval].push_back(&row);

  Case2Observations out;
  for (auto it = by_interval.begin(); it != by_interval.end(); ++it) {
    const auto next = by_interval.find(it->first + 1);
    if (next == by_interval.end()) continue;

    std::unordered_map<std::string_view, Stance> later;
    later.reserve(next->second.size());
    for (const auto* row : next->second) later.emplace(row->node_id, row->stance);

    std::vector<std::pair<const PanelRow*, Stance>> shared;
    std::int64_t cells[2][2] = {{0, 0}, {0, 0}};  // [party][stance]
    for (const auto* row : it->second) {
      const auto found = later.find(row->node_id);
      if (found == later.end()) continue;
      shared.emplace_back(row, found->second);
      ++cells[as_int(row->party)][as_int(row->stance)];
    }
    if (shared.empty()) {
      ++out.interval_pairs_skipped;
      continue;
    }
    ++out.interval_pairs_used;

    const double n = static_cast<double>(shared.size());
    const double net[2] = {static_cast<double>(cells[0][1] - cells[0][0]) / n,
                           static_cast<double>(cells[1][1] - cells[1][0]) / n};
    for (const auto& [row, stance_next] : shared) {
      const bool changed = row->stance != stance_next;
      if (options.coding == TransitionCoding::Direction && !changed) continue;
      const int own = as_int(row->party);
      const double sign = row->stance == Stance::Zero ? 1.0 : -1.0;
      TransitionObservation obs;
      if (options.coding == TransitionCoding::ChangeIndicator) {
        obs.j = changed ? 1 : 0;
      } else {
        obs.j = row->stance == Stance::Zero ? 1 : 0;
      }
      obs.x_in = sign * net[own];
      obs.x_out = sign * net[1 - own];
      obs.node_id = row->node_id;
      obs.time = row->interval;
      out.rows.push_back(std::move(obs));
    }
  }
  return out;
}

Eigen::MatrixXd design_matrix(std::span<const TransitionObservation> observations) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(observations.size()), 3);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto& o = observations[static_cast<std::size_t>(i)];
    X(i, 0) = 1.0;
    X(i, 1) = o.x_in;
    X(i, 2) = o.x_out;
  }
  return X;
}

Eigen::VectorXd response_vector(std::span<const TransitionObservation> observations) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(observations.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const int j = observations[static_cast<std::size_t>(i)].j;
    if (j != 0 && j != 1) throw Error(ErrorCategory::Input, "J must be 0 or 1");
    y(i) = j;
  }
  return y;
}

namespace {

constexpr double kClip = 1e-12;

Eigen::ArrayXd probabilities(const Eigen::VectorXd& coef, const Eigen::MatrixXd& X) {
  return (X * coef).unaryExpr([](double z) { return logistic(z); }).array();
}

double penalized(double ll, const Eigen::VectorXd& coef, double ridge) {
  return ll - 0.5 * ridge * (coef(1) * coef(1) + coef(2) * coef(2));
}

}  // namespace

double log_likelihood(const Eigen::VectorXd& coef, const Eigen::MatrixXd& X,
                      const Eigen::VectorXd& y) {
  const Eigen::ArrayXd p = probabilities(coef, X).max(kClip).min(1.0 - kClip);
  return (y.array() * p.log() + (1.0 - y.array()) * (1.0 - p).log()).sum();
}

Eigen::VectorXd log_likelihood_gradient(const Eigen::VectorXd& coef, const Eigen::MatrixXd& X,
                                        const Eigen::VectorXd& y) {
  return X.transpose() * (y.array() - probabilities(coef, X)).matrix();
}

EstimationResult fit_logistic(std::span<const TransitionObservation> observations,
                              const FitOptions& options) {
  const std::size_t n = observations.size();
  if (n < 3) {
    throw Error(ErrorCategory::Input,
                "insufficient observations: need at least 3, got " + std::to_string(n));
  }
  if (options.ridge < 0.0) throw Error(ErrorCategory::Config, "ridge must be >= 0");

  const Eigen::MatrixXd X = design_matrix(observations);
  const Eigen::VectorXd y = response_vector(observations);
  if (!X.allFinite()) throw Error(ErrorCategory::Input, "covariates must be finite");

  const double nd = static_cast<double>(n);
  const double q = y.mean();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  EstimationResult result;
  result.n_obs = n;
  result.ridge = options.ridge;
  result.intercept_only = options.intercept_only;
  result.null_log_likelihood =
      (q > 0.0 && q < 1.0) ? nd * (q * std::log(q) + (1.0 - q) * std::log1p(-q)) : 0.0;

  if (options.intercept_only) {
    if (q == 0.0 || q == 1.0) {
      throw Error(ErrorCategory::Separation,
                  "all J values are equal; the intercept-only estimate is unbounded");
    }
    result.delta_hat = -logit(q);
    result.std_errors = {nan, nan, 1.0 / std::sqrt(nd * q * (1.0 - q))};
    result.log_likelihood = result.null_log_likelihood;
    result.pseudo_r2 = 0.0;
    result.converged = true;
    result.gradient_norm = std::abs((y.array() - q).sum());
    return result;
  }

  // Scale columns before the rank test so tiny covariates are not mistaken
  // for zero columns.
  {
    Eigen::MatrixXd scaled = X;
    for (Eigen::Index c = 0; c < 3; ++c) {
      const double m = X.col(c).cwiseAbs().maxCoeff();
      if (m > 0.0) scaled.col(c) /= m;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(1e-10);
    if (qr.rank() < 3) {
      throw Error(ErrorCategory::Singular,
                  "singular design: covariate columns are constant or collinear (rank " +
                      std::to_string(qr.rank()) +
                      " of 3); use intercept_only for a base-rate fit");
    }
  }

  const Eigen::Vector3d penalty_mask(0.0, 1.0, 1.0);
  Eigen::VectorXd coef = Eigen::Vector3d::Zero();
  if (q > 0.0 && q < 1.0) coef(0) = logit(q);

  double objective = penalized(log_likelihood(coef, X, y), coef, options.ridge);
  Eigen::VectorXd grad;
  Eigen::ArrayXd p;
  for (int iter = 0;; ++iter) {
    p = probabilities(coef, X);
    grad = X.transpose() * (y.array() - p).matrix() -
           options.ridge * penalty_mask.cwiseProduct(coef);
    result.gradient_norm = grad.norm();
    result.iterations = iter;
    if (result.gradient_norm < options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    if (coef.cwiseAbs().maxCoeff() > options.divergence_threshold) {
      throw Error(ErrorCategory::Separation,
                  "coefficients diverge (|b| > " + std::to_string(options.divergence_threshold) +
                      "): the data are (quasi-)separated; refit with a ridge penalty");
    }
    if (iter == options.max_iterations) break;

    const Eigen::ArrayXd w = p * (1.0 - p);
    Eigen::MatrixXd H = X.transpose() * (X.array().colwise() * w).matrix();
    H.diagonal() += options.ridge * penalty_mask;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 0.0) {
      throw Error(ErrorCategory::Separation,
                  "information matrix is singular at the current iterate; the data are "
                  "(quasi-)separated; refit with a ridge penalty");
    }
    const Eigen::VectorXd direction = ldlt.solve(grad);

    // Step halving: accept the first step that does not decrease the
    // objective beyond round-off.
    double t = 1.0;
    const double slack = 1e-12 * (1.0 + std::abs(objective));
    Eigen::VectorXd candidate = coef + direction;
    double cand_obj = penalized(log_likelihood(candidate, X, y), candidate, options.ridge);
    while (cand_obj < objective - slack && t > 1e-10) {
      t *= 0.5;
      candidate = coef + t * direction;
      cand_obj = penalized(log_likelihood(candidate, X, y), candidate, options.ridge);
    }
    coef = candidate;
    objective = cand_obj;
  }

  if (!result.converged) {
    throw Error(ErrorCategory::Convergence,
                "Newton iteration did not reach gradient norm " +
                    std::to_string(options.gradient_tolerance) + " within " +
                    std::to_string(options.max_iterations) + " iterations");
  }

  const Eigen::ArrayXd w = p * (1.0 - p);
  Eigen::MatrixXd H = X.transpose() * (X.array().colwise() * w).matrix();
  H.diagonal() += options.ridge * penalty_mask;
  const Eigen::MatrixXd cov = H.inverse();

  result.alpha_hat = coef(1);
  result.beta_hat = -coef(2);
  result.delta_hat = -coef(0);
  result.std_errors = {std::sqrt(cov(1, 1)), std::sqrt(cov(2, 2)), std::sqrt(cov(0, 0))};
  result.log_likelihood = log_likelihood(coef, X, y);
  result.pseudo_r2 = result.null_log_likelihood < 0.0
                         ? 1.0 - result.log_likelihood / result.null_log_likelihood
                         : nan;
  return result;
}

double predict_switch_probability(const EstimationResult& result, double x_in, double x_out) {
  if (!result.converged) {
    throw Error(ErrorCategory::Convergence, "cannot predict from an unconverged fit");
  }
  return logistic(result.alpha_hat * x_in - result.beta_hat * x_out - result.delta_hat);
}

}  // namespace polardyn
