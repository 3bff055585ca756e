#include "polardyn/meanfield.hpp"

#include <cmath>

namespace polardyn {

void TwoPartyConfig::validate() const {
  params.validate();
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorCategory::Config, "r must lie in (0, 1)");
  if (measure == InfluenceMeasureKind::MessageCount) {
    throw Error(ErrorCategory::Config, "mean-field dynamics are defined for def1 and def2 only");
  }
  const auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(theta_blue_0) || !unit(theta_red_0)) {
    throw Error(ErrorCategory::Config, "initial prevalences must lie in [0, 1]");
  }
  if (!(epsilon > 0.0 && epsilon <= 0.1)) {
    throw Error(ErrorCategory::Config, "epsilon must lie in (0, 0.1]");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorCategory::Config, "t_end must be finite and >= 0");
  }
}

TwoPartyRates two_party_rates(const MeanFieldState& state, const TwoPartyConfig& config) {
  const bool by_degree = config.measure == InfluenceMeasureKind::DegreeNormalizedCount;
  const double r = config.r;
  // Group shares weighting in-group and out-group pulls for each party.
  const double blue_in = by_degree ? 1.0 - r : 1.0;
  const double blue_out = by_degree ? r : 1.0;
  const double red_in = by_degree ? r : 1.0;
  const double red_out = by_degree ? 1.0 - r : 1.0;

  const auto& p = config.params;
  const double net_blue = 2.0 * state.theta_blue - 1.0;
  const double net_red = 2.0 * state.theta_red - 1.0;

  const double blue_pull = p.alpha * blue_in * net_blue - p.beta * blue_out * net_red;
  const double red_pull = p.alpha * red_in * net_red - p.beta * red_out * net_blue;

  TwoPartyRates rates;
  rates.blue_01 = logistic(blue_pull - p.delta);
  rates.blue_10 = logistic(-blue_pull - p.delta);
  rates.red_01 = logistic(red_pull - p.delta);
  rates.red_10 = logistic(-red_pull - p.delta);
  return rates;
}

Eigen::Vector2d two_party_derivative(const MeanFieldState& state, const TwoPartyConfig& config) {
  const auto rates = two_party_rates(state, config);
  return {(1.0 - state.theta_blue) * rates.blue_01 - state.theta_blue * rates.blue_10,
          (1.0 - state.theta_red) * rates.red_01 - state.theta_red * rates.red_10};
}

std::size_t euler_step_count(double epsilon, double t_end) {
  return static_cast<std::size_t>(std::llround(t_end / epsilon));
}

std::vector<MeanFieldState> integrate_two_party(const TwoPartyConfig& config) {
  config.validate();
  const std::size_t steps = euler_step_count(config.epsilon, config.t_end);
  std::vector<MeanFieldState> out;
  out.reserve(steps + 1);
  MeanFieldState state{config.theta_blue_0, config.theta_red_0, 0.0};
  out.push_back(state);
  for (std::size_t k = 1; k <= steps; ++k) {
    const Eigen::Vector2d next =
        (Eigen::Vector2d(state.theta_blue, state.theta_red) +
         config.epsilon * two_party_derivative(state, config))
            .cwiseMax(0.0)
            .cwiseMin(1.0);
    state = {next.x(), next.y(), static_cast<double>(k) * config.epsilon};
    out.push_back(state);
  }
  return out;
}

}  // namespace polardyn
