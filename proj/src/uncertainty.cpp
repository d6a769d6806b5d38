#include "aeos/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aeos/random.hpp"

namespace aeos {

void CcpParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < alpha && alpha < 1.0)) {
    throw Error("CCP parameters require 0 < epsilon < alpha < 1");
  }
  if (!(theta > 0.0 && theta < 1.0)) throw Error("CCP parameter theta must lie in (0, 1)");
  if (sample_size_override && *sample_size_override == 0) {
    throw Error("sample size override must be positive");
  }
}

std::size_t required_sample_size(const CcpParams& params, std::size_t n_vars) {
  params.validate();
  if (params.sample_size_override) return *params.sample_size_override;
  if (n_vars == 0) throw Error("sample size bound needs at least one decision variable");
  const double gap = params.epsilon - params.alpha;
  const double scale = 1.0 / (2.0 * gap * gap);
  const double bound = scale * std::log(1.0 / params.theta) +
                       scale * static_cast<double>(n_vars) * std::numbers::ln2;
  return static_cast<std::size_t>(std::ceil(bound));
}

ScenarioMatrix sample_scenarios(const Instance& instance, std::size_t sample_size,
                                std::uint64_t seed) {
  if (sample_size == 0) throw Error("sample size must be positive");
  const auto& windows = instance.windows();
  ScenarioMatrix m;
  m.seed = seed;
  m.outcomes.resize(static_cast<Eigen::Index>(sample_size),
                    static_cast<Eigen::Index>(windows.size()));
  Rng rng(seed);
  for (Eigen::Index l = 0; l < m.outcomes.rows(); ++l) {
    for (Eigen::Index j = 0; j < m.outcomes.cols(); ++j) {
      m.outcomes(l, j) = bernoulli(rng, windows[static_cast<std::size_t>(j)].success_prob) ? 1 : 0;
    }
  }
  return m;
}

namespace {

void check_dimensions(const Instance& instance, const ScenarioMatrix& scenarios) {
  if (scenarios.window_count() != instance.windows().size()) {
    throw Error("scenario matrix does not match the instance window set");
  }
}

}  // namespace

Eigen::VectorXd scenario_profits(const Instance& instance, const Schedule& schedule,
                                 const ScenarioMatrix& scenarios) {
  check_dimensions(instance, scenarios);
  Eigen::VectorXd profits = Eigen::VectorXd::Zero(scenarios.outcomes.rows());
  for (const auto& [orbit_id, seq] : schedule.assignments_by_orbit) {
    for (const auto& a : seq) {
      const auto col = static_cast<Eigen::Index>(instance.window_index(a.target_id, orbit_id));
      profits += instance.target(a.target_id).profit *
                 scenarios.outcomes.col(col).cast<double>();
    }
  }
  return profits;
}

double scenario_profit(const Instance& instance, const Schedule& schedule,
                       const ScenarioMatrix& scenarios, std::size_t scenario) {
  check_dimensions(instance, scenarios);
  if (scenario >= scenarios.sample_size()) throw Error("scenario index out of range");
  const auto row = static_cast<Eigen::Index>(scenario);
  double total = 0.0;
  for (const auto& [orbit_id, seq] : schedule.assignments_by_orbit) {
    for (const auto& a : seq) {
      const auto col = static_cast<Eigen::Index>(instance.window_index(a.target_id, orbit_id));
      if (scenarios.outcomes(row, col) != 0) total += instance.target(a.target_id).profit;
    }
  }
  return total;
}

std::size_t quantile_index(std::size_t sample_size, double epsilon) {
  if (sample_size == 0) return 0;
  // The small offset absorbs representation error in |W| * epsilon (e.g. 0.29 * 100).
  const double budget = std::floor(static_cast<double>(sample_size) * epsilon + 1e-9);
  const auto idx = static_cast<std::size_t>(std::max(0.0, budget));
  return std::min(idx, sample_size - 1);
}

double quantile_profit(Eigen::VectorXd profits, double epsilon) {
  const auto n = static_cast<std::size_t>(profits.size());
  if (n == 0) return 0.0;
  const std::size_t k = quantile_index(n, epsilon);
  double* begin = profits.data();
  std::nth_element(begin, begin + k, begin + n);
  return begin[k];
}

double confidence_profit(const Instance& instance, const Schedule& schedule,
                         const ScenarioMatrix& scenarios, double epsilon) {
  return quantile_profit(scenario_profits(instance, schedule, scenarios), epsilon);
}

}  // namespace aeos
