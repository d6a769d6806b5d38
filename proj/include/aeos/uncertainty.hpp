#pragma once

// Cloud-outcome scenarios and the confidence-quantile profit.
//
// The chance constraint P{profit >= f} >= 1 - alpha is replaced by |W| sampled
// scenarios of which at most floor(|W| * epsilon) may fall below f. The largest
// such f is an order statistic of the scenario profits, which is how it is
// computed here; the big-M constraint never materializes.

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "aeos/model.hpp"

namespace aeos {

struct CcpParams {
  double alpha = 0.10;    // 1 - alpha: confidence interval
  double epsilon = 0.01;  // 1 - epsilon: solution confidence level
  double theta = 0.01;    // 1 - theta: simultaneous feasibility probability
  std::optional<std::size_t> sample_size_override;

  /// Throws Error unless 0 < epsilon < alpha < 1 and 0 < theta < 1.
  void validate() const;

  bool operator==(const CcpParams&) const = default;
};

/// Binary outcomes lambda, one row per scenario, one column per window of the
/// instance (instance window order).
struct ScenarioMatrix {
  using Outcomes = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

  std::uint64_t seed = 0;
  Outcomes outcomes;

  std::size_t sample_size() const { return static_cast<std::size_t>(outcomes.rows()); }
  std::size_t window_count() const { return static_cast<std::size_t>(outcomes.cols()); }

  bool operator==(const ScenarioMatrix& o) const {
    return seed == o.seed && outcomes.rows() == o.outcomes.rows() &&
           outcomes.cols() == o.outcomes.cols() && outcomes == o.outcomes;
  }
};

/// Sample-size lower bound with |X| = 2^n_vars (so ln U = ln 2) and natural
/// logarithms. The override, when set, is returned as is.
std::size_t required_sample_size(const CcpParams& params, std::size_t n_vars);

/// Independent Bernoulli(p_ik) draws per scenario and window.
ScenarioMatrix sample_scenarios(const Instance& instance, std::size_t sample_size,
                                std::uint64_t seed);

/// Profit of every scenario for the given schedule.
Eigen::VectorXd scenario_profits(const Instance& instance, const Schedule& schedule,
                                 const ScenarioMatrix& scenarios);

double scenario_profit(const Instance& instance, const Schedule& schedule,
                       const ScenarioMatrix& scenarios, std::size_t scenario);

/// Index into the ascending scenario profits that the confidence profit reads.
std::size_t quantile_index(std::size_t sample_size, double epsilon);

/// Value at quantile_index of the ascending profits. Empty input gives 0.
double quantile_profit(Eigen::VectorXd profits, double epsilon);

double confidence_profit(const Instance& instance, const Schedule& schedule,
                         const ScenarioMatrix& scenarios, double epsilon);

}  // namespace aeos
