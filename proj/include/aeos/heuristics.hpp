#pragma once

// Target/resource selection rules, initial construction, the improved
// simulated annealing loop, and the construction-only greedy baseline.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "aeos/model.hpp"
#include "aeos/random.hpp"
#include "aeos/uncertainty.hpp"

namespace aeos {

struct SolverConfig {
  double gamma = 0.10;    // disturbance rate
  double t0 = 1000.0;     // initial temperature
  double alpha_t = 0.95;  // cooling factor
  double alpha_l = 1.05;  // chain-length growth
  double zeta_m = 0.05;   // improvement ratio that resets the failure counter
  int nf_m = 100;
  int nft_m = 50;
  int niter_m = 2000;
  /// The inner loop also stops after inner_cap_factor * max(nft_m, L^T)
  /// iterations; 0 leaves only the two loop guards. Without it the inner loop
  /// rarely ends while T is high, since any 5% swing resets nF^T.
  double inner_cap_factor = 4.0;
  /// Hard stop on the total iteration count; 0 disables.
  long max_total_iterations = 0;
  CcpParams ccp{0.10, 0.01, 0.01, std::nullopt};
  std::uint64_t seed = 1;           // solver stream
  std::uint64_t scenario_seed = 1;  // cloud-scenario stream

  /// Throws Error when a parameter leaves its domain.
  void validate() const;

  bool operator==(const SolverConfig&) const = default;
};

struct PoolEntry {
  int target_id = 0;
  double need = 0.0;
  std::map<int, double> conflict;  // orbit id -> CF, schedulable orbits only
};

/// Urgency: profit / max profit + (1 - mean success probability) over the
/// target's available windows; nullopt when it has none.
std::optional<double> need(const Target& target, const Instance& instance);

/// Total overlap of a window with the other available windows on its orbit.
double window_overlap(const Instance& instance, std::size_t window_index);

struct RemainingCapacity {
  double memory_mb = 0.0;
  double energy_j = 0.0;
};

RemainingCapacity remaining_capacity(const Instance& instance, const Schedule& schedule,
                                     int orbit_id);

/// Degree of resource conflict
///   (1 - p) * (overlap / |VTW| + memory cost / memory left + energy cost / energy left),
/// or nullopt when a cost exceeds what is left (window unschedulable).
std::optional<double> conflict(const VisibleWindow& window, const Instance& instance,
                               const RemainingCapacity& remaining, double overlap_s);
std::optional<double> conflict(const VisibleWindow& window, const Instance& instance,
                               const RemainingCapacity& remaining);

/// Targets with at least one available window, by Need descending
/// (ties: higher profit, then lower id), with their current CF values.
std::vector<PoolEntry> build_mission_pool(const Instance& instance, const Schedule& schedule);

/// Walks the mission pool once, inserting each target on its first orbit
/// (lowest CF first) that accepts it.
Schedule construct_initial(const Instance& instance, const SolverConfig& config);

/// Metropolis acceptance: 1 when delta_f >= 0, exp(delta_f / T) otherwise.
double acceptance_probability(double delta_f, double temperature);

/// One Metropolis draw; consumes a uniform only when delta_f < 0.
bool accept_move(double delta_f, double temperature, Rng& rng);

/// Relative improvement used by the failure-counter update; +inf when the
/// incumbent is zero and the new value positive, 0 when both are zero.
double improvement_ratio(double f_new, double f_old);

/// Failure counter after an accepted move.
int update_failure_counter(int counter, double zeta, double zeta_m);

struct TraceRow {
  long iteration = 0;    // global inner-iteration index, from 1
  int outer = 0;         // outer-loop index, from 0
  long n_iter = 0;       // nIter accumulated before this outer loop
  double temperature = 0.0;
  double f = 0.0;        // incumbent after the move decision
  double f_best = 0.0;
  double f_new = 0.0;
  bool accepted = false;
  int a_tar = 0;         // targets assigned in the incumbent
  int nf_t = 0;
  double chain_length = 0.0;
};

struct IsaResult {
  Schedule best;
  double f_best = 0.0;
  Schedule initial;
  double f0 = 0.0;
  std::vector<TraceRow> trace;
  int outer_iterations = 0;
  long total_iterations = 0;
  double final_temperature = 0.0;
  double final_chain_length = 0.0;
  int inner_loops_capped = 0;   // inner loops ended by inner_cap_factor
  bool stopped_by_total_cap = false;
};

IsaResult run_isa(const Instance& instance, const ScenarioMatrix& scenarios,
                  const SolverConfig& config);

/// Samples scenarios from config (sample size from the CCP bound unless
/// overridden) and runs the annealing loop.
IsaResult run_isa(const Instance& instance, const SolverConfig& config);

/// Scenario matrix a solver run with `config` uses.
ScenarioMatrix scenarios_for(const Instance& instance, const SolverConfig& config);

struct GreedyResult {
  Schedule schedule;
  double f = 0.0;
};

GreedyResult run_greedy_baseline(const Instance& instance, const ScenarioMatrix& scenarios,
                                 const SolverConfig& config);
GreedyResult run_greedy_baseline(const Instance& instance, const SolverConfig& config);

/// Number of binary decision variables (available windows).
std::size_t decision_variable_count(const Instance& instance);

}  // namespace aeos
