#include "aeos/heuristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "aeos/insertion.hpp"
#include "aeos/random.hpp"

namespace aeos {

namespace {

constexpr std::uint64_t kSolverStream = 7;

double ledger_value(const std::map<int, double>& m, int id) {
  auto it = m.find(id);
  return it == m.end() ? 0.0 : it->second;
}

// Resource ratio for CF; nullopt when the cost does not fit what is left.
std::optional<double> share(double cost, double left) {
  if (cost <= 0.0) return 0.0;
  if (left <= 0.0 || !within_capacity(cost, left)) return std::nullopt;
  return cost / left;
}

class Selector {
 public:
  explicit Selector(const Instance& instance) : instance_(instance) {
    overlap_.resize(instance.windows().size(), 0.0);
    for (std::size_t w = 0; w < overlap_.size(); ++w) {
      if (instance.windows()[w].available) overlap_[w] = window_overlap(instance, w);
    }
  }

  // Orbits of a target's schedulable windows, CF ascending (ties: orbit id).
  std::vector<std::pair<double, std::size_t>> ranked_windows(int target_id,
                                                             const Schedule& schedule) const {
    std::vector<std::pair<double, std::size_t>> out;
    for (std::size_t w : instance_.windows_of_target(target_id)) {
      const VisibleWindow& win = instance_.windows()[w];
      if (!win.available) continue;
      const auto cf = conflict(win, instance_, remaining_capacity(instance_, schedule, win.orbit_id),
                               overlap_[w]);
      if (cf) out.emplace_back(*cf, w);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  bool place(Schedule& schedule, int target_id) const {
    for (const auto& [cf, w] : ranked_windows(target_id, schedule)) {
      if (try_insert(schedule, instance_, instance_.windows()[w]).success) return true;
    }
    return false;
  }

 private:
  const Instance& instance_;
  std::vector<double> overlap_;
};

std::vector<int> pooled_targets(const Instance& instance) {
  std::vector<int> ids;
  for (const Target& t : instance.targets()) {
    if (need(t, instance)) ids.push_back(t.id);
  }
  return ids;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(std::string("invalid solver config: ") + what);
  };
  require(gamma > 0.0 && gamma < 1.0, "gamma must lie in (0, 1)");
  require(t0 > 0.0, "t0 must be positive");
  require(alpha_t > 0.0 && alpha_t < 1.0, "alpha_t must lie in (0, 1)");
  require(alpha_l > 1.0, "alpha_l must exceed 1");
  require(zeta_m >= 0.0, "zeta_m must be nonnegative");
  require(nf_m > 0 && nft_m > 0 && niter_m > 0, "counts must be positive");
  require(inner_cap_factor >= 0.0 && max_total_iterations >= 0, "caps must be nonnegative");
  ccp.validate();
}

std::optional<double> need(const Target& target, const Instance& instance) {
  double p_sum = 0.0;
  int n = 0;
  for (std::size_t w : instance.windows_of_target(target.id)) {
    const VisibleWindow& win = instance.windows()[w];
    if (!win.available) continue;
    p_sum += win.success_prob;
    ++n;
  }
  if (n == 0) return std::nullopt;
  const double norm = instance.max_profit() > 0.0 ? target.profit / instance.max_profit() : 0.0;
  return norm + (1.0 - p_sum / n);
}

double window_overlap(const Instance& instance, std::size_t window_index) {
  const VisibleWindow& self = instance.windows().at(window_index);
  double total = 0.0;
  for (std::size_t w : instance.windows_of_orbit(self.orbit_id)) {
    if (w == window_index) continue;
    const VisibleWindow& other = instance.windows()[w];
    if (!other.available) continue;
    if (other.vts_s >= self.vte_s) break;  // sorted by start
    total += std::max(0.0, std::min(self.vte_s, other.vte_s) - std::max(self.vts_s, other.vts_s));
  }
  return total;
}

RemainingCapacity remaining_capacity(const Instance& instance, const Schedule& schedule,
                                     int orbit_id) {
  const OrbitResource& orbit = instance.orbit(orbit_id);
  return {orbit.memory_capacity_mb - ledger_value(schedule.memory_used_mb, orbit_id),
          orbit.energy_capacity_j - ledger_value(schedule.energy_used_j, orbit_id)};
}

std::optional<double> conflict(const VisibleWindow& window, const Instance& instance,
                               const RemainingCapacity& remaining, double overlap_s) {
  const Target& target = instance.target(window.target_id);
  const OrbitResource& orbit = instance.orbit(window.orbit_id);
  const auto mem = share(target.obs_duration_s * orbit.memory_rate_mb_per_s, remaining.memory_mb);
  const auto energy =
      share(target.obs_duration_s * orbit.imaging_energy_j_per_s, remaining.energy_j);
  if (!mem || !energy) return std::nullopt;
  const double length = window.length();
  const double overlap = length > 0.0 ? overlap_s / length : 0.0;
  return (1.0 - window.success_prob) * (overlap + *mem + *energy);
}

std::optional<double> conflict(const VisibleWindow& window, const Instance& instance,
                               const RemainingCapacity& remaining) {
  return conflict(window, instance, remaining,
                  window_overlap(instance, instance.window_index(window.target_id, window.orbit_id)));
}

std::vector<PoolEntry> build_mission_pool(const Instance& instance, const Schedule& schedule) {
  std::vector<PoolEntry> pool;
  for (const Target& t : instance.targets()) {
    const auto n = need(t, instance);
    if (!n) continue;
    PoolEntry entry;
    entry.target_id = t.id;
    entry.need = *n;
    for (std::size_t w : instance.windows_of_target(t.id)) {
      const VisibleWindow& win = instance.windows()[w];
      if (!win.available) continue;
      const auto cf = conflict(win, instance, remaining_capacity(instance, schedule, win.orbit_id));
      if (cf) entry.conflict[win.orbit_id] = *cf;
    }
    pool.push_back(std::move(entry));
  }
  std::stable_sort(pool.begin(), pool.end(), [&](const PoolEntry& a, const PoolEntry& b) {
    if (a.need != b.need) return a.need > b.need;
    const double pa = instance.target(a.target_id).profit;
    const double pb = instance.target(b.target_id).profit;
    if (pa != pb) return pa > pb;
    return a.target_id < b.target_id;
  });
  return pool;
}

Schedule construct_initial(const Instance& instance, const SolverConfig& config) {
  config.validate();
  Schedule schedule;
  const Selector selector(instance);
  // CF values are recomputed against the live ledgers on every attempt, which
  // is the same as refreshing the affected orbit after each placement.
  for (const PoolEntry& entry : build_mission_pool(instance, Schedule{})) {
    selector.place(schedule, entry.target_id);
  }
  return schedule;
}

double acceptance_probability(double delta_f, double temperature) {
  if (delta_f >= 0.0) return 1.0;
  return std::exp(delta_f / temperature);
}

bool accept_move(double delta_f, double temperature, Rng& rng) {
  if (delta_f >= 0.0) return true;
  return uniform01(rng) < acceptance_probability(delta_f, temperature);
}

double improvement_ratio(double f_new, double f_old) {
  if (f_old == 0.0) return f_new > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return (f_new - f_old) / f_old;
}

int update_failure_counter(int counter, double zeta, double zeta_m) {
  return zeta >= zeta_m ? 0 : counter + 1;
}

std::size_t decision_variable_count(const Instance& instance) {
  return static_cast<std::size_t>(std::count_if(instance.windows().begin(),
                                                instance.windows().end(),
                                                [](const VisibleWindow& w) { return w.available; }));
}

ScenarioMatrix scenarios_for(const Instance& instance, const SolverConfig& config) {
  config.validate();
  // An instance without windows still gets the theta term of the bound.
  const std::size_t n_vars = std::max<std::size_t>(1, decision_variable_count(instance));
  return sample_scenarios(instance, required_sample_size(config.ccp, n_vars),
                          config.scenario_seed);
}

IsaResult run_isa(const Instance& instance, const ScenarioMatrix& scenarios,
                  const SolverConfig& config) {
  config.validate();
  const double epsilon = config.ccp.epsilon;
  auto evaluate = [&](const Schedule& s) {
    return confidence_profit(instance, s, scenarios, epsilon);
  };

  IsaResult out;
  out.initial = construct_initial(instance, config);
  out.f0 = evaluate(out.initial);
  out.best = out.initial;
  out.f_best = out.f0;

  const Selector selector(instance);
  const std::vector<int> pooled = pooled_targets(instance);
  Rng rng(derive_seed(config.seed, kSolverStream));

  Schedule current = out.initial;
  double f = out.f0;
  double temperature = config.t0;
  double chain = static_cast<double>(pooled.size()) / 2.0;
  long nf = 0;
  long n_iter = 0;
  long iteration = 0;
  int outer = 0;

  while ((nf < config.nf_m || n_iter < config.niter_m) && !out.stopped_by_total_cap) {
    int nf_t = 0;
    long n_iter_t = 0;
    const auto chain_len = static_cast<long>(std::ceil(chain - 1e-9));
    const double inner_cap =
        config.inner_cap_factor * static_cast<double>(std::max<long>(config.nft_m, chain_len));
    while (nf_t < config.nft_m || n_iter_t < chain_len) {
      if (config.inner_cap_factor > 0.0 && static_cast<double>(n_iter_t) >= inner_cap) {
        ++out.inner_loops_capped;
        break;
      }
      if (config.max_total_iterations > 0 && iteration >= config.max_total_iterations) {
        out.stopped_by_total_cap = true;
        break;
      }
      Schedule candidate = current;

      // Destroy: ceil(gamma * aTar) random assigned targets.
      std::vector<int> assigned = candidate.assigned_targets();
      if (!assigned.empty()) {
        const auto k = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(config.gamma * assigned.size() - 1e-12)));
        for (std::size_t i = 0; i < k && i < assigned.size(); ++i) {
          const auto j = static_cast<std::size_t>(uniform_int(
              rng, static_cast<std::int64_t>(i), static_cast<std::int64_t>(assigned.size()) - 1));
          std::swap(assigned[i], assigned[j]);
          remove(candidate, instance, assigned[i]);
        }
      }

      // Repair: random passes over unassigned pooled targets until one places nothing.
      for (;;) {
        std::vector<int> open;
        for (int id : pooled) {
          if (!candidate.contains(id)) open.push_back(id);
        }
        shuffle(open, rng);
        bool placed = false;
        for (int id : open) placed = selector.place(candidate, id) || placed;
        if (!placed) break;
      }

      const double f_new = evaluate(candidate);
      const double delta = f_new - f;
      const bool accepted = accept_move(delta, temperature, rng);
      if (accepted) {
        nf_t = update_failure_counter(nf_t, improvement_ratio(f_new, f), config.zeta_m);
        current = std::move(candidate);
        f = f_new;
      } else {
        ++nf_t;
      }
      if (f > out.f_best) {
        out.best = current;
        out.f_best = f;
      }
      ++n_iter_t;
      ++iteration;

      TraceRow row;
      row.iteration = iteration;
      row.outer = outer;
      row.n_iter = n_iter;
      row.temperature = temperature;
      row.f = f;
      row.f_best = out.f_best;
      row.f_new = f_new;
      row.accepted = accepted;
      row.a_tar = static_cast<int>(current.size());
      row.nf_t = nf_t;
      row.chain_length = chain;
      out.trace.push_back(row);
    }
    temperature *= config.alpha_t;
    chain *= config.alpha_l;
    nf += nf_t;
    n_iter += n_iter_t;
    ++outer;
  }

  out.outer_iterations = outer;
  out.total_iterations = iteration;
  out.final_temperature = temperature;
  out.final_chain_length = chain;
  return out;
}

IsaResult run_isa(const Instance& instance, const SolverConfig& config) {
  return run_isa(instance, scenarios_for(instance, config), config);
}

GreedyResult run_greedy_baseline(const Instance& instance, const ScenarioMatrix& scenarios,
                                 const SolverConfig& config) {
  GreedyResult out;
  out.schedule = construct_initial(instance, config);
  out.f = confidence_profit(instance, out.schedule, scenarios, config.ccp.epsilon);
  return out;
}

GreedyResult run_greedy_baseline(const Instance& instance, const SolverConfig& config) {
  return run_greedy_baseline(instance, scenarios_for(instance, config), config);
}

}  // namespace aeos
