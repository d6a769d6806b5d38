#pragma once

// Generators and brute-force oracles shared by the unit tests and the
// acceptance binary. The oracles re-derive every quantity from the model
// formulas instead of calling the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "aeos/instance_gen.hpp"
#include "aeos/io.hpp"
#include "aeos/insertion.hpp"
#include "aeos/model.hpp"
#include "aeos/random.hpp"
#include "aeos/start_time.hpp"
#include "aeos/uncertainty.hpp"

namespace aeos::testing {

inline OrbitResource plain_orbit(int id = 1) {
  OrbitResource o = benchmark_resource();
  o.id = id;
  return o;
}

inline ObservationAssignment fixed_assignment(int target, int orbit, double ots, double ot,
                                              double pitch, double roll) {
  ObservationAssignment a;
  a.target_id = target;
  a.orbit_id = orbit;
  a.tp = 0.5;
  a.ots_s = ots;
  a.ote_s = ots + ot;
  a.pitch_deg = pitch;
  a.roll_deg = roll;
  return a;
}

// ---- start-time oracle ----------------------------------------------------

struct MarginOracle {
  const SlackContext& ctx;

  static double stab(double g) { return g <= 15.0 ? 5.0 : (g <= 40.0 ? 10.0 : 15.0); }

  double trans(double p1, double r1, double p2, double r2) const {
    const double dp = std::abs(p1 - p2);
    const double dr = std::abs(r1 - r2);
    return std::max(dp / ctx.orbit.pitch_rate_deg_per_s, dr / ctx.orbit.roll_rate_deg_per_s) +
           stab(dp + dr);
  }

  double ots(double tp) const {
    const double d = ctx.window.vte_s - ctx.obs_duration_s - ctx.window.vts_s;
    return ctx.window.vts_s + tp * d;
  }

  double pitch(double tp) const {
    const double len = ctx.window.vte_s - ctx.window.vts_s;
    const double m = (ots(tp) + ctx.obs_duration_s / 2.0 - ctx.window.vts_s) / len;
    return ctx.orbit.max_pitch_deg * (1.0 - 2.0 * m);
  }

  double successor(double tp) const {
    if (!ctx.successor) return 1e300;
    const auto& s = *ctx.successor;
    return s.ots_s - (ots(tp) + ctx.obs_duration_s) -
           trans(pitch(tp), ctx.window.roll_angle_deg, s.pitch_deg, s.roll_deg);
  }

  double predecessor(double tp) const {
    if (!ctx.predecessor) return 1e300;
    const auto& p = *ctx.predecessor;
    return ots(tp) - p.ote_s - trans(p.pitch_deg, p.roll_deg, pitch(tp), ctx.window.roll_angle_deg);
  }

  bool feasible(double tp) const {
    return successor(tp) >= -kMarginTolerance && predecessor(tp) >= -kMarginTolerance;
  }
};

struct GridVerdict {
  std::optional<double> tp;  // best feasible point found, refined
  std::size_t feasible_points = 0;
};

/// Scans tp at `step`, then bisects every feasibility change to 1e-14 and
/// returns the feasible point closest to 1/2 (ties to the smaller tp).
inline GridVerdict grid_oracle(const SlackContext& ctx, double step = 1e-5) {
  const MarginOracle m{ctx};
  const auto n = static_cast<long>(std::llround(1.0 / step));
  GridVerdict out;
  std::vector<double> candidates;
  bool prev = false;
  double prev_x = 0.0;
  auto refine = [&](double bad, double good) {
    for (int it = 0; it < 200 && std::abs(good - bad) > 1e-14; ++it) {
      const double mid = 0.5 * (bad + good);
      if (m.feasible(mid)) good = mid;
      else bad = mid;
    }
    return good;
  };
  if (m.feasible(0.5)) candidates.push_back(0.5);
  for (long j = 0; j <= n; ++j) {
    const double x = j == n ? 1.0 : static_cast<double>(j) * step;
    const bool ok = m.feasible(x);
    if (ok) ++out.feasible_points;
    if (j > 0 && ok != prev) candidates.push_back(ok ? refine(prev_x, x) : refine(x, prev_x));
    if (ok && (j == 0 || j == n)) candidates.push_back(x);
    prev = ok;
    prev_x = x;
  }
  for (double c : candidates) {
    if (!out.tp) {
      out.tp = c;
      continue;
    }
    const double dc = std::abs(c - 0.5);
    const double db = std::abs(*out.tp - 0.5);
    if (dc < db || (dc == db && c < *out.tp)) out.tp = c;
  }
  return out;
}

/// Random candidate window with random neighbors. With `constant_trans` the
/// candidate pitch envelope is zero, so transition times do not depend on tp.
inline SlackContext random_context(Rng& rng, bool constant_trans) {
  SlackContext ctx;
  ctx.orbit = plain_orbit();
  ctx.orbit.pitch_rate_deg_per_s = uniform_real(rng, 1.0, 5.0);
  ctx.orbit.roll_rate_deg_per_s = uniform_real(rng, 1.0, 5.0);
  if (constant_trans) ctx.orbit.max_pitch_deg = 0.0;
  ctx.obs_duration_s = uniform_real(rng, 5.0, 40.0);
  ctx.window.target_id = 1;
  ctx.window.orbit_id = 1;
  ctx.window.vts_s = uniform_real(rng, 0.0, 1000.0);
  ctx.window.vte_s = ctx.window.vts_s + ctx.obs_duration_s + uniform_real(rng, 0.0, 200.0);
  ctx.window.roll_angle_deg = uniform_real(rng, -30.0, 30.0);
  const double span = ctx.window.vte_s - ctx.window.vts_s;
  auto attitude = [&] { return uniform_real(rng, -30.0, 30.0); };
  if (uniform01(rng) < 0.8) {
    const double ote = ctx.window.vts_s + uniform_real(rng, -60.0, 0.6 * span);
    const double ot = uniform_real(rng, 5.0, 40.0);
    ctx.predecessor = fixed_assignment(2, 1, ote - ot, ot, attitude(), attitude());
  }
  if (uniform01(rng) < 0.8) {
    double ots = ctx.window.vte_s + uniform_real(rng, -0.6 * span, 60.0);
    if (ctx.predecessor && ots <= ctx.predecessor->ote_s) ots = ctx.predecessor->ote_s + 1.0;
    ctx.successor = fixed_assignment(3, 1, ots, uniform_real(rng, 5.0, 40.0), attitude(), attitude());
  }
  return ctx;
}

// ---- quantile oracle ------------------------------------------------------

/// max f such that at most floor(|W| eps) scenario profits lie below f, by
/// enumerating every excluded set y within the budget.
inline double brute_force_confidence(const std::vector<double>& profits, double epsilon) {
  const std::size_t n = profits.size();
  if (n == 0) return 0.0;
  const auto budget = static_cast<int>(std::floor(static_cast<double>(n) * epsilon + 1e-9));
  double best = -1e300;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) > budget) continue;
    double f = 1e300;
    for (std::size_t l = 0; l < n; ++l) {
      if (!(mask & (1u << l))) f = std::min(f, profits[l]);
    }
    if (f >= 1e300) continue;  // every scenario excluded
    best = std::max(best, f);
  }
  return best;
}

/// Scenario profits summed target by target from the raw outcome matrix.
inline std::vector<double> oracle_scenario_profits(const Instance& instance, const Schedule& schedule,
                                                   const ScenarioMatrix& scenarios) {
  std::vector<double> out(scenarios.sample_size(), 0.0);
  for (const auto& [orbit_id, seq] : schedule.assignments_by_orbit) {
    for (const ObservationAssignment& a : seq) {
      std::size_t col = 0;
      while (!(instance.windows()[col].target_id == a.target_id &&
               instance.windows()[col].orbit_id == a.orbit_id)) {
        ++col;
      }
      for (std::size_t l = 0; l < out.size(); ++l) {
        if (scenarios.outcomes(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(col)) == 1) {
          out[l] += instance.target(a.target_id).profit;
        }
      }
    }
  }
  return out;
}

// ---- instances ------------------------------------------------------------

/// Small synthetic instance with randomized capacities so that memory, energy
/// and timing failures all occur.
inline Instance fuzz_instance(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 99));
  GenSpec spec = desk_preset(static_cast<int>(uniform_int(rng, 8, 40)));
  spec.horizon_s = uniform_real(rng, 400.0, 1500.0);
  spec.synthetic.n_orbits = static_cast<int>(uniform_int(rng, 1, 3));
  spec.synthetic.visibility_prob = uniform_real(rng, 0.4, 0.9);
  spec.synthetic.length_min_s = 30.0;
  spec.synthetic.length_max_s = uniform_real(rng, 60.0, 240.0);
  spec.resource.memory_capacity_mb = uniform_real(rng, 3000.0, 20000.0);
  spec.resource.energy_capacity_j = uniform_real(rng, 30000.0, 300000.0);
  return generate_instance(spec, seed);
}

/// Feasible schedule built by inserting every window once in random order.
inline Schedule random_schedule(const Instance& instance, Rng& rng) {
  std::vector<std::size_t> order(instance.windows().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1))]);
  }
  Schedule s;
  for (std::size_t idx : order) try_insert(s, instance, instance.windows()[idx]);
  return s;
}

struct FuzzStats {
  long operations = 0;
  long inserts_ok = 0;
  long inserts_failed = 0;
  long removals = 0;
  long rollback_mismatches = 0;   // failed insert changed the serialized schedule
  long invalid_schedules = 0;     // validator found violations after an operation
  long ledger_mismatches = 0;     // ledger differs from from-scratch recomputation
};

inline bool ledgers_consistent(const Instance& instance, const Schedule& s) {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };
  for (const OrbitResource& o : instance.orbits()) {
    const auto seq = s.sequence(o.id);
    const auto m = s.memory_used_mb.find(o.id);
    const auto e = s.energy_used_j.find(o.id);
    const double mv = m == s.memory_used_mb.end() ? 0.0 : m->second;
    const double ev = e == s.energy_used_j.end() ? 0.0 : e->second;
    if (!close(mv, sequence_memory(instance, o.id, seq))) return false;
    if (!close(ev, sequence_energy(instance, o.id, seq))) return false;
  }
  return true;
}

/// Random insert/remove sequence on one instance with every invariant checked
/// after each operation.
inline void insertion_fuzz(const Instance& instance, Rng& rng, long ops, FuzzStats& stats) {
  Schedule s;
  const auto& windows = instance.windows();
  for (long op = 0; op < ops; ++op) {
    ++stats.operations;
    const auto assigned = s.assigned_targets();
    const bool do_remove = !assigned.empty() && uniform01(rng) < 0.3;
    if (do_remove) {
      const int t = assigned[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(assigned.size()) - 1))];
      remove(s, instance, t);
      ++stats.removals;
    } else if (!windows.empty()) {
      const auto& w = windows[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(windows.size()) - 1))];
      const Schedule copy = s;
      const std::string before = io::to_json(s).dump();
      const InsertionOutcome out = try_insert(s, instance, w);
      if (out.success) {
        ++stats.inserts_ok;
      } else {
        ++stats.inserts_failed;
        if (io::to_json(s).dump() != before || !(s == copy)) ++stats.rollback_mismatches;
      }
    }
    if (!validate_schedule(instance, s).ok()) ++stats.invalid_schedules;
    if (!ledgers_consistent(instance, s)) ++stats.ledger_mismatches;
  }
}

}  // namespace aeos::testing
