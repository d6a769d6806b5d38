#include "aeos/insertion.hpp"

#include <algorithm>
#include <array>

#include "aeos/geometry.hpp"
#include "aeos/start_time.hpp"

namespace aeos {

namespace {

using MaybeAssignment = std::optional<ObservationAssignment>;

// Maneuver energy along the present members of a short chain.
template <std::size_t N>
double chain_energy(const std::array<const MaybeAssignment*, N>& chain, const OrbitResource& orbit) {
  double total = 0.0;
  const ObservationAssignment* prev = nullptr;
  for (const MaybeAssignment* link : chain) {
    if (!link->has_value()) continue;
    if (prev != nullptr) total += maneuver_energy(attitude_of(*prev), attitude_of(**link), orbit);
    prev = &**link;
  }
  return total;
}

SlackContext context_for(const Instance& instance, const ObservationAssignment& a,
                         const MaybeAssignment& pred, const MaybeAssignment& succ) {
  SlackContext ctx;
  ctx.window = instance.window(a.target_id, a.orbit_id);
  ctx.obs_duration_s = instance.target(a.target_id).obs_duration_s;
  ctx.predecessor = pred;
  ctx.successor = succ;
  ctx.orbit = instance.orbit(a.orbit_id);
  return ctx;
}

// Re-times `a` against fixed neighbors; nullopt when no feasible start exists.
MaybeAssignment retime(const Instance& instance, const ObservationAssignment& a,
                       const MaybeAssignment& pred, const MaybeAssignment& succ) {
  const SlackContext ctx = context_for(instance, a, pred, succ);
  const auto tp = solve_start_time(ctx);
  if (!tp) return std::nullopt;
  return observe_at(ctx.window, instance.target(a.target_id), ctx.orbit, *tp);
}

}  // namespace

InsertionOutcome try_insert(Schedule& schedule, const Instance& instance,
                            const VisibleWindow& window) {
  InsertionOutcome out;
  auto fail = [&out](InsertFailure why) {
    out.failure = why;
    return out;
  };

  const Target& target = instance.target(window.target_id);
  const OrbitResource& orbit = instance.orbit(window.orbit_id);
  const VisibleWindow* own = instance.find_window(window.target_id, window.orbit_id);
  if (own == nullptr || !own->available || !window.available) return fail(InsertFailure::Unavailable);
  if (schedule.contains(target.id)) return fail(InsertFailure::AlreadyAssigned);

  // Step 1: nominal placement and resource headroom.
  const std::span<const ObservationAssignment> seq = schedule.sequence(orbit.id);
  const ObservationAssignment nominal = observe_at(*own, target, orbit, 0.5);
  const auto pos = static_cast<std::size_t>(
      std::lower_bound(seq.begin(), seq.end(), nominal.ots_s,
                       [](const ObservationAssignment& a, double t) { return a.ots_s < t; }) -
      seq.begin());
  const MaybeAssignment pred_pred = pos > 1 ? MaybeAssignment(seq[pos - 2]) : std::nullopt;
  const MaybeAssignment pred = pos > 0 ? MaybeAssignment(seq[pos - 1]) : std::nullopt;
  const MaybeAssignment succ = pos < seq.size() ? MaybeAssignment(seq[pos]) : std::nullopt;
  const MaybeAssignment succ_succ = pos + 1 < seq.size() ? MaybeAssignment(seq[pos + 1]) : std::nullopt;

  auto ledger = [](const std::map<int, double>& m, int id) {
    auto it = m.find(id);
    return it == m.end() ? 0.0 : it->second;
  };
  const double memory_used = ledger(schedule.memory_used_mb, orbit.id);
  const double energy_used = ledger(schedule.energy_used_j, orbit.id);
  const double memory_delta = target.obs_duration_s * orbit.memory_rate_mb_per_s;
  const double imaging_energy = target.obs_duration_s * orbit.imaging_energy_j_per_s;
  const double old_chain =
      chain_energy(std::array{&pred_pred, &pred, &succ, &succ_succ}, orbit);
  auto energy_delta = [&](const MaybeAssignment& p, const MaybeAssignment& c,
                          const MaybeAssignment& s) {
    return imaging_energy + chain_energy(std::array{&pred_pred, &p, &c, &s, &succ_succ}, orbit) -
           old_chain;
  };

  if (!within_capacity(memory_used + memory_delta, orbit.memory_capacity_mb)) {
    return fail(InsertFailure::Memory);
  }
  if (!within_capacity(energy_used + energy_delta(pred, nominal, succ), orbit.energy_capacity_j)) {
    return fail(InsertFailure::Energy);
  }

  MaybeAssignment candidate;
  MaybeAssignment new_pred = pred;
  MaybeAssignment new_succ = succ;

  // Step 2: re-time the candidate between fixed neighbors.
  SlackContext ctx;
  ctx.window = *own;
  ctx.obs_duration_s = target.obs_duration_s;
  ctx.predecessor = pred;
  ctx.successor = succ;
  ctx.orbit = orbit;
  if (const auto tp = solve_start_time(ctx)) {
    candidate = observe_at(*own, target, orbit, *tp);
  } else {
    // Step 3: hold the candidate at tp = 1/2 and see which side blocks it.
    candidate = nominal;
    const bool succ_ok = successor_margin(ctx, 0.5) >= -kMarginTolerance;
    const bool pred_ok = predecessor_margin(ctx, 0.5) >= -kMarginTolerance;
    if (succ_ok && pred_ok) return fail(InsertFailure::Timing);
    // Steps 4-6: successor first, then predecessor.
    if (!succ_ok) {
      new_succ = retime(instance, *succ, candidate, succ_succ);
      if (!new_succ) return fail(InsertFailure::Timing);
    }
    if (!pred_ok) {
      new_pred = retime(instance, *pred, pred_pred, candidate);
      if (!new_pred) return fail(InsertFailure::Timing);
    }
  }

  // Step 7: final energy check with the committed attitudes, then commit.
  const double e_delta = energy_delta(new_pred, candidate, new_succ);
  if (!within_capacity(energy_used + e_delta, orbit.energy_capacity_j)) {
    return fail(InsertFailure::Energy);
  }

  auto& mutable_seq = schedule.assignments_by_orbit[orbit.id];
  if (new_pred && new_pred->tp != pred->tp) {
    out.shifted_neighbors.push_back({pred->target_id, pred->tp, new_pred->tp});
    mutable_seq[pos - 1] = *new_pred;
  }
  if (new_succ && new_succ->tp != succ->tp) {
    out.shifted_neighbors.push_back({succ->target_id, succ->tp, new_succ->tp});
    mutable_seq[pos] = *new_succ;
  }
  mutable_seq.insert(mutable_seq.begin() + static_cast<std::ptrdiff_t>(pos), *candidate);
  schedule.memory_used_mb[orbit.id] = memory_used + memory_delta;
  schedule.energy_used_j[orbit.id] = energy_used + e_delta;

  out.success = true;
  out.placed = candidate;
  out.memory_delta_mb = memory_delta;
  out.energy_delta_j = e_delta;
  return out;
}

RemovalOutcome remove(Schedule& schedule, const Instance& instance, int target_id) {
  const auto where = schedule.locate(target_id);
  if (!where) throw Error("target " + std::to_string(target_id) + " is not assigned");
  const auto [orbit_id, pos] = *where;
  const OrbitResource& orbit = instance.orbit(orbit_id);
  auto& seq = schedule.assignments_by_orbit.at(orbit_id);

  RemovalOutcome out;
  out.removed = seq[pos];
  const double ot = instance.target(target_id).obs_duration_s;
  std::optional<AttitudePair> before;
  std::optional<AttitudePair> after;
  if (pos > 0) before = attitude_of(seq[pos - 1]);
  if (pos + 1 < seq.size()) after = attitude_of(seq[pos + 1]);
  const std::optional<AttitudePair> self = attitude_of(out.removed);
  out.memory_delta_mb = -ot * orbit.memory_rate_mb_per_s;
  out.energy_delta_j = -ot * orbit.imaging_energy_j_per_s - maneuver_energy(before, self, orbit) -
                       maneuver_energy(self, after, orbit) + maneuver_energy(before, after, orbit);

  seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(pos));
  if (seq.empty()) {
    schedule.assignments_by_orbit.erase(orbit_id);
    schedule.memory_used_mb.erase(orbit_id);
    schedule.energy_used_j.erase(orbit_id);
  } else {
    schedule.memory_used_mb[orbit_id] += out.memory_delta_mb;
    schedule.energy_used_j[orbit_id] += out.energy_delta_j;
  }
  return out;
}

}  // namespace aeos
