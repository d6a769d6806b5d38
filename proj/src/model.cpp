#include "aeos/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "aeos/geometry.hpp"

namespace aeos {

// ---------------------------------------------------------------------------
// Schedule

std::size_t Schedule::size() const {
  std::size_t n = 0;
  for (const auto& [orbit, seq] : assignments_by_orbit) n += seq.size();
  return n;
}

std::optional<std::pair<int, std::size_t>> Schedule::locate(int target_id) const {
  for (const auto& [orbit, seq] : assignments_by_orbit) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (seq[i].target_id == target_id) return std::pair{orbit, i};
    }
  }
  return std::nullopt;
}

std::vector<int> Schedule::assigned_targets() const {
  std::vector<int> ids;
  for (const auto& [orbit, seq] : assignments_by_orbit) {
    for (const auto& a : seq) ids.push_back(a.target_id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::span<const ObservationAssignment> Schedule::sequence(int orbit_id) const {
  auto it = assignments_by_orbit.find(orbit_id);
  if (it == assignments_by_orbit.end()) return {};
  return it->second;
}

// ---------------------------------------------------------------------------
// Instance

Instance::Instance(std::vector<Target> targets, std::vector<OrbitResource> orbits,
                   std::vector<VisibleWindow> windows, double horizon_s, std::uint64_t rng_seed)
    : targets_(std::move(targets)),
      orbits_(std::move(orbits)),
      windows_(std::move(windows)),
      horizon_s_(horizon_s),
      rng_seed_(rng_seed) {
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    const Target& t = targets_[i];
    if (!target_pos_.emplace(t.id, i).second) {
      throw Error("duplicate target id " + std::to_string(t.id));
    }
    if (!(t.obs_duration_s > 0.0)) {
      throw Error("target " + std::to_string(t.id) + " has non-positive observation duration");
    }
    max_profit_ = std::max(max_profit_, t.profit);
  }
  for (std::size_t i = 0; i < orbits_.size(); ++i) {
    const OrbitResource& o = orbits_[i];
    if (!orbit_pos_.emplace(o.id, i).second) {
      throw Error("duplicate orbit id " + std::to_string(o.id));
    }
    if (!(o.pitch_rate_deg_per_s > 0.0) || !(o.roll_rate_deg_per_s > 0.0)) {
      throw Error("orbit " + std::to_string(o.id) + " has non-positive slew rate");
    }
    by_orbit_[o.id];
  }
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    const VisibleWindow& w = windows_[i];
    if (!has_target(w.target_id) || !has_orbit(w.orbit_id)) {
      throw Error("window references unknown target " + std::to_string(w.target_id) +
                  " or orbit " + std::to_string(w.orbit_id));
    }
    if (!window_pos_.emplace(std::pair{w.target_id, w.orbit_id}, i).second) {
      throw Error("duplicate window for target " + std::to_string(w.target_id) + " on orbit " +
                  std::to_string(w.orbit_id));
    }
    if (w.length() < target(w.target_id).obs_duration_s - kTimeTolerance) {
      throw Error("window of target " + std::to_string(w.target_id) + " on orbit " +
                  std::to_string(w.orbit_id) + " is shorter than its observation duration");
    }
    if (w.success_prob < 0.0 || w.success_prob > 1.0) {
      throw Error("success probability outside [0, 1]");
    }
    by_target_[w.target_id].push_back(i);
    by_orbit_[w.orbit_id].push_back(i);
  }
  for (auto& [id, idx] : by_target_) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return windows_[a].orbit_id < windows_[b].orbit_id;
    });
  }
  for (auto& [id, idx] : by_orbit_) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (windows_[a].vts_s != windows_[b].vts_s) return windows_[a].vts_s < windows_[b].vts_s;
      return windows_[a].target_id < windows_[b].target_id;
    });
  }
}

const Target& Instance::target(int id) const {
  auto it = target_pos_.find(id);
  if (it == target_pos_.end()) throw Error("unknown target id " + std::to_string(id));
  return targets_[it->second];
}

const OrbitResource& Instance::orbit(int id) const {
  auto it = orbit_pos_.find(id);
  if (it == orbit_pos_.end()) throw Error("unknown orbit id " + std::to_string(id));
  return orbits_[it->second];
}

const VisibleWindow* Instance::find_window(int target_id, int orbit_id) const {
  auto it = window_pos_.find({target_id, orbit_id});
  return it == window_pos_.end() ? nullptr : &windows_[it->second];
}

const VisibleWindow& Instance::window(int target_id, int orbit_id) const {
  return windows_[window_index(target_id, orbit_id)];
}

std::size_t Instance::window_index(int target_id, int orbit_id) const {
  auto it = window_pos_.find({target_id, orbit_id});
  if (it == window_pos_.end()) {
    throw Error("no window for target " + std::to_string(target_id) + " on orbit " +
                std::to_string(orbit_id));
  }
  return it->second;
}

std::span<const std::size_t> Instance::windows_of_target(int target_id) const {
  auto it = by_target_.find(target_id);
  if (it == by_target_.end()) return {};
  return it->second;
}

std::span<const std::size_t> Instance::windows_of_orbit(int orbit_id) const {
  auto it = by_orbit_.find(orbit_id);
  if (it == by_orbit_.end()) return {};
  return it->second;
}

Instance Instance::with_orbits(std::vector<OrbitResource> orbits) const {
  if (orbits.size() != orbits_.size()) throw Error("orbit set size changed");
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    if (orbits[i].id != orbits_[i].id) throw Error("orbit ids changed");
  }
  return Instance(targets_, std::move(orbits), windows_, horizon_s_, rng_seed_);
}

// ---------------------------------------------------------------------------
// Validation

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::DuplicateTarget: return "duplicate_target";
    case ViolationKind::UnavailableWindow: return "unavailable_window";
    case ViolationKind::OrbitMismatch: return "orbit_mismatch";
    case ViolationKind::OutsideWindow: return "outside_window";
    case ViolationKind::StartTimeMismatch: return "start_time_mismatch";
    case ViolationKind::AttitudeMismatch: return "attitude_mismatch";
    case ViolationKind::Ordering: return "ordering";
    case ViolationKind::Memory: return "memory";
    case ViolationKind::Energy: return "energy";
    case ViolationKind::Transition: return "transition";
    case ViolationKind::LedgerMismatch: return "ledger_mismatch";
  }
  return "unknown";
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

std::string ValidationReport::to_text() const {
  if (violations.empty()) return "schedule is feasible\n";
  std::ostringstream os;
  os << violations.size() << " violation(s)\n";
  for (const Violation& v : violations) {
    char mag[32];
    std::snprintf(mag, sizeof mag, "%.9g", v.magnitude);
    os << "  [" << to_string(v.kind) << "] orbit " << v.orbit_id << " target " << v.target_id;
    if (v.other_target_id) os << " -> " << *v.other_target_id;
    os << " magnitude " << mag;
    if (!v.detail.empty()) os << ": " << v.detail;
    os << '\n';
  }
  return os.str();
}

bool within_capacity(double used, double capacity) {
  return used <= capacity + kResourceTolerance * std::max(1.0, std::abs(capacity));
}

double sequence_memory(const Instance& instance, int orbit_id,
                       std::span<const ObservationAssignment> sequence) {
  const OrbitResource& orbit = instance.orbit(orbit_id);
  double total = 0.0;
  for (const auto& a : sequence) {
    total += instance.target(a.target_id).obs_duration_s * orbit.memory_rate_mb_per_s;
  }
  return total;
}

double sequence_energy(const Instance& instance, int orbit_id,
                       std::span<const ObservationAssignment> sequence) {
  const OrbitResource& orbit = instance.orbit(orbit_id);
  double total = 0.0;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    total += instance.target(sequence[i].target_id).obs_duration_s * orbit.imaging_energy_j_per_s;
    if (i + 1 < sequence.size()) {
      total += maneuver_energy(attitude_of(sequence[i]), attitude_of(sequence[i + 1]), orbit);
    }
  }
  return total;
}

namespace {

bool ledger_matches(double recorded, double recomputed) {
  return std::abs(recorded - recomputed) <=
         kResourceTolerance * std::max(1.0, std::abs(recomputed));
}

// Attitude from stored start time, clamped so that a containment violation
// (reported separately) does not abort the remaining checks.
AttitudePair clamped_attitude(const VisibleWindow& w, const OrbitResource& o, double ots,
                              double ot) {
  const double m = std::clamp(midpoint_fraction(w, ots, ot), 0.0, 1.0);
  return {o.max_pitch_deg * (1.0 - 2.0 * m), w.roll_angle_deg};
}

}  // namespace

ValidationReport validate_schedule(const Instance& instance, const Schedule& schedule) {
  ValidationReport report;
  auto add = [&](ViolationKind kind, int orbit, int target, std::optional<int> other,
                 double magnitude, std::string detail) {
    report.violations.push_back({kind, orbit, target, other, magnitude, std::move(detail)});
  };

  // Malformed references are hard errors, checked up front.
  for (const auto& [orbit_id, seq] : schedule.assignments_by_orbit) {
    instance.orbit(orbit_id);
    for (const auto& a : seq) {
      instance.target(a.target_id);
      instance.orbit(a.orbit_id);
    }
  }
  for (const auto& [orbit_id, v] : schedule.memory_used_mb) instance.orbit(orbit_id);
  for (const auto& [orbit_id, v] : schedule.energy_used_j) instance.orbit(orbit_id);

  std::map<int, int> first_orbit;
  for (const auto& [orbit_id, seq] : schedule.assignments_by_orbit) {
    const OrbitResource& orbit = instance.orbit(orbit_id);
    std::vector<AttitudePair> attitudes(seq.size());
    std::vector<bool> usable(seq.size(), false);

    for (std::size_t i = 0; i < seq.size(); ++i) {
      const ObservationAssignment& a = seq[i];
      auto [it, fresh] = first_orbit.emplace(a.target_id, orbit_id);
      if (!fresh) {
        add(ViolationKind::DuplicateTarget, orbit_id, a.target_id, std::nullopt, 1.0,
            "also observed on orbit " + std::to_string(it->second));
      }
      if (a.orbit_id != orbit_id) {
        add(ViolationKind::OrbitMismatch, orbit_id, a.target_id, std::nullopt, 1.0,
            "assignment records orbit " + std::to_string(a.orbit_id));
      }
      const VisibleWindow* w = instance.find_window(a.target_id, orbit_id);
      if (w == nullptr || !w->available) {
        add(ViolationKind::UnavailableWindow, orbit_id, a.target_id, std::nullopt, 1.0,
            w == nullptr ? "no visible window" : "window marked unavailable");
        continue;
      }
      const double ot = instance.target(a.target_id).obs_duration_s;
      const double early = w->vts_s - a.ots_s;
      const double late = a.ote_s - w->vte_s;
      if (early > kTimeTolerance || late > kTimeTolerance || a.tp < -1e-12 || a.tp > 1.0 + 1e-12) {
        add(ViolationKind::OutsideWindow, orbit_id, a.target_id, std::nullopt,
            std::max({early, late, 0.0}), "observation leaves visible window");
      }
      const double expected_ots = start_time_at(*w, ot, a.tp);
      const double start_err = std::abs(expected_ots - a.ots_s);
      const double dur_err = std::abs(a.ote_s - a.ots_s - ot);
      if (start_err > kTimeTolerance || dur_err > kTimeTolerance) {
        add(ViolationKind::StartTimeMismatch, orbit_id, a.target_id, std::nullopt,
            std::max(start_err, dur_err), "start/end inconsistent with tp");
      }
      attitudes[i] = clamped_attitude(*w, orbit, a.ots_s, ot);
      const double att_err = std::max(std::abs(attitudes[i].pitch_deg - a.pitch_deg),
                                      std::abs(attitudes[i].roll_deg - a.roll_deg));
      if (att_err > 1e-6) {
        add(ViolationKind::AttitudeMismatch, orbit_id, a.target_id, std::nullopt, att_err,
            "stored attitude differs from attitude model");
      }
      usable[i] = true;
    }

    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      const ObservationAssignment& a = seq[i];
      const ObservationAssignment& b = seq[i + 1];
      if (!(a.ots_s < b.ots_s)) {
        add(ViolationKind::Ordering, orbit_id, a.target_id, b.target_id, a.ots_s - b.ots_s,
            "sequence not strictly ordered by start time");
      }
      if (!usable[i] || !usable[i + 1]) continue;
      const double g = a.ote_s + transition_time(attitudes[i], attitudes[i + 1], orbit) - b.ots_s;
      if (g > kTimeTolerance) {
        add(ViolationKind::Transition, orbit_id, a.target_id, b.target_id, g,
            "insufficient time for attitude transition");
      }
    }

    double memory = 0.0;
    double energy = 0.0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const double ot = instance.target(seq[i].target_id).obs_duration_s;
      memory += ot * orbit.memory_rate_mb_per_s;
      energy += ot * orbit.imaging_energy_j_per_s;
      if (i + 1 < seq.size()) {
        const AttitudePair from = usable[i] ? attitudes[i] : attitude_of(seq[i]);
        const AttitudePair to = usable[i + 1] ? attitudes[i + 1] : attitude_of(seq[i + 1]);
        energy += maneuver_energy(from, to, orbit);
      }
    }
    if (!within_capacity(memory, orbit.memory_capacity_mb)) {
      add(ViolationKind::Memory, orbit_id, 0, std::nullopt, memory - orbit.memory_capacity_mb,
          "memory capacity exceeded");
    }
    if (!within_capacity(energy, orbit.energy_capacity_j)) {
      add(ViolationKind::Energy, orbit_id, 0, std::nullopt, energy - orbit.energy_capacity_j,
          "energy capacity exceeded");
    }
    auto mem_it = schedule.memory_used_mb.find(orbit_id);
    const double mem_rec = mem_it == schedule.memory_used_mb.end() ? 0.0 : mem_it->second;
    if (!ledger_matches(mem_rec, memory)) {
      add(ViolationKind::LedgerMismatch, orbit_id, 0, std::nullopt, mem_rec - memory,
          "memory ledger differs from recomputation");
    }
    auto en_it = schedule.energy_used_j.find(orbit_id);
    const double en_rec = en_it == schedule.energy_used_j.end() ? 0.0 : en_it->second;
    if (!ledger_matches(en_rec, energy)) {
      add(ViolationKind::LedgerMismatch, orbit_id, 0, std::nullopt, en_rec - energy,
          "energy ledger differs from recomputation");
    }
  }

  // Ledger entries for orbits without a sequence must be zero.
  auto check_orphans = [&](const std::map<int, double>& ledger, const char* what) {
    for (const auto& [orbit_id, value] : ledger) {
      if (schedule.assignments_by_orbit.count(orbit_id) == 0 && !ledger_matches(value, 0.0)) {
        add(ViolationKind::LedgerMismatch, orbit_id, 0, std::nullopt, value,
            std::string(what) + " ledger non-zero for empty orbit");
      }
    }
  };
  check_orphans(schedule.memory_used_mb, "memory");
  check_orphans(schedule.energy_used_j, "energy");
  return report;
}

double schedule_profit_deterministic(const Instance& instance, const Schedule& schedule) {
  double total = 0.0;
  for (const auto& [orbit_id, seq] : schedule.assignments_by_orbit) {
    for (const auto& a : seq) total += instance.target(a.target_id).profit;
  }
  return total;
}

}  // namespace aeos
