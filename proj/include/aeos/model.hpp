#pragma once

// Domain records for multi-satellite observation scheduling and the
// independent schedule validator.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace aeos {

/// Malformed input or broken internal invariant. Infeasibility is never an Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Absolute tolerance for time constraints, seconds.
inline constexpr double kTimeTolerance = 1e-6;
/// Relative tolerance for resource constraints.
inline constexpr double kResourceTolerance = 1e-9;

struct Target {
  int id = 0;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double profit = 1.0;          // omega_i
  double obs_duration_s = 1.0;  // ot_i

  bool operator==(const Target&) const = default;
};

struct OrbitResource {
  int id = 0;
  double memory_capacity_mb = 0.0;         // M_k
  double energy_capacity_j = 0.0;          // E_k
  double memory_rate_mb_per_s = 0.0;       // m_k
  double imaging_energy_j_per_s = 0.0;     // e_k
  double maneuver_energy_j_per_deg = 0.0;  // e'_k
  double pitch_rate_deg_per_s = 3.0;
  double roll_rate_deg_per_s = 3.0;
  double max_pitch_deg = 30.0;
  double max_roll_deg = 30.0;

  bool operator==(const OrbitResource&) const = default;
};

struct VisibleWindow {
  int target_id = 0;
  int orbit_id = 0;
  double vts_s = 0.0;
  double vte_s = 0.0;
  double success_prob = 1.0;  // p_ik
  double roll_angle_deg = 0.0;
  bool available = true;      // b_ik

  double length() const { return vte_s - vts_s; }
  bool operator==(const VisibleWindow&) const = default;
};

struct ObservationAssignment {
  int target_id = 0;
  int orbit_id = 0;
  double tp = 0.5;
  double ots_s = 0.0;
  double ote_s = 0.0;
  double pitch_deg = 0.0;
  double roll_deg = 0.0;

  bool operator==(const ObservationAssignment&) const = default;
};

/// Per-orbit observation sequences (sorted by start time) plus resource ledgers.
struct Schedule {
  std::map<int, std::vector<ObservationAssignment>> assignments_by_orbit;
  std::map<int, double> memory_used_mb;
  std::map<int, double> energy_used_j;

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  /// (orbit id, position in that orbit's sequence) of an assigned target.
  std::optional<std::pair<int, std::size_t>> locate(int target_id) const;
  bool contains(int target_id) const { return locate(target_id).has_value(); }
  /// Assigned target ids in ascending order.
  std::vector<int> assigned_targets() const;
  std::span<const ObservationAssignment> sequence(int orbit_id) const;

  bool operator==(const Schedule&) const = default;
};

/// Immutable problem input with id lookups.
class Instance {
 public:
  Instance() = default;
  /// Throws Error on duplicate ids, dangling window references, duplicate
  /// (target, orbit) windows or windows shorter than the target's duration.
  Instance(std::vector<Target> targets, std::vector<OrbitResource> orbits,
           std::vector<VisibleWindow> windows, double horizon_s, std::uint64_t rng_seed);

  const std::vector<Target>& targets() const { return targets_; }
  const std::vector<OrbitResource>& orbits() const { return orbits_; }
  const std::vector<VisibleWindow>& windows() const { return windows_; }
  double horizon_s() const { return horizon_s_; }
  std::uint64_t rng_seed() const { return rng_seed_; }

  bool has_target(int id) const { return target_pos_.count(id) != 0; }
  bool has_orbit(int id) const { return orbit_pos_.count(id) != 0; }
  const Target& target(int id) const;
  const OrbitResource& orbit(int id) const;
  const VisibleWindow* find_window(int target_id, int orbit_id) const;
  const VisibleWindow& window(int target_id, int orbit_id) const;
  std::size_t window_index(int target_id, int orbit_id) const;
  /// Window indices of a target, ascending orbit id.
  std::span<const std::size_t> windows_of_target(int target_id) const;
  /// Window indices on an orbit, ascending start time.
  std::span<const std::size_t> windows_of_orbit(int orbit_id) const;
  /// Largest target profit, 0 for an empty instance.
  double max_profit() const { return max_profit_; }

  /// Copy with the orbit records replaced (same ids required).
  Instance with_orbits(std::vector<OrbitResource> orbits) const;

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.targets_ == b.targets_ && a.orbits_ == b.orbits_ && a.windows_ == b.windows_ &&
           a.horizon_s_ == b.horizon_s_ && a.rng_seed_ == b.rng_seed_;
  }

 private:
  std::vector<Target> targets_;
  std::vector<OrbitResource> orbits_;
  std::vector<VisibleWindow> windows_;
  double horizon_s_ = 0.0;
  std::uint64_t rng_seed_ = 0;

  std::map<int, std::size_t> target_pos_;
  std::map<int, std::size_t> orbit_pos_;
  std::map<std::pair<int, int>, std::size_t> window_pos_;
  std::map<int, std::vector<std::size_t>> by_target_;
  std::map<int, std::vector<std::size_t>> by_orbit_;
  double max_profit_ = 0.0;
};

enum class ViolationKind {
  DuplicateTarget,    // target observed more than once
  UnavailableWindow,  // window with b = 0
  OrbitMismatch,
  OutsideWindow,
  StartTimeMismatch,  // ots/ote disagree with tp
  AttitudeMismatch,
  Ordering,
  Memory,
  Energy,
  Transition,         // gap shorter than slew plus settle
  LedgerMismatch,
};

std::string to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind{};
  int orbit_id = 0;
  int target_id = 0;
  std::optional<int> other_target_id;
  double magnitude = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(ViolationKind kind) const;
  std::string to_text() const;
};

/// Checks assignment uniqueness, window bounds, resources and transition gaps,
/// plus ledger and start-time consistency.
/// Throws Error when the schedule references an unknown target or orbit id.
ValidationReport validate_schedule(const Instance& instance, const Schedule& schedule);

/// Sum of profits of assigned targets.
double schedule_profit_deterministic(const Instance& instance, const Schedule& schedule);

/// From-scratch resource use of one orbit sequence.
double sequence_memory(const Instance& instance, int orbit_id,
                       std::span<const ObservationAssignment> sequence);
double sequence_energy(const Instance& instance, int orbit_id,
                       std::span<const ObservationAssignment> sequence);

/// True when `used` fits within `capacity` under kResourceTolerance.
bool within_capacity(double used, double capacity);

}  // namespace aeos
