#pragma once

// Attitude model, attitude transition time with stabilization settle, and
// maneuver energy. Angles in degrees, rates in deg/s, times in seconds.

#include <optional>

#include "aeos/model.hpp"

namespace aeos {

struct AttitudePair {
  double pitch_deg = 0.0;
  double roll_deg = 0.0;

  bool operator==(const AttitudePair&) const = default;
};

/// Observation start time for a normalized start position tp in [0, 1].
inline double start_time_at(const VisibleWindow& window, double obs_duration_s, double tp) {
  return tp * (window.vte_s - obs_duration_s - window.vts_s) + window.vts_s;
}

/// Fraction of the window elapsed at the observation midpoint.
double midpoint_fraction(const VisibleWindow& window, double ots_s, double ot_s);

/// Attitude while observing [ots, ots + ot] inside `window`. Roll is constant
/// over the window; pitch runs linearly from +max_pitch at the window start to
/// -max_pitch at its end, evaluated at the observation midpoint.
/// Throws Error if the observation leaves the window.
AttitudePair attitude_at(const VisibleWindow& window, const OrbitResource& orbit, double ots_s,
                         double ot_s);

/// Settle time after a slew of total angle `total_deg` = |dpitch| + |droll|.
/// 5 s up to 15 deg, 10 s up to 40 deg, 15 s beyond.
double stabilization_time(double total_deg);

double transition_time(const AttitudePair& from, const AttitudePair& to,
                       const OrbitResource& orbit);

double maneuver_energy(const AttitudePair& from, const AttitudePair& to,
                       const OrbitResource& orbit);

/// Sequence boundaries (dummy targets) are std::nullopt and cost nothing.
double maneuver_energy(const std::optional<AttitudePair>& from,
                       const std::optional<AttitudePair>& to, const OrbitResource& orbit);

double transition_time_between(const ObservationAssignment& a, const ObservationAssignment& b,
                               const Instance& instance);

/// Assignment record for observing `target` through `window` at position tp.
ObservationAssignment observe_at(const VisibleWindow& window, const Target& target,
                                 const OrbitResource& orbit, double tp);

inline AttitudePair attitude_of(const ObservationAssignment& a) {
  return {a.pitch_deg, a.roll_deg};
}

}  // namespace aeos
