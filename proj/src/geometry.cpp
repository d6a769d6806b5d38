#include "aeos/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace aeos {

double midpoint_fraction(const VisibleWindow& window, double ots_s, double ot_s) {
  const double length = window.length();
  if (length <= 0.0) return 0.5;
  return ((ots_s + 0.5 * ot_s) - window.vts_s) / length;
}

AttitudePair attitude_at(const VisibleWindow& window, const OrbitResource& orbit, double ots_s,
                         double ot_s) {
  if (ots_s < window.vts_s - kTimeTolerance || ots_s + ot_s > window.vte_s + kTimeTolerance) {
    throw Error("observation [" + std::to_string(ots_s) + ", " + std::to_string(ots_s + ot_s) +
                "] leaves window of target " + std::to_string(window.target_id) + " on orbit " +
                std::to_string(window.orbit_id));
  }
  const double m = midpoint_fraction(window, ots_s, ot_s);
  return {orbit.max_pitch_deg * (1.0 - 2.0 * m), window.roll_angle_deg};
}

double stabilization_time(double total_deg) {
  if (total_deg <= 15.0) return 5.0;
  if (total_deg <= 40.0) return 10.0;
  return 15.0;
}

double transition_time(const AttitudePair& from, const AttitudePair& to,
                       const OrbitResource& orbit) {
  const double dpitch = std::abs(from.pitch_deg - to.pitch_deg);
  const double droll = std::abs(from.roll_deg - to.roll_deg);
  const double slew =
      std::max(dpitch / orbit.pitch_rate_deg_per_s, droll / orbit.roll_rate_deg_per_s);
  return slew + stabilization_time(dpitch + droll);
}

double maneuver_energy(const AttitudePair& from, const AttitudePair& to,
                       const OrbitResource& orbit) {
  return (std::abs(from.pitch_deg - to.pitch_deg) + std::abs(from.roll_deg - to.roll_deg)) *
         orbit.maneuver_energy_j_per_deg;
}

double maneuver_energy(const std::optional<AttitudePair>& from,
                       const std::optional<AttitudePair>& to, const OrbitResource& orbit) {
  if (!from || !to) return 0.0;
  return maneuver_energy(*from, *to, orbit);
}

double transition_time_between(const ObservationAssignment& a, const ObservationAssignment& b,
                               const Instance& instance) {
  if (a.orbit_id != b.orbit_id) {
    throw Error("transition between assignments on different orbits");
  }
  const OrbitResource& orbit = instance.orbit(a.orbit_id);
  const AttitudePair from = attitude_at(instance.window(a.target_id, a.orbit_id), orbit, a.ots_s,
                                        instance.target(a.target_id).obs_duration_s);
  const AttitudePair to = attitude_at(instance.window(b.target_id, b.orbit_id), orbit, b.ots_s,
                                      instance.target(b.target_id).obs_duration_s);
  return transition_time(from, to, orbit);
}

ObservationAssignment observe_at(const VisibleWindow& window, const Target& target,
                                 const OrbitResource& orbit, double tp) {
  ObservationAssignment a;
  a.target_id = target.id;
  a.orbit_id = orbit.id;
  a.tp = tp;
  a.ots_s = start_time_at(window, target.obs_duration_s, tp);
  a.ote_s = a.ots_s + target.obs_duration_s;
  const AttitudePair att = attitude_at(window, orbit, a.ots_s, target.obs_duration_s);
  a.pitch_deg = att.pitch_deg;
  a.roll_deg = att.roll_deg;
  return a;
}

}  // namespace aeos
