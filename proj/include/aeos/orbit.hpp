#pragma once

// Two-body orbit propagation, Earth rotation, low-precision solar direction
// and satellite look angles. Spherical Earth, no perturbations.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <numbers>
#include <string>

namespace aeos::orbit {

inline constexpr double kEarthRadiusKm = 6378.137;
inline constexpr double kMuKm3PerS2 = 398600.4418;
inline constexpr double kEarthRotationRadPerS = 7.2921150e-5;
inline constexpr double kKeplerTolerance = 1e-10;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) {
  return deg * std::numbers::pi_v<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad2deg(Scalar rad) {
  return rad * Scalar(180) / std::numbers::pi_v<Scalar>;
}

/// Classical elements at epoch.
struct OrbitalElements {
  double semi_major_axis_km = 7000.0;
  double eccentricity = 0.0;
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double arg_perigee_deg = 0.0;
  double mean_anomaly_deg = 0.0;

  double mean_motion_rad_per_s() const;
  double period_s() const;
  /// Throws aeos::Error when e is outside [0, 1) or a is below the Earth radius.
  void validate() const;

  bool operator==(const OrbitalElements&) const = default;
};

struct StateVector {
  Eigen::Vector3d position_km = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity_km_per_s = Eigen::Vector3d::Zero();
};

/// Eccentric anomaly for mean anomaly M (Newton). Throws aeos::Error if it
/// does not converge to kKeplerTolerance.
double solve_kepler(double mean_anomaly_rad, double eccentricity);

/// Inertial (equatorial) state t_s seconds after epoch.
StateVector propagate_inertial(const OrbitalElements& elements, double t_s);

/// Earth-fixed position t_s seconds after epoch; `earth_angle0_rad` is the
/// Greenwich sidereal angle at epoch.
Eigen::Vector3d propagate(const OrbitalElements& elements, double t_s,
                          double earth_angle0_rad = 0.0);

/// Rotation taking inertial vectors into the Earth-fixed frame at angle theta.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> inertial_to_fixed(Scalar theta) {
  return Eigen::AngleAxis<Scalar>(-theta, Vector3<Scalar>::UnitZ()).toRotationMatrix();
}

/// Point on the spherical Earth surface in the Earth-fixed frame, km.
template <typename Scalar>
Vector3<Scalar> surface_point(Scalar latitude_deg, Scalar longitude_deg,
                              Scalar radius_km = Scalar(kEarthRadiusKm)) {
  const Scalar lat = deg2rad(latitude_deg);
  const Scalar lon = deg2rad(longitude_deg);
  return radius_km * Vector3<Scalar>(std::cos(lat) * std::cos(lon),
                                     std::cos(lat) * std::sin(lon), std::sin(lat));
}

/// Julian date from a calendar UTC time.
double julian_date(int year, int month, int day, int hour, int minute, double second);
/// Parses "YYYY-MM-DDThh:mm:ss[Z]". Throws aeos::Error on malformed input.
double julian_date(const std::string& iso_utc);
/// Greenwich mean sidereal angle, radians in [0, 2pi).
double gmst_rad(double jd);
/// Unit vector to the Sun in the inertial frame (low-precision almanac model).
Eigen::Vector3d sun_direction(double jd);

/// Local orbital frame: along-track, cross-track (orbit normal), nadir.
struct OrbitalFrame {
  Eigen::Vector3d along = Eigen::Vector3d::UnitX();
  Eigen::Vector3d cross = Eigen::Vector3d::UnitY();
  Eigen::Vector3d nadir = -Eigen::Vector3d::UnitZ();
};

OrbitalFrame orbital_frame(const StateVector& state);

struct LookAngles {
  double pitch_deg = 0.0;  // positive when the target is ahead
  double roll_deg = 0.0;
  bool in_front = false;   // target below the satellite (positive nadir component)
};

/// Pitch/roll decomposition of the line of sight from `satellite_km` to
/// `target_km` against nadir. All vectors in one common frame.
template <typename Scalar>
LookAngles look_angles(const Vector3<Scalar>& satellite_km, const OrbitalFrame& frame,
                       const Vector3<Scalar>& target_km) {
  const Vector3<Scalar> los = target_km - satellite_km;
  const Scalar down = los.dot(frame.nadir.cast<Scalar>());
  LookAngles out;
  out.in_front = down > Scalar(0);
  out.pitch_deg = rad2deg(std::atan2(los.dot(frame.along.cast<Scalar>()), down));
  out.roll_deg = rad2deg(std::atan2(los.dot(frame.cross.cast<Scalar>()), down));
  return out;
}

}  // namespace aeos::orbit
