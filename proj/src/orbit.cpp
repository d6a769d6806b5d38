#include "aeos/orbit.hpp"

#include <cstdio>

#include "aeos/model.hpp"

namespace aeos::orbit {

double OrbitalElements::mean_motion_rad_per_s() const {
  return std::sqrt(kMuKm3PerS2 / (semi_major_axis_km * semi_major_axis_km * semi_major_axis_km));
}

double OrbitalElements::period_s() const {
  return 2.0 * std::numbers::pi / mean_motion_rad_per_s();
}

void OrbitalElements::validate() const {
  if (!(eccentricity >= 0.0 && eccentricity < 1.0)) throw Error("eccentricity outside [0, 1)");
  if (!(semi_major_axis_km > kEarthRadiusKm)) throw Error("semi-major axis below Earth radius");
}

double solve_kepler(double mean_anomaly_rad, double eccentricity) {
  const double two_pi = 2.0 * std::numbers::pi;
  double m = std::fmod(mean_anomaly_rad, two_pi);
  if (m < 0.0) m += two_pi;
  double e_anom = eccentricity < 0.8 ? m : std::numbers::pi;
  for (int iter = 0; iter < 64; ++iter) {
    const double f = e_anom - eccentricity * std::sin(e_anom) - m;
    const double step = f / (1.0 - eccentricity * std::cos(e_anom));
    e_anom -= step;
    if (std::abs(step) < kKeplerTolerance) return e_anom;
  }
  throw Error("Kepler equation did not converge");
}

StateVector propagate_inertial(const OrbitalElements& el, double t_s) {
  const double n = el.mean_motion_rad_per_s();
  const double e = el.eccentricity;
  const double a = el.semi_major_axis_km;
  const double big_e = solve_kepler(deg2rad(el.mean_anomaly_deg) + n * t_s, e);
  const double cos_e = std::cos(big_e);
  const double sin_e = std::sin(big_e);
  const double root = std::sqrt(1.0 - e * e);

  // Perifocal frame.
  const Eigen::Vector3d r_pf(a * (cos_e - e), a * root * sin_e, 0.0);
  const double edot = n / (1.0 - e * cos_e);
  const Eigen::Vector3d v_pf(-a * sin_e * edot, a * root * cos_e * edot, 0.0);

  const Eigen::Matrix3d rot =
      (Eigen::AngleAxisd(deg2rad(el.raan_deg), Eigen::Vector3d::UnitZ()) *
       Eigen::AngleAxisd(deg2rad(el.inclination_deg), Eigen::Vector3d::UnitX()) *
       Eigen::AngleAxisd(deg2rad(el.arg_perigee_deg), Eigen::Vector3d::UnitZ()))
          .toRotationMatrix();
  return {rot * r_pf, rot * v_pf};
}

Eigen::Vector3d propagate(const OrbitalElements& elements, double t_s, double earth_angle0_rad) {
  const StateVector s = propagate_inertial(elements, t_s);
  return inertial_to_fixed(earth_angle0_rad + kEarthRotationRadPerS * t_s) * s.position_km;
}

double julian_date(int year, int month, int day, int hour, int minute, double second) {
  if (month <= 2) {
    year -= 1;
    month += 12;
  }
  const int a = year / 100;
  const int b = 2 - a + a / 4;
  const double day_frac = (hour + (minute + second / 60.0) / 60.0) / 24.0;
  return std::floor(365.25 * (year + 4716)) + std::floor(30.6001 * (month + 1)) + day + b -
         1524.5 + day_frac;
}

double julian_date(const std::string& iso_utc) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0;
  double s = 0.0;
  if (std::sscanf(iso_utc.c_str(), "%d-%d-%dT%d:%d:%lf", &y, &mo, &d, &h, &mi, &s) != 6 ||
      mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0.0 ||
      s >= 61.0) {
    throw Error("malformed UTC timestamp '" + iso_utc + "'");
  }
  return julian_date(y, mo, d, h, mi, s);
}

double gmst_rad(double jd) {
  const double deg = 280.46061837 + 360.98564736629 * (jd - 2451545.0);
  double wrapped = std::fmod(deg, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  return deg2rad(wrapped);
}

Eigen::Vector3d sun_direction(double jd) {
  const double n = jd - 2451545.0;
  const double mean_long = 280.460 + 0.9856474 * n;
  const double g = deg2rad(357.528 + 0.9856003 * n);
  const double lambda = deg2rad(mean_long + 1.915 * std::sin(g) + 0.020 * std::sin(2.0 * g));
  const double obliquity = deg2rad(23.439 - 0.0000004 * n);
  return Eigen::Vector3d(std::cos(lambda), std::cos(obliquity) * std::sin(lambda),
                         std::sin(obliquity) * std::sin(lambda));
}

OrbitalFrame orbital_frame(const StateVector& state) {
  OrbitalFrame f;
  const Eigen::Vector3d r_hat = state.position_km.normalized();
  f.cross = state.position_km.cross(state.velocity_km_per_s).normalized();
  f.along = f.cross.cross(r_hat);
  f.nadir = -r_hat;
  return f;
}

}  // namespace aeos::orbit
