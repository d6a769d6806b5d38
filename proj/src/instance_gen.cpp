#include "aeos/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "aeos/random.hpp"

namespace aeos {

GeoBox region_china(int count) { return {"china", 3.0, 53.0, 74.0, 133.0, count}; }
GeoBox region_australia(int count) { return {"australia", -43.0, -10.0, 112.0, 154.0, count}; }
GeoBox region_america(int count) { return {"america", 24.0, 49.0, -125.0, -73.0, count}; }

void GenSpec::validate() const {
  if (n_world < 0) throw Error("n_world must be non-negative");
  for (const GeoBox& r : regions) {
    if (r.count < 0) throw Error("region '" + r.name + "' has a negative count");
    if (r.lat_min_deg < -90.0 || r.lat_max_deg > 90.0 || r.lat_min_deg > r.lat_max_deg) {
      throw Error("region '" + r.name + "' latitude bounds invalid");
    }
    if (r.lon_min_deg > r.lon_max_deg) throw Error("region '" + r.name + "' longitude bounds invalid");
  }
  if (!(step_s > 0.0)) throw Error("propagation step must be positive");
  if (!(horizon_s >= 0.0)) throw Error("horizon must be non-negative");
  if (profit_min > profit_max || profit_min <= 0.0) throw Error("profit range invalid");
  if (obs_duration_min_s > obs_duration_max_s || obs_duration_min_s <= 0.0) {
    throw Error("observation duration range invalid");
  }
  if (prob_min < 0.0 || prob_max > 1.0 || prob_min > prob_max) {
    throw Error("success probability range invalid");
  }
  if (mode == GenMode::Synthetic) {
    if (synthetic.n_orbits < 0) throw Error("synthetic orbit count must be non-negative");
    if (synthetic.length_min_s > synthetic.length_max_s || synthetic.length_min_s < 0.0) {
      throw Error("synthetic window length range invalid");
    }
  }
  for (const auto& el : satellites) el.validate();
}

std::vector<orbit::OrbitalElements> benchmark_constellation() {
  return {
      {6903.673, 0.001655, 97.5839, 97.8446, 50.5083, 2.0288},
      {6903.730, 0.001558, 97.5310, 95.1761, 52.2620, 31.4501},
      {6909.065, 0.000997, 97.5840, 93.1999, 254.4613, 155.2256},
      {6898.602, 0.001460, 97.5825, 92.3563, 276.7332, 140.1878},
  };
}

OrbitResource benchmark_resource() {
  OrbitResource r;
  r.memory_capacity_mb = 7500.0;
  r.energy_capacity_j = 80000.0;
  r.memory_rate_mb_per_s = 100.0;
  r.imaging_energy_j_per_s = 500.0;
  r.maneuver_energy_j_per_deg = 1000.0;
  r.pitch_rate_deg_per_s = 3.0;
  r.roll_rate_deg_per_s = 3.0;
  r.max_pitch_deg = 30.0;
  r.max_roll_deg = 30.0;
  return r;
}

GenSpec benchmark_preset(int n_targets) {
  GenSpec spec;
  spec.n_world = 500;
  spec.satellites = benchmark_constellation();
  spec.resource = benchmark_resource();
  switch (n_targets) {
    case 950: spec.regions.insert(spec.regions.begin(), region_america()); [[fallthrough]];
    case 800: spec.regions.insert(spec.regions.begin(), region_australia()); [[fallthrough]];
    case 650: spec.regions.insert(spec.regions.begin(), region_china()); [[fallthrough]];
    case 500: break;
    default: throw Error("no preset for " + std::to_string(n_targets) + " targets");
  }
  return spec;
}

GenSpec desk_preset(int n_targets) {
  GenSpec spec;
  spec.mode = GenMode::Synthetic;
  spec.n_world = n_targets;
  spec.horizon_s = 3000.0;
  spec.resource = benchmark_resource();
  spec.synthetic = SyntheticWindows{};
  return spec;
}

std::vector<Target> generate_targets(const GenSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(derive_seed(seed, 1));
  std::vector<Target> out;
  const auto pmin = static_cast<std::int64_t>(std::ceil(spec.profit_min));
  const auto pmax = static_cast<std::int64_t>(std::floor(spec.profit_max));
  auto draw = [&](double lat_lo, double lat_hi, double lon_lo, double lon_hi) {
    Target t;
    t.id = static_cast<int>(out.size()) + 1;
    t.latitude_deg = uniform_real(rng, lat_lo, lat_hi);
    t.longitude_deg = uniform_real(rng, lon_lo, lon_hi);
    t.profit = pmin <= pmax ? static_cast<double>(uniform_int(rng, pmin, pmax))
                            : uniform_real(rng, spec.profit_min, spec.profit_max);
    t.obs_duration_s = uniform_real(rng, spec.obs_duration_min_s, spec.obs_duration_max_s);
    out.push_back(t);
  };
  for (int i = 0; i < spec.n_world; ++i) draw(-60.0, 60.0, -180.0, 180.0);
  for (const GeoBox& r : spec.regions) {
    for (int i = 0; i < r.count; ++i) draw(r.lat_min_deg, r.lat_max_deg, r.lon_min_deg, r.lon_max_deg);
  }
  return out;
}

namespace {

// Satellite geometry sampled on the scan grid, Earth-fixed frame.
struct SatelliteTrack {
  std::vector<Eigen::Vector3d> position;
  std::vector<orbit::OrbitalFrame> frame;
  std::vector<Eigen::Vector3d> sun;
  std::vector<double> ascending_nodes;  // inertial z crossings, seconds
};

struct Pass {
  double vts = 0.0;
  double vte = 0.0;
  double closest = 0.0;
  double roll = 0.0;
};

class VisibilityModel {
 public:
  VisibilityModel(const orbit::OrbitalElements& el, const OrbitResource& resource, double jd0)
      : el_(el), resource_(resource), jd0_(jd0), theta0_(orbit::gmst_rad(jd0)) {
    // Conservative bound on the Earth central angle between target and
    // sub-satellite point, used to skip the full look-angle evaluation.
    const double tp = std::tan(orbit::deg2rad(resource.max_pitch_deg));
    const double tr = std::tan(orbit::deg2rad(resource.max_roll_deg));
    const double off_nadir = std::atan(std::sqrt(tp * tp + tr * tr));
    const double r_max = el.semi_major_axis_km * (1.0 + el.eccentricity);
    const double s = std::sin(off_nadir) * r_max / orbit::kEarthRadiusKm;
    const double central = s >= 1.0 ? std::acos(orbit::kEarthRadiusKm / r_max)
                                    : std::asin(s) - off_nadir;
    cos_gate_ = std::cos(std::min(std::numbers::pi, central + orbit::deg2rad(1.0)));
  }

  struct Sample {
    Eigen::Vector3d position;
    orbit::OrbitalFrame frame;
    Eigen::Vector3d sun;
    double inertial_z = 0.0;
  };

  Sample at(double t) const {
    const orbit::StateVector s = orbit::propagate_inertial(el_, t);
    const orbit::OrbitalFrame f = orbit::orbital_frame(s);
    const Eigen::Matrix3d rot =
        orbit::inertial_to_fixed(theta0_ + orbit::kEarthRotationRadPerS * t);
    Sample out;
    out.position = rot * s.position_km;
    out.frame.along = rot * f.along;
    out.frame.cross = rot * f.cross;
    out.frame.nadir = rot * f.nadir;
    out.sun = rot * orbit::sun_direction(jd0_ + t / 86400.0);
    out.inertial_z = s.position_km.z();
    return out;
  }

  bool visible(const Eigen::Vector3d& pos, const orbit::OrbitalFrame& frame,
               const Eigen::Vector3d& sun, const Eigen::Vector3d& target,
               const Eigen::Vector3d& target_unit) const {
    if (pos.normalized().dot(target_unit) < cos_gate_) return false;
    if (target_unit.dot(sun) < 0.0) return false;
    const orbit::LookAngles la = orbit::look_angles<double>(pos, frame, target);
    return la.in_front && std::abs(la.pitch_deg) <= resource_.max_pitch_deg &&
           std::abs(la.roll_deg) <= resource_.max_roll_deg;
  }

  bool visible_at(double t, const Eigen::Vector3d& target, const Eigen::Vector3d& unit) const {
    const Sample s = at(t);
    return visible(s.position, s.frame, s.sun, target, unit);
  }

  orbit::LookAngles angles_at(double t, const Eigen::Vector3d& target) const {
    const Sample s = at(t);
    return orbit::look_angles<double>(s.position, s.frame, target);
  }

  double cos_gate() const { return cos_gate_; }

 private:
  orbit::OrbitalElements el_;
  OrbitResource resource_;
  double jd0_;
  double theta0_;
  double cos_gate_ = -1.0;
};

constexpr double kEndpointResolution = 0.1;

// Boundary between an invisible time `out` and a visible time `in`, returned
// on the visible side to within kEndpointResolution.
double refine_edge(const VisibilityModel& model, double out, double in,
                   const Eigen::Vector3d& target, const Eigen::Vector3d& unit) {
  while (std::abs(in - out) > kEndpointResolution) {
    const double mid = 0.5 * (in + out);
    if (model.visible_at(mid, target, unit)) {
      in = mid;
    } else {
      out = mid;
    }
  }
  return in;
}

std::vector<Pass> scan_passes(const VisibilityModel& model, const SatelliteTrack& track,
                              const std::vector<double>& times, const Eigen::Vector3d& target) {
  const Eigen::Vector3d unit = target.normalized();
  std::vector<Pass> passes;
  const std::size_t n = times.size();
  std::size_t j = 0;
  while (j < n) {
    if (!model.visible(track.position[j], track.frame[j], track.sun[j], target, unit)) {
      ++j;
      continue;
    }
    const std::size_t first = j;
    while (j + 1 < n && model.visible(track.position[j + 1], track.frame[j + 1], track.sun[j + 1],
                                      target, unit)) {
      ++j;
    }
    const std::size_t last = j;
    ++j;

    Pass p;
    p.vts = first == 0 ? times[0] : refine_edge(model, times[first - 1], times[first], target, unit);
    p.vte = last + 1 == n ? times[last] : refine_edge(model, times[last + 1], times[last], target, unit);

    // Closest approach: zero crossing of pitch, else the smallest |pitch| sample.
    std::size_t best = first;
    double best_abs = 1e300;
    for (std::size_t k = first; k <= last; ++k) {
      const double a = std::abs(orbit::look_angles<double>(track.position[k], track.frame[k], target).pitch_deg);
      if (a < best_abs) {
        best_abs = a;
        best = k;
      }
    }
    double t_ca = times[best];
    auto pitch_at = [&](double t) { return model.angles_at(t, target).pitch_deg; };
    for (std::size_t k : {best > 0 ? best - 1 : best, best}) {
      if (k + 1 >= n) continue;
      double lo = times[k];
      double hi = times[k + 1];
      double plo = pitch_at(lo);
      double phi = pitch_at(hi);
      if ((plo > 0.0) != (phi > 0.0)) {
        while (hi - lo > 1e-3) {
          const double mid = 0.5 * (lo + hi);
          const double pm = pitch_at(mid);
          if ((pm > 0.0) == (plo > 0.0)) {
            lo = mid;
            plo = pm;
          } else {
            hi = mid;
          }
        }
        t_ca = std::clamp(0.5 * (lo + hi), p.vts, p.vte);
        break;
      }
    }
    p.closest = t_ca;
    p.roll = model.angles_at(t_ca, target).roll_deg;
    passes.push_back(p);
  }
  return passes;
}

}  // namespace

WindowSet compute_windows(const std::vector<Target>& targets, const GenSpec& spec,
                          std::uint64_t seed) {
  spec.validate();
  if (spec.mode != GenMode::Geometric) throw Error("compute_windows requires geometric mode");
  const double jd0 = orbit::julian_date(spec.epoch_utc);
  const auto n_samples = static_cast<std::size_t>(std::floor(spec.horizon_s / spec.step_s)) + 1;
  std::vector<double> times(n_samples);
  for (std::size_t j = 0; j < n_samples; ++j) times[j] = static_cast<double>(j) * spec.step_s;

  std::vector<Eigen::Vector3d> target_pos(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    target_pos[i] = orbit::surface_point(targets[i].latitude_deg, targets[i].longitude_deg);
  }

  WindowSet out;
  // (target id, orbit id) -> chosen pass
  std::map<std::pair<int, int>, Pass> chosen;
  int next_orbit_id = 1;

  for (const orbit::OrbitalElements& el : spec.satellites) {
    const VisibilityModel model(el, spec.resource, jd0);
    SatelliteTrack track;
    track.position.resize(n_samples);
    track.frame.resize(n_samples);
    track.sun.resize(n_samples);
    double prev_z = 0.0;
    for (std::size_t j = 0; j < n_samples; ++j) {
      const auto s = model.at(times[j]);
      track.position[j] = s.position;
      track.frame[j] = s.frame;
      track.sun[j] = s.sun;
      if (j > 0 && prev_z < 0.0 && s.inertial_z >= 0.0) track.ascending_nodes.push_back(times[j]);
      prev_z = s.inertial_z;
    }

    // Orbit resources for this satellite.
    const int first_id = next_orbit_id;
    const std::size_t n_resources = spec.granularity == ResourceGranularity::Satellite
                                        ? 1
                                        : track.ascending_nodes.size() + 1;
    for (std::size_t r = 0; r < n_resources; ++r) {
      OrbitResource res = spec.resource;
      res.id = next_orbit_id++;
      out.orbits.push_back(res);
    }
    auto resource_for = [&](double t) {
      if (spec.granularity == ResourceGranularity::Satellite) return first_id;
      const auto rev = std::upper_bound(track.ascending_nodes.begin(), track.ascending_nodes.end(), t) -
                       track.ascending_nodes.begin();
      return first_id + static_cast<int>(rev);
    };

    // Scan targets; each worker fills its own slots so output is order-independent.
    std::vector<std::vector<Pass>> per_target(targets.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                             static_cast<unsigned>(targets.size())));
    auto work = [&](unsigned w) {
      for (std::size_t i = w; i < targets.size(); i += workers) {
        per_target[i] = scan_passes(model, track, times, target_pos[i]);
      }
    };
    if (workers <= 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < targets.size(); ++i) {
      for (const Pass& p : per_target[i]) {
        if (p.vte - p.vts < targets[i].obs_duration_s) continue;
        const auto key = std::pair{targets[i].id, resource_for(p.closest)};
        auto it = chosen.find(key);
        if (it == chosen.end() || p.vte - p.vts > it->second.vte - it->second.vts) {
          chosen[key] = p;
        }
      }
    }
  }

  Rng rng(derive_seed(seed, 2));
  for (const auto& [key, p] : chosen) {
    VisibleWindow w;
    w.target_id = key.first;
    w.orbit_id = key.second;
    w.vts_s = p.vts;
    w.vte_s = p.vte;
    w.roll_angle_deg = p.roll;
    w.success_prob = uniform_real(rng, spec.prob_min, spec.prob_max);
    w.available = true;
    out.windows.push_back(w);
  }
  return out;
}

WindowSet synthetic_windows(const std::vector<Target>& targets, const GenSpec& spec,
                            std::uint64_t seed) {
  spec.validate();
  WindowSet out;
  for (int k = 0; k < spec.synthetic.n_orbits; ++k) {
    OrbitResource r = spec.resource;
    r.id = k + 1;
    out.orbits.push_back(r);
  }
  Rng rng(derive_seed(seed, 3));
  for (const Target& t : targets) {
    for (const OrbitResource& o : out.orbits) {
      if (!bernoulli(rng, spec.synthetic.visibility_prob)) continue;
      const double lo = std::max(spec.synthetic.length_min_s, t.obs_duration_s);
      const double hi = std::max(spec.synthetic.length_max_s, lo);
      const double len = uniform_real(rng, lo, hi);
      VisibleWindow w;
      w.target_id = t.id;
      w.orbit_id = o.id;
      w.vts_s = uniform_real(rng, 0.0, std::max(0.0, spec.horizon_s - len));
      w.vte_s = w.vts_s + len;
      w.roll_angle_deg = uniform_real(rng, -o.max_roll_deg, o.max_roll_deg);
      w.success_prob = uniform_real(rng, spec.prob_min, spec.prob_max);
      out.windows.push_back(w);
    }
  }
  return out;
}

Instance generate_instance(const GenSpec& spec, std::uint64_t seed) {
  std::vector<Target> targets = generate_targets(spec, seed);
  WindowSet ws = spec.mode == GenMode::Geometric ? compute_windows(targets, spec, seed)
                                                 : synthetic_windows(targets, spec, seed);
  return Instance(std::move(targets), std::move(ws.orbits), std::move(ws.windows), spec.horizon_s,
                  seed);
}

}  // namespace aeos
