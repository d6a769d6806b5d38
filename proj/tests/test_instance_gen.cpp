#include "doctest.h"

#include <cmath>
#include <set>

#include "aeos/instance_gen.hpp"
#include "aeos/orbit.hpp"

using namespace aeos;

TEST_CASE("preset target counts") {
  CHECK(generate_targets(benchmark_preset(500), 1).size() == 500);
  CHECK(generate_targets(benchmark_preset(650), 1).size() == 650);
  CHECK(generate_targets(benchmark_preset(800), 1).size() == 800);
  CHECK(generate_targets(benchmark_preset(950), 1).size() == 950);
  CHECK_THROWS_AS(benchmark_preset(600), Error);
  GenSpec none = benchmark_preset(500);
  none.n_world = 0;
  CHECK(generate_targets(none, 1).empty());
}

TEST_CASE("targets respect their boxes and draw ranges") {
  const GenSpec spec = benchmark_preset(650);
  const auto targets = generate_targets(spec, 9);
  const GeoBox china = region_china();
  std::set<int> ids;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const Target& t = targets[i];
    ids.insert(t.id);
    CHECK(t.profit == std::round(t.profit));
    CHECK(t.profit >= 1.0);
    CHECK(t.profit <= 10.0);
    CHECK(t.obs_duration_s >= 15.0);
    CHECK(t.obs_duration_s <= 30.0);
    if (i < 500) {
      CHECK(std::abs(t.latitude_deg) <= 60.0);
    } else {
      CHECK(t.latitude_deg >= china.lat_min_deg);
      CHECK(t.latitude_deg <= china.lat_max_deg);
      CHECK(t.longitude_deg >= china.lon_min_deg);
      CHECK(t.longitude_deg <= china.lon_max_deg);
    }
  }
  CHECK(ids.size() == targets.size());
}

TEST_CASE("generation is seeded") {
  const GenSpec spec = desk_preset(60);
  CHECK(generate_instance(spec, 4) == generate_instance(spec, 4));
  CHECK_FALSE(generate_instance(spec, 4) == generate_instance(spec, 5));
}

TEST_CASE("synthetic windows fit horizon and durations") {
  GenSpec spec = desk_preset(80);
  spec.synthetic.n_orbits = 3;
  const Instance inst = generate_instance(spec, 11);
  CHECK(inst.orbits().size() == 3);
  CHECK_FALSE(inst.windows().empty());
  for (const VisibleWindow& w : inst.windows()) {
    CHECK(w.vts_s >= 0.0);
    CHECK(w.vte_s <= spec.horizon_s + 1e-9);
    CHECK(w.length() >= inst.target(w.target_id).obs_duration_s);
    CHECK(w.success_prob >= spec.prob_min);
    CHECK(w.success_prob <= spec.prob_max);
    CHECK(std::abs(w.roll_angle_deg) <= 30.0);
  }
}

TEST_CASE("geometric windows sit inside the visibility envelope") {
  GenSpec spec = benchmark_preset(500);
  spec.n_world = 40;
  spec.horizon_s = 20000.0;
  const Instance inst = generate_instance(spec, 21);
  CHECK(inst.orbits().size() == 4);
  REQUIRE_FALSE(inst.windows().empty());

  // A finer scan around every window: interior visible, just outside not.
  const double jd0 = orbit::julian_date(spec.epoch_utc);
  const auto sats = spec.satellites;
  auto visible = [&](int orbit_id, double t, const Target& tg) {
    const auto& el = sats[static_cast<std::size_t>(orbit_id - 1)];
    const auto s = orbit::propagate_inertial(el, t);
    const auto f = orbit::orbital_frame(s);
    const Eigen::Matrix3d rot = orbit::inertial_to_fixed(orbit::gmst_rad(jd0) + orbit::kEarthRotationRadPerS * t);
    orbit::OrbitalFrame ff{rot * f.along, rot * f.cross, rot * f.nadir};
    const Eigen::Vector3d p = orbit::surface_point(tg.latitude_deg, tg.longitude_deg);
    if (p.normalized().dot(rot * orbit::sun_direction(jd0 + t / 86400.0)) < 0.0) return false;
    const auto la = orbit::look_angles<double>(rot * s.position_km, ff, p);
    return la.in_front && std::abs(la.pitch_deg) <= 30.0 && std::abs(la.roll_deg) <= 30.0;
  };
  for (const VisibleWindow& w : inst.windows()) {
    const Target& tg = inst.target(w.target_id);
    CHECK(w.length() >= tg.obs_duration_s);
    for (double t = w.vts_s; t <= w.vte_s; t += 0.05) CHECK(visible(w.orbit_id, t, tg));
    if (w.vts_s > 0.2) CHECK_FALSE(visible(w.orbit_id, w.vts_s - 0.15, tg));
    if (w.vte_s < spec.horizon_s - 0.2) CHECK_FALSE(visible(w.orbit_id, w.vte_s + 0.15, tg));
  }
}

TEST_CASE("per-revolution resources split at ascending nodes") {
  GenSpec spec = benchmark_preset(500);
  spec.n_world = 30;
  spec.horizon_s = 20000.0;
  spec.granularity = ResourceGranularity::Revolution;
  const Instance inst = generate_instance(spec, 2);
  // About 3.5 revolutions per satellite in 20000 s.
  CHECK(inst.orbits().size() >= 12);
  CHECK(inst.orbits().size() <= 20);
}

TEST_CASE("generator settings are checked") {
  GenSpec spec = desk_preset(10);
  spec.step_s = 0.0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = desk_preset(10);
  spec.n_world = -1;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = desk_preset(10);
  spec.prob_min = 0.9;
  spec.prob_max = 0.1;
  CHECK_THROWS_AS(spec.validate(), Error);
}
