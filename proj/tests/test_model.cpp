#include "doctest.h"

#include <algorithm>

#include "aeos/geometry.hpp"
#include "aeos/model.hpp"
#include "support.hpp"

using namespace aeos;
using aeos::testing::plain_orbit;

namespace {

Instance two_target_instance() {
  std::vector<Target> targets = {{1, 0, 0, 4.0, 20.0}, {2, 0, 0, 6.0, 20.0}};
  std::vector<OrbitResource> orbits = {plain_orbit(1), plain_orbit(2)};
  std::vector<VisibleWindow> windows = {
      {1, 1, 0.0, 100.0, 0.8, 0.0, true},
      {2, 1, 40.0, 160.0, 0.5, 10.0, true},
      {1, 2, 0.0, 100.0, 0.8, 0.0, true},
  };
  return Instance(targets, orbits, windows, 1000.0, 7);
}

void charge(Schedule& s, const Instance& inst, int orbit_id) {
  const auto seq = s.sequence(orbit_id);
  s.memory_used_mb[orbit_id] = sequence_memory(inst, orbit_id, seq);
  s.energy_used_j[orbit_id] = sequence_energy(inst, orbit_id, seq);
}

}  // namespace

TEST_CASE("empty schedule validates cleanly") {
  const Instance inst = two_target_instance();
  CHECK(validate_schedule(inst, Schedule{}).ok());
  CHECK(schedule_profit_deterministic(inst, Schedule{}) == 0.0);
}

TEST_CASE("same target on two orbits is reported") {
  const Instance inst = two_target_instance();
  Schedule s;
  s.assignments_by_orbit[1] = {observe_at(inst.window(1, 1), inst.target(1), inst.orbit(1), 0.5)};
  s.assignments_by_orbit[2] = {observe_at(inst.window(1, 2), inst.target(1), inst.orbit(2), 0.5)};
  charge(s, inst, 1);
  charge(s, inst, 2);
  const ValidationReport r = validate_schedule(inst, s);
  CHECK(r.count(ViolationKind::DuplicateTarget) == 1);
  CHECK(r.violations.size() == 1);
}

TEST_CASE("tight gap reports the transition shortfall") {
  const Instance inst = two_target_instance();
  Schedule s;
  // Target 1 at tp = 0: ots 0, ote 20, midpoint 10 of 100 -> pitch 24, roll 0.
  // Target 2 at tp = 0: ots 40, ote 60, midpoint 50 at 10/120 -> pitch 25, roll 10.
  const auto a = observe_at(inst.window(1, 1), inst.target(1), inst.orbit(1), 0.0);
  const auto b = observe_at(inst.window(2, 1), inst.target(2), inst.orbit(1), 0.0);
  CHECK(a.pitch_deg == doctest::Approx(24.0));
  CHECK(b.pitch_deg == doctest::Approx(25.0));
  s.assignments_by_orbit[1] = {a, b};
  charge(s, inst, 1);
  // dpitch 1, droll 10 -> max(1/3, 10/3) + 5 = 8.3333 s; gap is 20 s, so fine.
  CHECK(validate_schedule(inst, s).ok());

  // Shift b earlier than a's end plus transition: window of b starts at 40, so
  // build an instance variant with an earlier window.
  std::vector<VisibleWindow> w = inst.windows();
  w[1].vts_s = 22.0;
  const Instance tight(inst.targets(), inst.orbits(), w, 1000.0, 7);
  Schedule t;
  const auto a2 = observe_at(tight.window(1, 1), tight.target(1), tight.orbit(1), 0.0);
  const auto b2 = observe_at(tight.window(2, 1), tight.target(2), tight.orbit(1), 0.0);
  t.assignments_by_orbit[1] = {a2, b2};
  charge(t, tight, 1);
  const ValidationReport r = validate_schedule(tight, t);
  REQUIRE(r.count(ViolationKind::Transition) == 1);
  // b2 pitch: midpoint 32 over [22, 160] -> m = 10/138.
  const double pb = 30.0 * (1.0 - 2.0 * 10.0 / 138.0);
  const double dp = std::abs(24.0 - pb);
  const double g = dp + 10.0;
  const double stab = g <= 15.0 ? 5.0 : (g <= 40.0 ? 10.0 : 15.0);
  const double expected = 20.0 + std::max(dp / 3.0, 10.0 / 3.0) + stab - 22.0;
  CHECK(r.violations[0].magnitude == doctest::Approx(expected));
}

TEST_CASE("deterministic profit sums assigned targets") {
  std::vector<Target> targets = {{1, 0, 0, 2, 10}, {2, 0, 0, 5, 10}, {3, 0, 0, 9, 10}, {4, 0, 0, 7, 10}};
  std::vector<VisibleWindow> windows;
  for (int i = 1; i <= 4; ++i) windows.push_back({i, 1, 100.0 * i, 100.0 * i + 50, 1.0, 0, true});
  const Instance inst(targets, {plain_orbit(1)}, windows, 1000, 1);
  Schedule s;
  for (int i : {1, 2, 3}) {
    s.assignments_by_orbit[1].push_back(
        observe_at(inst.window(i, 1), inst.target(i), inst.orbit(1), 0.5));
  }
  CHECK(schedule_profit_deterministic(inst, s) == 16.0);
  Schedule one;
  one.assignments_by_orbit[1] = {observe_at(inst.window(4, 1), inst.target(4), inst.orbit(1), 0.5)};
  CHECK(schedule_profit_deterministic(inst, one) == 7.0);
  // Order of assignments does not matter.
  std::reverse(s.assignments_by_orbit[1].begin(), s.assignments_by_orbit[1].end());
  CHECK(schedule_profit_deterministic(inst, s) == 16.0);
}

TEST_CASE("unknown ids are hard errors") {
  const Instance inst = two_target_instance();
  Schedule s;
  s.assignments_by_orbit[9] = {};
  CHECK_THROWS_AS(validate_schedule(inst, s), Error);
  Schedule t;
  auto a = observe_at(inst.window(1, 1), inst.target(1), inst.orbit(1), 0.5);
  a.target_id = 42;
  t.assignments_by_orbit[1] = {a};
  CHECK_THROWS_AS(validate_schedule(inst, t), Error);
}

TEST_CASE("instance constructor rejects malformed input") {
  const std::vector<Target> targets = {{1, 0, 0, 1, 20}};
  const std::vector<OrbitResource> orbits = {plain_orbit(1)};
  CHECK_THROWS_AS(Instance({{1, 0, 0, 1, 20}, {1, 0, 0, 1, 20}}, orbits, {}, 10, 1), Error);
  CHECK_THROWS_AS(Instance(targets, orbits, {{2, 1, 0, 100, 1, 0, true}}, 10, 1), Error);
  CHECK_THROWS_AS(Instance(targets, orbits, {{1, 3, 0, 100, 1, 0, true}}, 10, 1), Error);
  CHECK_THROWS_AS(Instance(targets, orbits, {{1, 1, 0, 10, 1, 0, true}}, 10, 1), Error);
  CHECK_THROWS_AS(
      Instance(targets, orbits, {{1, 1, 0, 100, 1, 0, true}, {1, 1, 200, 300, 1, 0, true}}, 10, 1),
      Error);
}

TEST_CASE("validator flags ledgers, windows and resources") {
  const Instance inst = two_target_instance();
  Schedule s;
  s.assignments_by_orbit[1] = {observe_at(inst.window(1, 1), inst.target(1), inst.orbit(1), 0.5)};
  s.memory_used_mb[1] = 1.0;
  s.energy_used_j[1] = 1.0;
  CHECK(validate_schedule(inst, s).count(ViolationKind::LedgerMismatch) == 2);

  Schedule out;
  auto a = observe_at(inst.window(1, 1), inst.target(1), inst.orbit(1), 0.5);
  a.ots_s += 1000;
  a.ote_s += 1000;
  out.assignments_by_orbit[1] = {a};
  charge(out, inst, 1);
  const auto r = validate_schedule(inst, out);
  CHECK(r.count(ViolationKind::OutsideWindow) == 1);
  CHECK(r.count(ViolationKind::StartTimeMismatch) == 1);

  std::vector<OrbitResource> small = inst.orbits();
  small[0].memory_capacity_mb = 100.0;
  small[0].energy_capacity_j = 100.0;
  const Instance tiny = inst.with_orbits(small);
  Schedule f;
  f.assignments_by_orbit[1] = {observe_at(tiny.window(1, 1), tiny.target(1), tiny.orbit(1), 0.5)};
  charge(f, tiny, 1);
  const auto rf = validate_schedule(tiny, f);
  CHECK(rf.count(ViolationKind::Memory) == 1);
  CHECK(rf.count(ViolationKind::Energy) == 1);
  CHECK_FALSE(rf.to_text().empty());
}

TEST_CASE("window lookups") {
  const Instance inst = two_target_instance();
  CHECK(inst.windows_of_orbit(1).size() == 2);
  CHECK(inst.windows_of_target(1).size() == 2);
  CHECK(inst.find_window(2, 2) == nullptr);
  CHECK(inst.max_profit() == 6.0);
  CHECK_THROWS_AS(inst.window(2, 2), Error);
  CHECK_THROWS_AS(inst.target(5), Error);
}
