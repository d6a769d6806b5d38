#include "doctest.h"

#include <cmath>

#include "aeos/heuristics.hpp"
#include "aeos/io.hpp"
#include "support.hpp"

using namespace aeos;
using namespace aeos::testing;

namespace {

SolverConfig quick_config(std::uint64_t seed = 1) {
  SolverConfig c;
  c.niter_m = 60;
  c.nf_m = 10;
  c.nft_m = 5;
  c.ccp.sample_size_override = 60;
  c.seed = seed;
  c.scenario_seed = seed + 100;
  return c;
}

}  // namespace

TEST_CASE("need mixes profit share and failure odds") {
  const std::vector<Target> targets = {{1, 0, 0, 10.0, 20.0}, {2, 0, 0, 5.0, 20.0}, {3, 0, 0, 4.0, 20.0},
                                       {4, 0, 0, 2.0, 20.0}};
  const std::vector<VisibleWindow> windows = {
      {1, 1, 0, 100, 0.5, 0, true}, {1, 2, 0, 100, 0.5, 0, true}, {2, 1, 200, 300, 0.2, 0, true},
      {3, 2, 200, 300, 1.0, 0, true}, {4, 1, 400, 500, 0.3, 0, false},
  };
  const Instance inst(targets, {plain_orbit(1), plain_orbit(2)}, windows, 1000.0, 1);
  CHECK(*need(inst.target(1), inst) == doctest::Approx(1.5));
  CHECK(*need(inst.target(2), inst) == doctest::Approx(1.3));
  CHECK(*need(inst.target(3), inst) == doctest::Approx(0.4));
  CHECK_FALSE(need(inst.target(4), inst));

  const auto pool = build_mission_pool(inst, Schedule{});
  REQUIRE(pool.size() == 3);
  CHECK(pool[0].target_id == 1);
  CHECK(pool[1].target_id == 2);
  CHECK(pool[2].target_id == 3);
  CHECK(pool[0].conflict.size() == 2);
}

TEST_CASE("conflict degree") {
  OrbitResource o = plain_orbit(1);
  o.imaging_energy_j_per_s = 8000.0 / 30.0;
  const std::vector<Target> targets = {{1, 0, 0, 1.0, 30.0}, {2, 0, 0, 1.0, 30.0}};
  const std::vector<VisibleWindow> windows = {{1, 1, 0, 100, 0.5, 0, true}, {2, 1, 60, 200, 1.0, 0, true}};
  const Instance inst(targets, {o}, windows, 1000.0, 1);
  CHECK(window_overlap(inst, 0) == doctest::Approx(40.0));
  const RemainingCapacity full{7500.0, 80000.0};
  CHECK(*conflict(inst.window(1, 1), inst, full, 40.0) == doctest::Approx(0.45));
  CHECK(*conflict(inst.window(1, 1), inst, full) == doctest::Approx(0.45));
  CHECK(*conflict(inst.window(2, 1), inst, full) == 0.0);
  CHECK_FALSE(conflict(inst.window(1, 1), inst, {2000.0, 80000.0}));

  OrbitResource free_orbit = plain_orbit(1);
  free_orbit.memory_rate_mb_per_s = 0.0;
  free_orbit.imaging_energy_j_per_s = 0.0;
  const Instance lone({{1, 0, 0, 1.0, 30.0}}, {free_orbit}, {{1, 1, 0, 100, 0.3, 0, true}}, 1000.0, 1);
  CHECK(*conflict(lone.window(1, 1), lone, remaining_capacity(lone, Schedule{}, 1)) == 0.0);
}

TEST_CASE("construction") {
  const Instance single({{1, 0, 0, 3.0, 20.0}}, {plain_orbit(1)}, {{1, 1, 0, 100, 0.8, 0, true}}, 500.0, 1);
  const Schedule s = construct_initial(single, SolverConfig{});
  CHECK(s.size() == 1);
  CHECK(s.contains(1));

  // Both windows cover the same 25 s; only one 20 s observation fits.
  const Instance contest({{1, 0, 0, 4.0, 20.0}, {2, 0, 0, 9.0, 20.0}}, {plain_orbit(1)},
                         {{1, 1, 0, 25, 0.8, 0, true}, {2, 1, 0, 25, 0.8, 0, true}}, 500.0, 1);
  const Schedule c = construct_initial(contest, SolverConfig{});
  CHECK(c.size() == 1);
  CHECK(c.contains(2));

  const Instance inst = fuzz_instance(42);
  CHECK(construct_initial(inst, SolverConfig{}) == construct_initial(inst, SolverConfig{}));
  CHECK(validate_schedule(inst, construct_initial(inst, SolverConfig{})).ok());
}

TEST_CASE("metropolis rule and failure counter") {
  CHECK(acceptance_probability(0.0, 10.0) == 1.0);
  CHECK(acceptance_probability(3.0, 10.0) == 1.0);
  CHECK(acceptance_probability(-10.0, 10.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(acceptance_probability(-10.0, 10.0) == doctest::Approx(0.36788).epsilon(1e-5));

  Rng a(5);
  Rng b(5);
  CHECK(accept_move(0.0, 1.0, a));
  CHECK(a == b);  // no draw for an improving move

  CHECK(improvement_ratio(5.0, 0.0) == std::numeric_limits<double>::infinity());
  CHECK(improvement_ratio(0.0, 0.0) == 0.0);
  CHECK(improvement_ratio(11.0, 10.0) == doctest::Approx(0.1));
  int counter = 7;
  for (int i = 0; i < 5; ++i) counter = update_failure_counter(counter, 0.05, 0.05);
  CHECK(counter == 0);
  CHECK(update_failure_counter(3, 0.01, 0.05) == 4);
}

TEST_CASE("annealing run invariants") {
  const Instance inst = fuzz_instance(7);
  const SolverConfig cfg = quick_config();
  const IsaResult r = run_isa(inst, cfg);
  REQUIRE_FALSE(r.trace.empty());
  CHECK(r.f_best >= r.f0);
  CHECK(validate_schedule(inst, r.best).ok());
  CHECK(confidence_profit(inst, r.best, scenarios_for(inst, cfg), cfg.ccp.epsilon) == r.f_best);

  const double half = static_cast<double>(build_mission_pool(inst, Schedule{}).size()) / 2.0;
  double prev = r.f0;
  for (const TraceRow& row : r.trace) {
    CHECK(row.f_best >= prev);
    prev = row.f_best;
    CHECK(row.temperature == doctest::Approx(cfg.t0 * std::pow(cfg.alpha_t, row.outer)).epsilon(1e-12));
    CHECK(std::ceil(row.chain_length - 1e-9) ==
          std::ceil(half * std::pow(cfg.alpha_l, row.outer) - 1e-9));
  }
  CHECK(r.trace.back().f_best == r.f_best);
  CHECK(r.outer_iterations == r.trace.back().outer + 1);

  const IsaResult again = run_isa(inst, cfg);
  CHECK(io::trace_csv(again.trace) == io::trace_csv(r.trace));
  CHECK(again.best == r.best);
}

TEST_CASE("hard iteration cap") {
  SolverConfig cfg = quick_config();
  cfg.max_total_iterations = 25;
  const IsaResult r = run_isa(fuzz_instance(9), cfg);
  CHECK(r.total_iterations == 25);
  CHECK(r.stopped_by_total_cap);
}

TEST_CASE("greedy baseline") {
  const Instance inst = fuzz_instance(13);
  const SolverConfig cfg = quick_config(3);
  const GreedyResult g = run_greedy_baseline(inst, cfg);
  CHECK(g.schedule == construct_initial(inst, cfg));
  const IsaResult r = run_isa(inst, cfg);
  CHECK(g.f == r.f0);
  CHECK(g.f <= r.f_best);

  const Instance empty({}, {plain_orbit(1)}, {}, 100.0, 1);
  const GreedyResult ge = run_greedy_baseline(empty, cfg);
  CHECK(ge.schedule.empty());
  CHECK(ge.f == 0.0);
  const IsaResult re = run_isa(empty, cfg);
  CHECK(re.best.empty());
  CHECK(re.f_best == 0.0);
}

TEST_CASE("config validation") {
  SolverConfig c;
  CHECK_NOTHROW(c.validate());
  c.gamma = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SolverConfig{};
  c.alpha_t = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = SolverConfig{};
  c.ccp.epsilon = 0.2;
  CHECK_THROWS_AS(c.validate(), Error);
}
