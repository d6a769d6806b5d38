#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "aeos/heuristics.hpp"
#include "aeos/instance_gen.hpp"
#include "aeos/io.hpp"
#include "aeos/uncertainty.hpp"

namespace aeos::cli {

namespace fs = std::filesystem;

namespace {

enum class Level { Quiet, Info, Debug };

Level log_level() {
  const char* env = std::getenv("AEOS_LOG");
  if (env == nullptr) return Level::Info;
  const std::string v = env;
  if (v == "quiet" || v == "0" || v == "error") return Level::Quiet;
  if (v == "debug" || v == "2") return Level::Debug;
  return Level::Info;
}

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err), level_(log_level()) {}
  void info(const std::string& msg) const {
    if (level_ != Level::Quiet) err_ << msg << '\n';
  }
  void debug(const std::string& msg) const {
    if (level_ == Level::Debug) err_ << msg << '\n';
  }

 private:
  std::ostream& err_;
  Level level_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string real(double v) { return io::format_real(v); }

// ---- generate -------------------------------------------------------------

struct GenerateArgs {
  std::string preset;
  std::optional<int> n_world;
  std::vector<std::string> regions;
  int region_count = 150;
  std::string mode;
  std::optional<double> horizon;
  std::optional<double> step;
  std::optional<int> orbits;
  bool per_revolution = false;
  std::optional<double> memory_capacity;
  std::optional<double> energy_capacity;
  std::uint64_t seed = 1;
  std::string out;
};

GenSpec spec_from(const GenerateArgs& a) {
  GenSpec spec;
  if (a.preset.empty()) {
    spec = benchmark_preset(500);
  } else if (a.preset == "desk") {
    spec = desk_preset(100);
  } else if (a.preset.rfind("paper-", 0) == 0) {
    spec = benchmark_preset(std::stoi(a.preset.substr(6)));
  } else {
    throw Error("unknown preset '" + a.preset + "' (paper-500|paper-650|paper-800|paper-950|desk)");
  }
  if (a.n_world) spec.n_world = *a.n_world;
  if (!a.regions.empty()) {
    spec.regions.clear();
    for (const std::string& r : a.regions) {
      if (r == "china") spec.regions.push_back(region_china(a.region_count));
      else if (r == "australia") spec.regions.push_back(region_australia(a.region_count));
      else if (r == "america") spec.regions.push_back(region_america(a.region_count));
      else if (r != "none") throw Error("unknown region '" + r + "'");
    }
  }
  if (a.mode == "synthetic") {
    spec.mode = GenMode::Synthetic;
  } else if (a.mode == "geometric") {
    spec.mode = GenMode::Geometric;
    if (spec.satellites.empty()) spec.satellites = benchmark_constellation();
  } else if (!a.mode.empty()) {
    throw Error("unknown mode '" + a.mode + "'");
  }
  if (a.horizon) spec.horizon_s = *a.horizon;
  if (a.step) spec.step_s = *a.step;
  if (a.orbits) {
    if (spec.mode == GenMode::Synthetic) {
      spec.synthetic.n_orbits = *a.orbits;
    } else {
      const auto all = benchmark_constellation();
      if (*a.orbits < 0 || *a.orbits > static_cast<int>(all.size())) {
        throw Error("geometric mode supports 0-4 satellites");
      }
      spec.satellites.assign(all.begin(), all.begin() + *a.orbits);
    }
  }
  if (a.per_revolution) spec.granularity = ResourceGranularity::Revolution;
  if (a.memory_capacity) spec.resource.memory_capacity_mb = *a.memory_capacity;
  if (a.energy_capacity) spec.resource.energy_capacity_j = *a.energy_capacity;
  spec.validate();
  return spec;
}

int cmd_generate(const GenerateArgs& a, std::ostream& out, const Log& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const Instance instance = generate_instance(spec_from(a), a.seed);
  io::write_json(a.out, io::to_json(instance));
  out << "targets " << instance.targets().size() << " orbits " << instance.orbits().size()
      << " windows " << instance.windows().size() << '\n';
  log.info("generated " + a.out + " in " + real(seconds_since(t0)) + " s");
  return 0;
}

// ---- solve / replay -------------------------------------------------------

struct SolveArgs {
  std::string instance;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> scenario_seed;
  std::optional<std::size_t> samples;
  std::optional<int> niter_m;
  std::string out;
  std::string trace;
  std::string manifest;
  std::string scenarios_out;
};

struct SolveOutput {
  io::RunManifest manifest;
  std::string schedule_text;
  std::string trace_text;
};

SolveOutput solve(const Instance& instance, const SolverConfig& config, const Log& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioMatrix scenarios = scenarios_for(instance, config);
  log.debug("scenarios " + std::to_string(scenarios.sample_size()));
  const IsaResult result = run_isa(instance, scenarios, config);
  SolveOutput o;
  o.schedule_text = io::to_json(result.best).dump(2) + "\n";
  o.trace_text = io::trace_csv(result.trace);
  o.manifest.config = config;
  o.manifest.instance_seed = instance.rng_seed();
  o.manifest.tool_version = AEOS_VERSION;
  o.manifest.f0 = result.f0;
  o.manifest.f_best = result.f_best;
  o.manifest.targets_assigned = result.best.size();
  o.manifest.sample_size = scenarios.sample_size();
  o.manifest.iterations = result.total_iterations;
  o.manifest.runtime_s = seconds_since(t0);
  log.debug("outer loops " + std::to_string(result.outer_iterations) + ", capped " +
            std::to_string(result.inner_loops_capped));
  return o;
}

SolverConfig load_config(const std::string& path) {
  if (path.empty()) return SolverConfig{};
  return io::config_from_json(io::read_json(path));
}

int cmd_solve(const SolveArgs& a, std::ostream& out, const Log& log) {
  SolverConfig config = load_config(a.config);
  if (a.seed) config.seed = *a.seed;
  if (a.scenario_seed) config.scenario_seed = *a.scenario_seed;
  if (a.samples) config.ccp.sample_size_override = *a.samples;
  if (a.niter_m) config.niter_m = *a.niter_m;
  config.validate();

  const Instance instance = io::instance_from_json(io::read_json(a.instance));
  if (!a.scenarios_out.empty()) {
    io::write_json(a.scenarios_out, io::to_json(scenarios_for(instance, config)));
  }
  SolveOutput o = solve(instance, config, log);
  o.manifest.instance_path = fs::absolute(a.instance).string();
  o.manifest.schedule_path = fs::absolute(a.out).string();
  if (!a.trace.empty()) o.manifest.trace_path = fs::absolute(a.trace).string();

  io::write_text(a.out, o.schedule_text);
  if (!a.trace.empty()) io::write_text(a.trace, o.trace_text);
  if (!a.manifest.empty()) io::write_json(a.manifest, io::to_json(o.manifest));
  out << "f0 " << real(o.manifest.f0) << " f_best " << real(o.manifest.f_best) << " assigned "
      << o.manifest.targets_assigned << " samples " << o.manifest.sample_size << '\n';
  log.info("solved in " + real(o.manifest.runtime_s) + " s");
  return 0;
}

struct ReplayArgs {
  std::string manifest;
  std::string out;
  std::string trace;
  bool check = false;
};

int cmd_replay(const ReplayArgs& a, std::ostream& out, std::ostream& err, const Log& log) {
  const io::RunManifest m = io::manifest_from_json(io::read_json(a.manifest));
  const Instance instance = io::instance_from_json(io::read_json(m.instance_path));
  if (instance.rng_seed() != m.instance_seed) {
    err << "instance seed " << instance.rng_seed() << " differs from manifest " << m.instance_seed
        << '\n';
    return 1;
  }
  const SolveOutput o = solve(instance, m.config, log);
  if (!a.out.empty()) io::write_text(a.out, o.schedule_text);
  if (!a.trace.empty()) io::write_text(a.trace, o.trace_text);
  out << "f_best " << real(o.manifest.f_best) << '\n';
  if (!a.check) return 0;
  bool same = true;
  if (io::read_text(m.schedule_path) != o.schedule_text) {
    err << "schedule differs from " << m.schedule_path << '\n';
    same = false;
  }
  if (!m.trace_path.empty() && io::read_text(m.trace_path) != o.trace_text) {
    err << "trace differs from " << m.trace_path << '\n';
    same = false;
  }
  out << (same ? "replay identical" : "replay differs") << '\n';
  return same ? 0 : 3;
}

// ---- evaluate / validate --------------------------------------------------

struct EvaluateArgs {
  std::string instance;
  std::string schedule;
  double epsilon = 0.01;
  std::optional<std::size_t> samples;
  double alpha = 0.10;
  double theta = 0.01;
  std::uint64_t seed = 1;
  std::string csv;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const Instance instance = io::instance_from_json(io::read_json(a.instance));
  const Schedule schedule = io::schedule_from_json(io::read_json(a.schedule));
  const ValidationReport report = validate_schedule(instance, schedule);
  if (!report.ok()) {
    err << report.to_text();
    return 2;
  }
  if (a.epsilon < 0.0 || a.epsilon >= 1.0) throw Error("epsilon must lie in [0, 1)");
  std::size_t n = 0;
  if (a.samples) {
    n = *a.samples;
  } else {
    CcpParams ccp{a.alpha, a.epsilon, a.theta, std::nullopt};
    n = required_sample_size(ccp, decision_variable_count(instance));
  }
  const ScenarioMatrix scenarios = sample_scenarios(instance, n, a.seed);
  const Eigen::VectorXd profits = scenario_profits(instance, schedule, scenarios);
  const double f = quantile_profit(profits, a.epsilon);
  if (!a.csv.empty()) io::write_text(a.csv, io::scenario_profit_csv(profits));
  out << "f " << real(f) << " samples " << n << " deterministic "
      << real(schedule_profit_deterministic(instance, schedule)) << '\n';
  return 0;
}

struct ValidateArgs {
  std::string instance;
  std::string schedule;
  std::string json;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const Instance instance = io::instance_from_json(io::read_json(a.instance));
  const Schedule schedule = io::schedule_from_json(io::read_json(a.schedule));
  const ValidationReport report = validate_schedule(instance, schedule);
  if (!a.json.empty()) io::write_json(a.json, io::to_json(report));
  if (report.ok()) {
    out << "valid (" << schedule.size() << " assignments)\n";
    return 0;
  }
  out << report.to_text();
  return 2;
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
  std::vector<std::string> instances;
  std::vector<std::string> grid;
  int runs = 1;
  std::string config;
  std::string out;
  std::string aggregate;
  bool plan_only = false;
};

struct Axis {
  std::string key;
  std::vector<std::string> values;
};

const std::vector<std::string> kCapacityKeys = {"memory_capacity_mb", "energy_capacity_j"};

Axis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw Error("grid entry '" + text + "' is not key=v1,v2");
  Axis axis;
  axis.key = text.substr(0, eq);
  std::stringstream ss(text.substr(eq + 1));
  std::string v;
  while (std::getline(ss, v, ',')) {
    if (!v.empty()) axis.values.push_back(v);
  }
  if (axis.values.empty()) throw Error("grid entry '" + text + "' has no values");
  return axis;
}

using Point = std::vector<std::pair<std::string, std::string>>;

std::vector<Point> expand(const std::vector<Axis>& axes) {
  std::vector<Point> points{{}};
  for (const Axis& axis : axes) {
    std::vector<Point> next;
    for (const Point& p : points) {
      for (const std::string& v : axis.values) {
        Point q = p;
        q.emplace_back(axis.key, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

std::string point_label(const Point& p) {
  std::string s;
  for (const auto& [k, v] : p) {
    if (!s.empty()) s += ';';
    s += k + '=' + v;
  }
  return s;
}

// Applies a grid point; returns false when it gives an infeasible CCP setting.
bool apply_point(const Point& p, const SolverConfig& base, const Instance& base_instance,
                 SolverConfig& config, std::optional<Instance>& instance) {
  io::Json overrides = io::Json::object();
  std::vector<OrbitResource> orbits = base_instance.orbits();
  bool orbits_changed = false;
  for (const auto& [k, v] : p) {
    io::Json value;
    try {
      value = io::Json::parse(v);
    } catch (const nlohmann::json::exception&) {
      throw Error("grid value '" + v + "' for '" + k + "' is not a number");
    }
    if (std::find(kCapacityKeys.begin(), kCapacityKeys.end(), k) != kCapacityKeys.end()) {
      for (OrbitResource& o : orbits) {
        (k == "memory_capacity_mb" ? o.memory_capacity_mb : o.energy_capacity_j) =
            value.get<double>();
      }
      orbits_changed = true;
    } else {
      overrides[k] = value;
    }
  }
  config = io::config_from_json(overrides, base);
  instance.reset();
  if (orbits_changed) instance = base_instance.with_orbits(std::move(orbits));
  try {
    config.ccp.validate();
  } catch (const Error&) {
    return false;
  }
  return true;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, const Log& log) {
  if (a.runs < 1) throw Error("--runs must be at least 1");
  const SolverConfig base = load_config(a.config);
  std::vector<Axis> axes;
  for (const std::string& g : a.grid) axes.push_back(parse_axis(g));
  const std::vector<Point> points = expand(axes);

  std::vector<Instance> instances;
  for (const std::string& path : a.instances) {
    instances.push_back(io::instance_from_json(io::read_json(path)));
  }

  std::size_t skipped = 0;
  std::vector<std::pair<std::size_t, std::size_t>> plan;  // (instance, point)
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (std::size_t p = 0; p < points.size(); ++p) {
      SolverConfig c;
      std::optional<Instance> inst;
      if (apply_point(points[p], base, instances[i], c, inst)) plan.emplace_back(i, p);
      else ++skipped;
    }
  }
  const std::size_t rows = plan.size() * static_cast<std::size_t>(a.runs);
  if (a.plan_only) {
    out << "points " << points.size() << " skipped " << skipped / std::max<std::size_t>(1, instances.size())
        << " instances " << instances.size() << " runs " << a.runs << " rows " << rows << '\n';
    return 0;
  }

  std::ostringstream csv;
  csv << "# schema: aeos-sweep/1\n";
  csv << "instance,point,run,seed,scenario_seed,sample_size,f0,f_best,assigned,iterations\n";
  struct Acc {
    std::vector<double> f_best;
    std::vector<double> f0;
  };
  std::map<std::pair<std::size_t, std::size_t>, Acc> acc;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [i, p] : plan) {
    for (int r = 0; r < a.runs; ++r) {
      SolverConfig c;
      std::optional<Instance> override_instance;
      apply_point(points[p], base, instances[i], c, override_instance);
      c.seed += static_cast<std::uint64_t>(r);
      c.scenario_seed += static_cast<std::uint64_t>(r);
      const Instance& inst = override_instance ? *override_instance : instances[i];
      const ScenarioMatrix scenarios = scenarios_for(inst, c);
      const IsaResult res = run_isa(inst, scenarios, c);
      csv << a.instances[i] << ',' << point_label(points[p]) << ',' << r << ',' << c.seed << ','
          << c.scenario_seed << ',' << scenarios.sample_size() << ',' << real(res.f0) << ','
          << real(res.f_best) << ',' << res.best.size() << ',' << res.total_iterations << '\n';
      acc[{i, p}].f_best.push_back(res.f_best);
      acc[{i, p}].f0.push_back(res.f0);
      log.debug(a.instances[i] + " " + point_label(points[p]) + " run " + std::to_string(r) +
                " f_best " + real(res.f_best));
    }
  }
  io::write_text(a.out, csv.str());

  if (!a.aggregate.empty()) {
    std::ostringstream agg;
    agg << "# schema: aeos-sweep-aggregate/1\n";
    agg << "instance,point,runs,mean_f_best,median_f_best,mean_f0\n";
    for (const auto& [key, v] : acc) {
      auto mean = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double d : x) s += d;
        return x.empty() ? 0.0 : s / static_cast<double>(x.size());
      };
      agg << a.instances[key.first] << ',' << point_label(points[key.second]) << ','
          << v.f_best.size() << ',' << real(mean(v.f_best)) << ',' << real(median(v.f_best)) << ','
          << real(mean(v.f0)) << '\n';
    }
    io::write_text(a.aggregate, agg.str());
  }
  out << "rows " << rows << " skipped points " << skipped << '\n';
  log.info("sweep finished in " + real(seconds_since(t0)) + " s");
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-satellite observation scheduling under cloud uncertainty"};
  app.name("aeos-sched");
  app.set_version_flag("--version", std::string(AEOS_VERSION));
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a seeded instance");
  g->add_option("--preset", gen.preset, "paper-500|paper-650|paper-800|paper-950|desk");
  g->add_option("--n-world", gen.n_world, "Worldwide targets");
  g->add_option("--region", gen.regions, "Interest regions: china, australia, america, none");
  g->add_option("--region-count", gen.region_count, "Targets per interest region");
  g->add_option("--mode", gen.mode, "geometric|synthetic");
  g->add_option("--horizon", gen.horizon, "Horizon in seconds");
  g->add_option("--step", gen.step, "Propagation step in seconds");
  g->add_option("--orbits", gen.orbits, "Satellites (geometric) or orbits (synthetic)");
  g->add_flag("--per-revolution", gen.per_revolution, "One orbit resource per revolution");
  g->add_option("--memory-capacity", gen.memory_capacity, "Memory capacity per orbit, MB");
  g->add_option("--energy-capacity", gen.energy_capacity, "Energy capacity per orbit, J");
  g->add_option("--seed", gen.seed, "Instance seed");
  g->add_option("--out", gen.out, "Instance JSON path")->required();

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Run construction and annealing on an instance");
  s->add_option("--instance", sol.instance)->required();
  s->add_option("--config", sol.config, "Solver config JSON");
  s->add_option("--seed", sol.seed, "Solver seed");
  s->add_option("--scenario-seed", sol.scenario_seed, "Cloud scenario seed");
  s->add_option("--samples", sol.samples, "Scenario count (overrides the bound)");
  s->add_option("--niter-m", sol.niter_m, "Iteration threshold of the outer loop");
  s->add_option("--out", sol.out, "Schedule JSON path")->required();
  s->add_option("--trace", sol.trace, "Trace CSV path");
  s->add_option("--manifest", sol.manifest, "Run manifest JSON path");
  s->add_option("--scenarios-out", sol.scenarios_out, "Scenario matrix JSON path");

  ReplayArgs rep;
  auto* r = app.add_subcommand("replay", "Re-run a solve from its manifest");
  r->add_option("--manifest", rep.manifest)->required();
  r->add_option("--out", rep.out, "Schedule JSON path");
  r->add_option("--trace", rep.trace, "Trace CSV path");
  r->add_flag("--check", rep.check, "Compare with the files the manifest names");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Confidence profit of a schedule");
  e->add_option("--instance", ev.instance)->required();
  e->add_option("--schedule", ev.schedule)->required();
  e->add_option("--epsilon", ev.epsilon, "Allowed fraction of violated scenarios");
  e->add_option("--alpha", ev.alpha, "Used for the sample-size bound");
  e->add_option("--theta", ev.theta, "Used for the sample-size bound");
  e->add_option("--samples", ev.samples, "Scenario count");
  e->add_option("--seed", ev.seed, "Scenario seed");
  e->add_option("--csv", ev.csv, "Sorted scenario-profit CSV path");

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Check a schedule against every constraint");
  v->add_option("--instance", val.instance)->required();
  v->add_option("--schedule", val.schedule)->required();
  v->add_option("--json", val.json, "Report JSON path");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "Solve a parameter grid over instances and seeds");
  w->add_option("--instances", sw.instances)->required();
  w->add_option("--grid", sw.grid, "key=v1,v2 (repeatable)");
  w->add_option("--runs", sw.runs, "Seeds per grid point");
  w->add_option("--config", sw.config, "Base solver config JSON");
  w->add_option("--out", sw.out, "Per-run CSV path");
  w->add_option("--aggregate", sw.aggregate, "Aggregate CSV path");
  w->add_flag("--plan-only", sw.plan_only, "Print the row count without solving");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err);
  }

  const Log log(err);
  try {
    if (*g) return cmd_generate(gen, out, log);
    if (*s) return cmd_solve(sol, out, log);
    if (*r) return cmd_replay(rep, out, err, log);
    if (*e) return cmd_evaluate(ev, out, err);
    if (*v) return cmd_validate(val, out);
    if (*w) {
      if (!sw.plan_only && sw.out.empty()) throw Error("--out is required unless --plan-only");
      return cmd_sweep(sw, out, log);
    }
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace aeos::cli
