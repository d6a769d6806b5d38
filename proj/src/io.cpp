#include "aeos/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

namespace aeos::io {

namespace {

void expect_format(const Json& j, const char* format) {
  if (!j.is_object() || j.value("format", std::string()) != format) {
    throw Error(std::string("expected a ") + format + " document");
  }
  const int version = j.value("version", 0);
  if (version != kFormatVersion) {
    throw Error(std::string(format) + ": unsupported version " + std::to_string(version));
  }
}

Json header(const char* format) {
  Json j;
  j["format"] = format;
  j["version"] = kFormatVersion;
  return j;
}

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.contains(key)) throw Error(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("field '") + key + "': " + e.what());
  }
}

Json assignment_json(const ObservationAssignment& a) {
  return Json{{"target", a.target_id}, {"orbit", a.orbit_id}, {"tp", a.tp},
              {"ots", a.ots_s},        {"ote", a.ote_s},      {"pitch", a.pitch_deg},
              {"roll", a.roll_deg}};
}

ObservationAssignment assignment_from(const Json& j) {
  ObservationAssignment a;
  a.target_id = get<int>(j, "target");
  a.orbit_id = get<int>(j, "orbit");
  a.tp = get<double>(j, "tp");
  a.ots_s = get<double>(j, "ots");
  a.ote_s = get<double>(j, "ote");
  a.pitch_deg = get<double>(j, "pitch");
  a.roll_deg = get<double>(j, "roll");
  return a;
}

constexpr char kHex[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  throw Error(std::string("bad hex digit '") + c + "'");
}

}  // namespace

Json to_json(const Instance& instance) {
  Json j = header(kInstanceFormat);
  j["horizon_s"] = instance.horizon_s();
  j["rng_seed"] = instance.rng_seed();
  Json targets = Json::array();
  for (const Target& t : instance.targets()) {
    targets.push_back({{"id", t.id},
                       {"lat", t.latitude_deg},
                       {"lon", t.longitude_deg},
                       {"profit", t.profit},
                       {"duration", t.obs_duration_s}});
  }
  j["targets"] = std::move(targets);
  Json orbits = Json::array();
  for (const OrbitResource& o : instance.orbits()) {
    orbits.push_back({{"id", o.id},
                      {"memory_capacity_mb", o.memory_capacity_mb},
                      {"energy_capacity_j", o.energy_capacity_j},
                      {"memory_rate_mb_per_s", o.memory_rate_mb_per_s},
                      {"imaging_energy_j_per_s", o.imaging_energy_j_per_s},
                      {"maneuver_energy_j_per_deg", o.maneuver_energy_j_per_deg},
                      {"pitch_rate_deg_per_s", o.pitch_rate_deg_per_s},
                      {"roll_rate_deg_per_s", o.roll_rate_deg_per_s},
                      {"max_pitch_deg", o.max_pitch_deg},
                      {"max_roll_deg", o.max_roll_deg}});
  }
  j["orbits"] = std::move(orbits);
  Json windows = Json::array();
  for (const VisibleWindow& w : instance.windows()) {
    windows.push_back({{"target", w.target_id},
                       {"orbit", w.orbit_id},
                       {"vts", w.vts_s},
                       {"vte", w.vte_s},
                       {"p", w.success_prob},
                       {"roll", w.roll_angle_deg},
                       {"available", w.available}});
  }
  j["windows"] = std::move(windows);
  return j;
}

Instance instance_from_json(const Json& j) {
  expect_format(j, kInstanceFormat);
  std::vector<Target> targets;
  for (const Json& t : get<Json>(j, "targets")) {
    targets.push_back({get<int>(t, "id"), get<double>(t, "lat"), get<double>(t, "lon"),
                       get<double>(t, "profit"), get<double>(t, "duration")});
  }
  std::vector<OrbitResource> orbits;
  for (const Json& o : get<Json>(j, "orbits")) {
    OrbitResource r;
    r.id = get<int>(o, "id");
    r.memory_capacity_mb = get<double>(o, "memory_capacity_mb");
    r.energy_capacity_j = get<double>(o, "energy_capacity_j");
    r.memory_rate_mb_per_s = get<double>(o, "memory_rate_mb_per_s");
    r.imaging_energy_j_per_s = get<double>(o, "imaging_energy_j_per_s");
    r.maneuver_energy_j_per_deg = get<double>(o, "maneuver_energy_j_per_deg");
    r.pitch_rate_deg_per_s = get<double>(o, "pitch_rate_deg_per_s");
    r.roll_rate_deg_per_s = get<double>(o, "roll_rate_deg_per_s");
    r.max_pitch_deg = get<double>(o, "max_pitch_deg");
    r.max_roll_deg = get<double>(o, "max_roll_deg");
    orbits.push_back(r);
  }
  std::vector<VisibleWindow> windows;
  for (const Json& w : get<Json>(j, "windows")) {
    VisibleWindow v;
    v.target_id = get<int>(w, "target");
    v.orbit_id = get<int>(w, "orbit");
    v.vts_s = get<double>(w, "vts");
    v.vte_s = get<double>(w, "vte");
    v.success_prob = get<double>(w, "p");
    v.roll_angle_deg = get<double>(w, "roll");
    v.available = w.value("available", true);
    windows.push_back(v);
  }
  return Instance(std::move(targets), std::move(orbits), std::move(windows),
                  get<double>(j, "horizon_s"), get<std::uint64_t>(j, "rng_seed"));
}

Json to_json(const Schedule& schedule) {
  Json j = header(kScheduleFormat);
  Json orbits = Json::array();
  for (const auto& [id, seq] : schedule.assignments_by_orbit) {
    Json entry;
    entry["orbit"] = id;
    auto ledger = [id = id](const std::map<int, double>& m) {
      auto it = m.find(id);
      return it == m.end() ? 0.0 : it->second;
    };
    entry["memory_used_mb"] = ledger(schedule.memory_used_mb);
    entry["energy_used_j"] = ledger(schedule.energy_used_j);
    Json list = Json::array();
    for (const ObservationAssignment& a : seq) list.push_back(assignment_json(a));
    entry["assignments"] = std::move(list);
    orbits.push_back(std::move(entry));
  }
  j["orbits"] = std::move(orbits);
  return j;
}

Schedule schedule_from_json(const Json& j) {
  expect_format(j, kScheduleFormat);
  Schedule s;
  for (const Json& entry : get<Json>(j, "orbits")) {
    const int id = get<int>(entry, "orbit");
    auto& seq = s.assignments_by_orbit[id];
    for (const Json& a : get<Json>(entry, "assignments")) seq.push_back(assignment_from(a));
    s.memory_used_mb[id] = get<double>(entry, "memory_used_mb");
    s.energy_used_j[id] = get<double>(entry, "energy_used_j");
  }
  return s;
}

Json to_json(const ScenarioMatrix& scenarios) {
  Json j = header(kScenarioFormat);
  j["seed"] = scenarios.seed;
  j["scenarios"] = scenarios.sample_size();
  j["windows"] = scenarios.window_count();
  Json rows = Json::array();
  const std::size_t cols = scenarios.window_count();
  for (std::size_t r = 0; r < scenarios.sample_size(); ++r) {
    std::string row;
    for (std::size_t c = 0; c < cols; c += 4) {
      int nibble = 0;
      for (std::size_t b = 0; b < 4 && c + b < cols; ++b) {
        if (scenarios.outcomes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c + b))) {
          nibble |= 1 << b;
        }
      }
      row.push_back(kHex[nibble]);
    }
    rows.push_back(std::move(row));
  }
  j["outcomes"] = std::move(rows);
  return j;
}

ScenarioMatrix scenarios_from_json(const Json& j) {
  expect_format(j, kScenarioFormat);
  ScenarioMatrix m;
  m.seed = get<std::uint64_t>(j, "seed");
  const auto n = get<std::size_t>(j, "scenarios");
  const auto cols = get<std::size_t>(j, "windows");
  const auto rows = get<std::vector<std::string>>(j, "outcomes");
  if (rows.size() != n) throw Error("scenario row count mismatch");
  m.outcomes.setZero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != (cols + 3) / 4) throw Error("scenario row width mismatch");
    for (std::size_t c = 0; c < cols; ++c) {
      const int nibble = hex_value(rows[r][c / 4]);
      m.outcomes(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          static_cast<std::uint8_t>((nibble >> (c % 4)) & 1);
    }
  }
  return m;
}

Json to_json(const ValidationReport& report) {
  Json j;
  j["ok"] = report.ok();
  Json list = Json::array();
  for (const Violation& v : report.violations) {
    Json e{{"kind", to_string(v.kind)}, {"orbit", v.orbit_id}, {"target", v.target_id}};
    if (v.other_target_id) e["other_target"] = *v.other_target_id;
    e["magnitude"] = v.magnitude;
    e["detail"] = v.detail;
    list.push_back(std::move(e));
  }
  j["violations"] = std::move(list);
  return j;
}

Json to_json(const SolverConfig& c) {
  Json j = header(kConfigFormat);
  j["gamma"] = c.gamma;
  j["t0"] = c.t0;
  j["alpha_t"] = c.alpha_t;
  j["alpha_l"] = c.alpha_l;
  j["zeta_m"] = c.zeta_m;
  j["nf_m"] = c.nf_m;
  j["nft_m"] = c.nft_m;
  j["niter_m"] = c.niter_m;
  j["inner_cap_factor"] = c.inner_cap_factor;
  j["max_total_iterations"] = c.max_total_iterations;
  j["ccp_alpha"] = c.ccp.alpha;
  j["ccp_epsilon"] = c.ccp.epsilon;
  j["ccp_theta"] = c.ccp.theta;
  if (c.ccp.sample_size_override) j["sample_size"] = *c.ccp.sample_size_override;
  else j["sample_size"] = nullptr;
  j["seed"] = c.seed;
  j["scenario_seed"] = c.scenario_seed;
  return j;
}

SolverConfig config_from_json(const Json& j, SolverConfig c) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  if (j.contains("format")) expect_format(j, kConfigFormat);
  for (const auto& [key, value] : j.items()) {
    if (key == "format" || key == "version") continue;
    try {
      if (key == "gamma") c.gamma = value.get<double>();
      else if (key == "t0") c.t0 = value.get<double>();
      else if (key == "alpha_t") c.alpha_t = value.get<double>();
      else if (key == "alpha_l") c.alpha_l = value.get<double>();
      else if (key == "zeta_m") c.zeta_m = value.get<double>();
      else if (key == "nf_m") c.nf_m = value.get<int>();
      else if (key == "nft_m") c.nft_m = value.get<int>();
      else if (key == "niter_m") c.niter_m = value.get<int>();
      else if (key == "inner_cap_factor") c.inner_cap_factor = value.get<double>();
      else if (key == "max_total_iterations") c.max_total_iterations = value.get<long>();
      else if (key == "ccp_alpha") c.ccp.alpha = value.get<double>();
      else if (key == "ccp_epsilon") c.ccp.epsilon = value.get<double>();
      else if (key == "ccp_theta") c.ccp.theta = value.get<double>();
      else if (key == "sample_size") {
        if (value.is_null()) c.ccp.sample_size_override.reset();
        else c.ccp.sample_size_override = value.get<std::size_t>();
      } else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "scenario_seed") c.scenario_seed = value.get<std::uint64_t>();
      else throw Error("unknown config key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw Error("config key '" + key + "': " + e.what());
    }
  }
  return c;
}

Json to_json(const RunManifest& m) {
  Json j = header(kManifestFormat);
  j["tool_version"] = m.tool_version;
  j["instance_path"] = m.instance_path;
  j["schedule_path"] = m.schedule_path;
  j["trace_path"] = m.trace_path;
  j["seeds"] = {{"instance", m.instance_seed},
                {"scenario", m.config.scenario_seed},
                {"solver", m.config.seed}};
  j["config"] = to_json(m.config);
  j["summary"] = {{"f0", m.f0},
                  {"f_best", m.f_best},
                  {"targets_assigned", m.targets_assigned},
                  {"sample_size", m.sample_size},
                  {"iterations", m.iterations},
                  {"runtime_s", m.runtime_s}};
  return j;
}

RunManifest manifest_from_json(const Json& j) {
  expect_format(j, kManifestFormat);
  RunManifest m;
  m.tool_version = j.value("tool_version", std::string());
  m.instance_path = get<std::string>(j, "instance_path");
  m.schedule_path = j.value("schedule_path", std::string());
  m.trace_path = j.value("trace_path", std::string());
  m.config = config_from_json(get<Json>(j, "config"));
  const Json seeds = get<Json>(j, "seeds");
  m.instance_seed = get<std::uint64_t>(seeds, "instance");
  m.config.scenario_seed = get<std::uint64_t>(seeds, "scenario");
  m.config.seed = get<std::uint64_t>(seeds, "solver");
  if (j.contains("summary")) {
    const Json& s = j.at("summary");
    m.f0 = s.value("f0", 0.0);
    m.f_best = s.value("f_best", 0.0);
    m.targets_assigned = s.value("targets_assigned", std::size_t{0});
    m.sample_size = s.value("sample_size", std::size_t{0});
    m.iterations = s.value("iterations", 0L);
    m.runtime_s = s.value("runtime_s", 0.0);
  }
  return m;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream os;
  os << "# schema: aeos-trace/1\n";
  os << "iteration,outer,n_iter,temperature,f,f_best,f_new,accepted,a_tar,nf_t,chain_length\n";
  for (const TraceRow& r : trace) {
    os << r.iteration << ',' << r.outer << ',' << r.n_iter << ',' << format_real(r.temperature)
       << ',' << format_real(r.f) << ',' << format_real(r.f_best) << ',' << format_real(r.f_new)
       << ',' << (r.accepted ? 1 : 0) << ',' << r.a_tar << ',' << r.nf_t << ','
       << format_real(r.chain_length) << '\n';
  }
  return os.str();
}

std::string scenario_profit_csv(const Eigen::VectorXd& profits) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(profits.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return profits[a] < profits[b]; });
  std::ostringstream os;
  os << "# schema: aeos-scenario-profits/1\n";
  os << "rank,scenario,profit\n";
  for (std::size_t r = 0; r < order.size(); ++r) {
    os << r << ',' << order[r] << ',' << format_real(profits[order[r]]) << '\n';
  }
  return os.str();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw Error("write failed for " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace aeos::io
