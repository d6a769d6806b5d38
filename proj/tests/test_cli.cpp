#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "aeos/io.hpp"
#include "commands.hpp"

using namespace aeos;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("aeos-cli-test-" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("generate, solve, validate, evaluate, replay") {
  const TempDir dir;
  const auto inst = dir / "inst.json";
  Run g = invoke({"generate", "--preset", "desk", "--n-world", "30", "--seed", "5", "--out", inst});
  REQUIRE(g.code == 0);
  CHECK(g.out.rfind("targets 30 orbits 2", 0) == 0);

  const auto sched = dir / "sched.json";
  Run s = invoke({"solve", "--instance", inst, "--samples", "40", "--niter-m", "40", "--out", sched,
               "--trace", dir / "trace.csv", "--manifest", dir / "run.json"});
  REQUIRE(s.code == 0);
  CHECK(s.out.rfind("f0 ", 0) == 0);
  CHECK(io::read_text(dir / "trace.csv").rfind("# schema: aeos-trace/1", 0) == 0);

  Run v = invoke({"validate", "--instance", inst, "--schedule", sched, "--json", dir / "report.json"});
  CHECK(v.code == 0);
  CHECK(io::read_json(dir / "report.json").contains("violations"));

  Run e = invoke({"evaluate", "--instance", inst, "--schedule", sched, "--samples", "40", "--seed", "1"});
  CHECK(e.code == 0);
  CHECK(e.out.rfind("f ", 0) == 0);

  Run rp = invoke({"replay", "--manifest", dir / "run.json", "--check"});
  CHECK(rp.code == 0);
  CHECK(rp.out.find("replay identical") != std::string::npos);

  // A tampered schedule fails validation with exit code 2.
  io::Json j = io::read_json(sched);
  if (!j["orbits"].empty() && !j["orbits"][0]["assignments"].empty()) {
    j["orbits"][0]["energy_used_j"] = -1.0;
    io::write_json(dir / "bad.json", j);
    CHECK(invoke({"validate", "--instance", inst, "--schedule", dir / "bad.json"}).code == 2);
    CHECK(invoke({"evaluate", "--instance", inst, "--schedule", dir / "bad.json", "--samples", "5"}).code == 2);
  }
}

TEST_CASE("sweep plan and run") {
  const TempDir dir;
  const auto inst = dir / "inst.json";
  REQUIRE(invoke({"generate", "--preset", "desk", "--n-world", "15", "--out", inst}).code == 0);
  Run plan = invoke({"sweep", "--instances", inst, inst, "--grid", "ccp_alpha=0.10,0.20", "--grid",
                  "ccp_epsilon=0.05,0.15", "--runs", "3", "--plan-only"});
  REQUIRE(plan.code == 0);
  CHECK(plan.out.find("rows 18") != std::string::npos);

  const auto cfg = dir / "cfg.json";
  io::Json c = io::Json::object();
  c["niter_m"] = 20;
  c["sample_size"] = 20;
  io::write_json(cfg, c);
  Run sw = invoke({"sweep", "--instances", inst, "--grid", "gamma=0.1,0.2", "--runs", "2", "--config", cfg,
                "--out", dir / "rows.csv", "--aggregate", dir / "agg.csv"});
  REQUIRE(sw.code == 0);
  const std::string rows = io::read_text(dir / "rows.csv");
  CHECK(rows.rfind("# schema: aeos-sweep/1", 0) == 0);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 2 + 4);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code != 0);
  CHECK(invoke({"solve"}).code != 0);
  CHECK(invoke({"generate", "--preset", "paper-600", "--out", "/tmp/never.json"}).code == 1);
  const Run missing = invoke({"validate", "--instance", "/nonexistent/i.json", "--schedule", "/nonexistent/s.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.rfind("error: ", 0) == 0);
}
