#pragma once

// Versioned JSON documents and CSV tables.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "aeos/heuristics.hpp"
#include "aeos/model.hpp"
#include "aeos/uncertainty.hpp"

namespace aeos::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kInstanceFormat = "aeos-instance";
inline constexpr const char* kScheduleFormat = "aeos-schedule";
inline constexpr const char* kScenarioFormat = "aeos-scenarios";
inline constexpr const char* kManifestFormat = "aeos-manifest";
inline constexpr const char* kConfigFormat = "aeos-config";

Json to_json(const Instance& instance);
Instance instance_from_json(const Json& j);

Json to_json(const Schedule& schedule);
Schedule schedule_from_json(const Json& j);

/// Outcome rows are hex strings of bits packed per window, low bit first.
Json to_json(const ScenarioMatrix& scenarios);
ScenarioMatrix scenarios_from_json(const Json& j);

Json to_json(const ValidationReport& report);

Json to_json(const SolverConfig& config);
/// Missing keys keep their defaults; unknown keys are an Error.
SolverConfig config_from_json(const Json& j, SolverConfig base = {});

struct RunManifest {
  std::string instance_path;
  std::uint64_t instance_seed = 0;
  SolverConfig config;
  std::string tool_version;
  std::string schedule_path;
  std::string trace_path;
  double f0 = 0.0;
  double f_best = 0.0;
  std::size_t targets_assigned = 0;
  std::size_t sample_size = 0;
  long iterations = 0;
  double runtime_s = 0.0;
};

Json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const Json& j);

/// CSV float formatting: 9 significant digits.
std::string format_real(double v);

std::string trace_csv(const std::vector<TraceRow>& trace);
/// Ascending scenario profits with their original scenario index.
std::string scenario_profit_csv(const Eigen::VectorXd& profits);

std::string read_text(const std::filesystem::path& path);
/// Writes via a temporary file and rename so readers never see partial output.
void write_text(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace aeos::io
