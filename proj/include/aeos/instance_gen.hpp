#pragma once

// Seeded benchmark instance generation: target placement, satellite orbits,
// visibility-window extraction and success-probability assignment.

#include <cstdint>
#include <string>
#include <vector>

#include "aeos/model.hpp"
#include "aeos/orbit.hpp"

namespace aeos {

struct GeoBox {
  std::string name;
  double lat_min_deg = 0.0;
  double lat_max_deg = 0.0;
  double lon_min_deg = 0.0;
  double lon_max_deg = 0.0;
  int count = 0;
};

/// Named interest regions used by the benchmark presets.
GeoBox region_china(int count = 150);
GeoBox region_australia(int count = 150);
GeoBox region_america(int count = 150);

enum class GenMode { Geometric, Synthetic };

/// How a satellite's horizon maps onto orbit resources in geometric mode.
enum class ResourceGranularity {
  Satellite,   // one resource per satellite; the longest pass per target is kept
  Revolution,  // one resource per ascending-node-to-ascending-node revolution
};

/// Window drawing for synthetic mode (no propagation).
struct SyntheticWindows {
  int n_orbits = 2;
  double visibility_prob = 0.6;  // chance that a target has a window on a given orbit
  double length_min_s = 60.0;
  double length_max_s = 180.0;
};

struct GenSpec {
  int n_world = 500;  // uniform over 60S-60N, 180W-180E
  std::vector<GeoBox> regions;
  double horizon_s = 86400.0;
  std::string epoch_utc = "2017-01-01T00:00:00Z";
  double profit_min = 1.0;
  double profit_max = 10.0;
  double obs_duration_min_s = 15.0;
  double obs_duration_max_s = 30.0;
  double prob_min = 0.3;
  double prob_max = 1.0;
  double step_s = 1.0;
  GenMode mode = GenMode::Geometric;
  ResourceGranularity granularity = ResourceGranularity::Satellite;
  std::vector<orbit::OrbitalElements> satellites;
  OrbitResource resource;  // template copied for each orbit resource (id overwritten)
  SyntheticWindows synthetic;

  /// Throws Error on negative counts, non-positive step or inverted ranges.
  void validate() const;
};

/// The four-satellite sun-synchronous constellation of the benchmark.
std::vector<orbit::OrbitalElements> benchmark_constellation();

/// Default resource: 30 deg pitch/roll envelope, 3 deg/s, 100 MB/s, 500 W
/// imaging, 1000 J/deg maneuvering, 7500 MB and 80 kJ capacity.
OrbitResource benchmark_resource();

/// Presets with 500, 650, 800 or 950 targets (world plus 0-3 regions).
/// Throws Error for any other count.
GenSpec benchmark_preset(int n_targets);

/// Desk-scale synthetic instance: `n_targets` targets, two orbits.
GenSpec desk_preset(int n_targets);

std::vector<Target> generate_targets(const GenSpec& spec, std::uint64_t seed);

/// Geometric visibility windows (spec.mode must be Geometric). Returns the
/// windows and the orbit resources they refer to.
struct WindowSet {
  std::vector<OrbitResource> orbits;
  std::vector<VisibleWindow> windows;
};
WindowSet compute_windows(const std::vector<Target>& targets, const GenSpec& spec,
                          std::uint64_t seed);

/// Synthetic windows drawn directly.
WindowSet synthetic_windows(const std::vector<Target>& targets, const GenSpec& spec,
                            std::uint64_t seed);

/// Full instance in either mode.
Instance generate_instance(const GenSpec& spec, std::uint64_t seed);

}  // namespace aeos
