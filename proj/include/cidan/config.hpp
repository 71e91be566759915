#pragma once

#include <cstdint>
#include <string>

#include "cidan/dram.hpp"

namespace cidan {

// Host-side costs for the stages a platform does not offload.
struct HostCostModel {
  double ns_per_host_byte = 0.0;
  double ns_per_popcount = 0.0;
  double ns_per_division = 0.0;

  HostCostModel() = default;
  HostCostModel(double byte_ns, double pop_ns, double div_ns)
      : ns_per_host_byte(byte_ns), ns_per_popcount(pop_ns), ns_per_division(div_ns) {}

  void validate() const;
};

struct ExperimentConfig {
  DramGeometry geometry;
  TimingParams timing;
  EnergyParams energy;
  HostCostModel host_cost;  // default profile (zero: platform-vs-platform ratios)
  // Documented profile for end-to-end encryption runs, calibrated for
  // full-lane batches; results under it are calibration-dependent.
  HostCostModel aes_host_cost{1.84, 2.0, 10.0};
  std::uint64_t seed = 12345;

  void validate() const;
};

// Parse a JSON config; missing sections keep the shipped defaults.
// Parse errors carry the offending location.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

std::string config_to_json(const ExperimentConfig& cfg);

// Stable FNV-1a hash of the canonical JSON form, for report provenance.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace cidan
