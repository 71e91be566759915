#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cidan/config.hpp"
#include "cidan/workloads.hpp"

namespace cidan {

using ReportJson = nlohmann::ordered_json;

// One regression metric against the stored reference constants.
struct MetricCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance_frac = 0.0;
  bool pass = false;

  double rel_error() const {
    return expected == 0.0 ? 0.0 : std::abs(actual - expected) / std::abs(expected);
  }
};

struct CompareReport {
  std::vector<MetricCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Reference constants (normalized tables) with per-metric tolerances.
ReportJson load_targets(const std::string& path);

// Full microbenchmark sweep: per (op, size, backend) latency/energy/
// throughput plus normalized columns (cidan = 1).
ReportJson run_microbench_suite(const ExperimentConfig& cfg,
                                const std::vector<std::uint64_t>& sizes,
                                const std::vector<RowFunc>& ops,
                                const std::vector<BackendKind>& backends);

// The single source of regression truth: replays the experiments and checks
// every stored constant at its stored tolerance.
CompareReport compare_against_targets(const ExperimentConfig& cfg, const ReportJson& targets);

// Deterministic report emission: results JSON (with config echo, hash and
// seed) plus one trace CSV per recorded run; returns the JSON path.
std::string emit_report(const ReportJson& results, const ExperimentConfig& cfg,
                        const std::string& out_dir, const std::string& stem);

// Recomputation check: re-derive latency/energy of every trace CSV referenced
// by the report from the echoed config and compare with the stored numbers.
bool verify_report(const std::string& report_json_path);

}  // namespace cidan
