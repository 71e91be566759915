#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cidan/backends.hpp"
#include "cidan/config.hpp"
#include "cidan/memory.hpp"

namespace cidan {

// Shared result shape: the in-memory command stream plus priced host work.
struct WorkloadStats {
  RunStats pim;
  double host_ns = 0.0;
  std::map<std::string, std::int64_t> op_mix;  // rowop counts by function name

  double total_ns() const { return pim.latency_ns + host_ns; }
};

// ---------------------------------------------------------------------------
// Microbenchmarks: one bulk-bitwise function over a large vector.

struct MicrobenchSpec {
  RowFunc op = RowFunc::And;
  std::uint64_t vector_size_bits = 1ULL << 20;  // "1Mb"
  BackendKind backend = BackendKind::Cidan;
};

struct MicrobenchResult {
  RunStats stats;
  double throughput_gops = 0.0;  // vector bits per ns
  std::uint64_t chunks = 0;
};

// Executes the lowered plan with group-parallel pipelining under the shared
// scheduler; functional output is checked against the host oracle.
MicrobenchResult run_microbench(const MicrobenchSpec& spec, const ExperimentConfig& cfg);

// Parse "1Mb" / "512Kb" / "8192b" / plain bits ("Mb" is the power-of-two
// megabit: 2^20 bits).
std::uint64_t parse_size_bits(const std::string& text);

// ---------------------------------------------------------------------------
// AES offload: MixColumns and AddRoundKey run as bit-sliced row operations,
// SubBytes/ShiftRows stay on the host and are priced by the host model.

struct AesResult {
  std::vector<std::array<std::uint8_t, 16>> ciphertext;
  WorkloadStats stats;
  double offloaded_share = 0.0;  // fraction of baseline work moved in-memory
};

AesResult aes_encrypt(const std::vector<std::array<std::uint8_t, 16>>& blocks,
                      const std::vector<std::uint8_t>& key, BackendKind backend,
                      const ExperimentConfig& cfg, const HostCostModel* host_override = nullptr);

// ---------------------------------------------------------------------------
// Graph matching index over adjacency bit-rows.

struct GraphDataset {
  std::string name;
  int vertex_count = 0;
  std::vector<BitRow> adjacency;  // one row of vertex_count bits per vertex

  void add_edge(int u, int v);
};

GraphDataset load_edge_list(std::istream& in, const std::string& name = "graph");

// Deterministic greedy BFS partitioning; max/min bank load ratio <= 1.1 when
// vertex_count >= 10 * banks.
std::vector<int> partition_graph(const GraphDataset& g, int banks);

struct MatchingResult {
  double value = 0.0;  // |common neighbors| / |union|, 0/0 defined as 0
  WorkloadStats stats;
};

MatchingResult matching_index(const GraphDataset& g, int i, int j, BackendKind backend,
                              const ExperimentConfig& cfg);

// Dataset-level latency/energy over a deterministic sample of queries whose
// operand rows are staged bank-compatibly (the in-memory compute phase that
// the published comparisons measure).
WorkloadStats run_matching_dataset(const GraphDataset& g, BackendKind backend,
                                   const ExperimentConfig& cfg, int query_count);

// ---------------------------------------------------------------------------
// DNA mapping: bit-vector approximate matching, bitwise steps in memory.

enum class MyersAddStrategy { HostAdd, PimTransposedAdd };

struct MyersResult {
  std::vector<int> distances;  // per text position: best match ending there
  WorkloadStats stats;
};

MyersResult myers_search(const std::string& pattern, const std::string& text,
                         BackendKind backend, const ExperimentConfig& cfg,
                         MyersAddStrategy strategy = MyersAddStrategy::HostAdd);

}  // namespace cidan
