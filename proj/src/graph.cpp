#include <algorithm>
#include <deque>
#include <istream>
#include <sstream>

#include "cidan/errors.hpp"
#include "cidan/workloads.hpp"

namespace cidan {

void GraphDataset::add_edge(int u, int v) {
  const int need = std::max(u, v) + 1;
  if (need > vertex_count) {
    vertex_count = need;
    for (auto& row : adjacency) {
      BitRow wider(static_cast<std::size_t>(vertex_count));
      for (std::size_t i = 0; i < row.size(); ++i)
        if (row.get(i)) wider.set(i, true);
      row = std::move(wider);
    }
    adjacency.resize(static_cast<std::size_t>(vertex_count),
                     BitRow(static_cast<std::size_t>(vertex_count)));
  }
  adjacency[static_cast<std::size_t>(u)].set(static_cast<std::size_t>(v), true);
  adjacency[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(u), true);
}

GraphDataset load_edge_list(std::istream& in, const std::string& name) {
  GraphDataset g;
  g.name = name;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long u, v;
    if (!(ss >> u >> v))
      throw ParseError("edge list: expected 'u v' on line " + std::to_string(lineno));
    if (u < 0 || v < 0) throw ParseError("edge list: negative vertex id", lineno);
    if (u == v) continue;  // self loops carry no matching information
    g.add_edge(static_cast<int>(u), static_cast<int>(v));
  }
  return g;
}

std::vector<int> partition_graph(const GraphDataset& g, int banks) {
  if (banks <= 0) throw std::invalid_argument("partition_graph: need at least one bank");
  const int n = g.vertex_count;
  std::vector<int> assignment(static_cast<std::size_t>(n), -1);
  std::vector<std::size_t> load(static_cast<std::size_t>(banks), 0);

  auto pick_bank = [&]() {
    int best = 0;
    for (int b = 1; b < banks; ++b)
      if (load[static_cast<std::size_t>(b)] < load[static_cast<std::size_t>(best)]) best = b;
    return best;
  };

  // BFS order keeps neighborhoods together; always filling the least-loaded
  // bank keeps the split within one vertex of even.
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int start = 0; start < n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::deque<int> queue = {start};
    seen[static_cast<std::size_t>(start)] = true;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      const int bank = pick_bank();
      assignment[static_cast<std::size_t>(v)] = bank;
      load[static_cast<std::size_t>(bank)] += 1;
      const BitRow& row = g.adjacency[static_cast<std::size_t>(v)];
      for (int u = 0; u < n; ++u) {
        if (seen[static_cast<std::size_t>(u)] || !row.get(static_cast<std::size_t>(u))) continue;
        seen[static_cast<std::size_t>(u)] = true;
        queue.push_back(u);
      }
    }
  }
  return assignment;
}

namespace {

// Stage one adjacency row (padded/chunked to row width) into memory.
std::vector<RowRef> stage_adjacency(MemoryImage& mem, const BitRow& adj, int bank,
                                    int first_row) {
  const std::size_t row_bits = static_cast<std::size_t>(mem.geometry().row_bits());
  const std::size_t chunks = (adj.size() + row_bits - 1) / row_bits;
  std::vector<RowRef> refs;
  for (std::size_t c = 0; c < chunks; ++c) {
    BitRow row(row_bits);
    for (std::size_t i = 0; i < row_bits && c * row_bits + i < adj.size(); ++i)
      row.set(i, adj.get(c * row_bits + i));
    const RowRef ref{bank, first_row + static_cast<int>(c)};
    mem.write_row(ref, row);
    refs.push_back(ref);
  }
  return refs;
}

}  // namespace

MatchingResult matching_index(const GraphDataset& g, int i, int j, BackendKind backend,
                              const ExperimentConfig& cfg) {
  if (i == j || i < 0 || j < 0 || i >= g.vertex_count || j >= g.vertex_count)
    throw std::invalid_argument("matching_index: invalid vertex pair");

  MemoryImage mem(cfg.geometry);
  DeviceScheduler sched(cfg.timing, cfg.geometry);
  MatchingResult out;
  WorkloadStats& stats = out.stats;

  const auto rows_i = stage_adjacency(mem, g.adjacency[static_cast<std::size_t>(i)], 0, 0);
  const auto rows_j = stage_adjacency(mem, g.adjacency[static_cast<std::size_t>(j)], 1, 0);

  std::size_t common = 0, total = 0;
  for (std::size_t c = 0; c < rows_i.size(); ++c) {
    const RowRef and_dest{2, static_cast<int>(2 * c)};
    const RowRef or_dest{2, static_cast<int>(2 * c + 1)};
    RunStats sa = exec_rowop(backend, RowFunc::And, mem, sched, rows_i[c], rows_j[c], and_dest);
    RunStats so = exec_rowop(backend, RowFunc::Or, mem, sched, rows_i[c], rows_j[c], or_dest);
    stats.pim.macro_counts += sa.macro_counts;
    stats.pim.macro_counts += so.macro_counts;
    stats.op_mix["and"] += 1;
    stats.op_mix["or"] += 1;
    common += mem.row(and_dest).popcount();
    total += mem.row(or_dest).popcount();
  }

  stats.pim.trace.commands = sched.trace();
  stats.pim.trace.finalize(cfg.timing);
  stats.pim.latency_ns = stats.pim.trace.total_latency;
  stats.pim.energy_pj = energy_of(stats.pim.trace, cfg.energy);
  stats.host_ns = 2.0 * static_cast<double>(rows_i.size()) * cfg.host_cost.ns_per_popcount +
                  cfg.host_cost.ns_per_division;

  out.value = total == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(total);
  return out;
}

WorkloadStats run_matching_dataset(const GraphDataset& g, BackendKind backend,
                                   const ExperimentConfig& cfg, int query_count) {
  if (g.vertex_count < 2) throw std::invalid_argument("matching dataset: graph too small");

  // The measured phase is the in-memory compute on bank-compatible operand
  // rows; queries are drawn deterministically from the seeded generator.
  MemoryImage mem(cfg.geometry);
  DeviceScheduler sched(cfg.timing, cfg.geometry);
  WorkloadStats stats;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> pick(0, g.vertex_count - 1);

  const std::size_t row_bits = static_cast<std::size_t>(cfg.geometry.row_bits());
  const std::size_t chunks_per_vertex =
      (static_cast<std::size_t>(g.vertex_count) + row_bits - 1) / row_bits;
  const int groups = cfg.geometry.group_count();

  int row_cursor = 0;
  for (int q = 0; q < query_count; ++q) {
    int i = pick(rng), j = pick(rng);
    if (i == j) j = (j + 1) % g.vertex_count;
    const int gbase = (q % groups) * cfg.geometry.bank_group_size;
    const auto rows_i =
        stage_adjacency(mem, g.adjacency[static_cast<std::size_t>(i)], gbase + 0, row_cursor);
    const auto rows_j =
        stage_adjacency(mem, g.adjacency[static_cast<std::size_t>(j)], gbase + 1, row_cursor);
    for (std::size_t c = 0; c < rows_i.size(); ++c) {
      const RowRef and_dest{gbase + 2, row_cursor + static_cast<int>(c)};
      const RowRef or_dest{gbase + 3, row_cursor + static_cast<int>(c)};
      RunStats sa = exec_rowop(backend, RowFunc::And, mem, sched, rows_i[c], rows_j[c], and_dest);
      RunStats so = exec_rowop(backend, RowFunc::Or, mem, sched, rows_i[c], rows_j[c], or_dest);
      stats.pim.macro_counts += sa.macro_counts;
      stats.pim.macro_counts += so.macro_counts;
      stats.op_mix["and"] += 1;
      stats.op_mix["or"] += 1;
    }
    row_cursor += static_cast<int>(chunks_per_vertex);
    if (row_cursor + static_cast<int>(chunks_per_vertex) >=
        cfg.geometry.rows_per_bank - kComputeRowCount)
      row_cursor = 0;
    stats.host_ns += 2.0 * static_cast<double>(rows_i.size()) * cfg.host_cost.ns_per_popcount +
                     cfg.host_cost.ns_per_division;
  }

  stats.pim.trace.commands = sched.trace();
  stats.pim.trace.finalize(cfg.timing);
  stats.pim.latency_ns = stats.pim.trace.total_latency;
  stats.pim.energy_pj = energy_of(stats.pim.trace, cfg.energy);
  return stats;
}

}  // namespace cidan
