// cidansim: bulk-bitwise in-DRAM computing simulator CLI.
//
// Subcommands: microbench, aes, graph, dna, compare, check-trace.
// Results are written as JSON (with the config echo, its hash and the seed)
// plus one command-trace CSV per simulated run; every printed ratio can be
// recomputed from those files alone.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cidan/bbop.hpp"
#include "cidan/report.hpp"
#include "cidan/workloads.hpp"

namespace fs = std::filesystem;
using namespace cidan;

namespace {

std::vector<BackendKind> parse_backends(const std::string& csv) {
  std::vector<BackendKind> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = backend_from_string(item);
    if (!b) throw CLI::ValidationError("unknown backend '" + item + "'");
    out.push_back(*b);
  }
  if (out.empty()) throw CLI::ValidationError("no backends given");
  return out;
}

ExperimentConfig load_cfg(const std::string& path, std::uint64_t seed_override,
                          bool seed_given) {
  ExperimentConfig cfg = path.empty() ? ExperimentConfig{} : load_config(path);
  if (seed_given) cfg.seed = seed_override;
  cfg.validate();
  return cfg;
}

void write_text(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path().empty() ? "." : p.parent_path().string());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string trace_csv_string(const CommandTrace& trace) {
  std::ostringstream os;
  write_trace_csv(os, trace);
  return os.str();
}

int cmd_microbench(const std::string& config_path, std::uint64_t seed, bool seed_given,
                   const std::string& op_name, const std::string& size_text,
                   const std::string& backends_csv, const std::string& out_dir) {
  ExperimentConfig cfg = load_cfg(config_path, seed, seed_given);
  auto op = rowfunc_from_string(op_name);
  if (!op) throw CLI::ValidationError("unknown op '" + op_name + "'");
  const std::uint64_t size = parse_size_bits(size_text);
  const auto backends = parse_backends(backends_csv);

  ReportJson results;
  results["kind"] = "microbench";
  results["runs"] = ReportJson::array();
  double cidan_lat = 0.0, cidan_en = 0.0;
  std::vector<std::pair<std::string, CommandTrace>> traces;

  for (BackendKind b : backends) {
    if (!supports(b, *op)) {
      std::cout << to_string(b) << ": unsupported\n";
      continue;
    }
    MicrobenchResult r = run_microbench({*op, size, b}, cfg);
    const std::string name = std::string(to_string(*op)) + "_" + to_string(b);
    results["runs"].push_back({{"name", name},
                               {"op", to_string(*op)},
                               {"size_bits", size},
                               {"backend", to_string(b)},
                               {"chunks", r.chunks},
                               {"latency_ns", r.stats.latency_ns},
                               {"energy_pj", r.stats.energy_pj},
                               {"throughput_gops", r.throughput_gops},
                               {"macro_counts",
                                ReportJson{{"aap", r.stats.macro_counts.aap},
                                           {"ap", r.stats.macro_counts.ap},
                                           {"act", r.stats.macro_counts.act},
                                           {"wr", r.stats.macro_counts.wr},
                                           {"prea", r.stats.macro_counts.prea},
                                           {"compute_cycles",
                                            r.stats.macro_counts.compute_cycles}}},
                               {"trace_csv", name + ".csv"}});
    traces.emplace_back(name, r.stats.trace);
    if (b == BackendKind::Cidan) {
      cidan_lat = r.stats.latency_ns;
      cidan_en = r.stats.energy_pj;
    }
  }

  std::cout << "op=" << to_string(*op) << " size=" << size << "b\n";
  std::cout << std::left << std::setw(10) << "backend" << std::setw(16) << "latency_ns"
            << std::setw(14) << "energy_uJ" << std::setw(12) << "GOps/s" << std::setw(12)
            << "lat(C=1)" << std::setw(12) << "en(C=1)" << "\n";
  for (const auto& run : results["runs"]) {
    const double lat = run["latency_ns"].get<double>();
    const double en = run["energy_pj"].get<double>();
    std::cout << std::left << std::setw(10) << run["backend"].get<std::string>()
              << std::setw(16) << lat << std::setw(14) << en / 1e6 << std::setw(12)
              << run["throughput_gops"].get<double>() << std::setw(12)
              << (cidan_lat ? lat / cidan_lat : 0.0) << std::setw(12)
              << (cidan_en ? en / cidan_en : 0.0) << "\n";
  }

  const std::string json_path = emit_report(results, cfg, out_dir, "microbench");
  for (const auto& [name, trace] : traces)
    write_text(fs::path(out_dir) / (name + ".csv"), trace_csv_string(trace));
  std::cout << "report: " << json_path << "\n";
  return 0;
}

std::vector<std::uint8_t> parse_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw CLI::ValidationError("hex string must have even length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(std::stoul(hex.substr(2 * i, 2), nullptr, 16));
  return out;
}

int cmd_aes(const std::string& config_path, std::uint64_t seed, bool seed_given, int key_bits,
            int blocks_n, const std::string& backends_csv, const std::string& out_dir,
            bool kat, const std::string& key_hex, const std::string& plaintext_hex) {
  ExperimentConfig cfg = load_cfg(config_path, seed, seed_given);
  const auto backends = parse_backends(backends_csv);

  std::vector<std::array<std::uint8_t, 16>> blocks(static_cast<std::size_t>(blocks_n));
  std::vector<std::uint8_t> key(static_cast<std::size_t>(key_bits / 8));
  if (kat) {
    // Standard known-answer vector: 00112233..eeff plaintext, sequential key.
    blocks.assign(1, {});
    for (int i = 0; i < 16; ++i)
      blocks[0][static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i * 0x11);
    for (std::size_t i = 0; i < key.size(); ++i) key[i] = static_cast<std::uint8_t>(i);
  } else if (!key_hex.empty() || !plaintext_hex.empty()) {
    key = parse_hex(key_hex);
    const auto pt = parse_hex(plaintext_hex);
    if (pt.empty() || pt.size() % 16 != 0)
      throw CLI::ValidationError("plaintext hex must be a multiple of 16 bytes");
    blocks.assign(pt.size() / 16, {});
    for (std::size_t i = 0; i < pt.size(); ++i) blocks[i / 16][i % 16] = pt[i];
  } else {
    std::mt19937_64 rng(cfg.seed);
    for (auto& b : blocks)
      for (auto& v : b) v = static_cast<std::uint8_t>(rng());
    for (auto& v : key) v = static_cast<std::uint8_t>(rng());
  }

  ReportJson results;
  results["kind"] = "aes";
  results["key_bits"] = key_bits;
  results["blocks"] = blocks.size();
  results["runs"] = ReportJson::array();
  double cidan_total = 0.0;

  for (BackendKind b : backends) {
    AesResult r = aes_encrypt(blocks, key, b, cfg);
    ReportJson mix = ReportJson::object();
    for (const auto& [k, v] : r.stats.op_mix) mix[k] = v;
    results["runs"].push_back({{"backend", to_string(b)},
                               {"pim_latency_ns", r.stats.pim.latency_ns},
                               {"host_ns", r.stats.host_ns},
                               {"total_ns", r.stats.total_ns()},
                               {"energy_pj", r.stats.pim.energy_pj},
                               {"offloaded_share", r.offloaded_share},
                               {"op_mix", mix}});
    if (b == BackendKind::Cidan) cidan_total = r.stats.total_ns();
    std::ostringstream hex;
    for (auto v : r.ciphertext[0]) hex << std::hex << std::setw(2) << std::setfill('0')
                                        << static_cast<int>(v);
    std::cout << to_string(b) << ": block0 ciphertext " << hex.str() << "\n";
  }

  std::cout << std::left << std::setw(10) << "backend" << std::setw(16) << "total_ns"
            << std::setw(12) << "lat(C=1)" << std::setw(12) << "offload" << "\n";
  for (const auto& run : results["runs"])
    std::cout << std::left << std::setw(10) << run["backend"].get<std::string>()
              << std::setw(16) << run["total_ns"].get<double>() << std::setw(12)
              << (cidan_total ? run["total_ns"].get<double>() / cidan_total : 0.0)
              << std::setw(12) << run["offloaded_share"].get<double>() << "\n";
  std::cout << "note: end-to-end ratio depends on the aes_host_cost calibration profile\n";
  std::cout << "report: " << emit_report(results, cfg, out_dir, "aes") << "\n";
  return 0;
}

int cmd_graph(const std::string& config_path, std::uint64_t seed, bool seed_given,
              const std::string& edges_path, int queries, const std::string& backends_csv,
              const std::string& out_dir) {
  ExperimentConfig cfg = load_cfg(config_path, seed, seed_given);
  const auto backends = parse_backends(backends_csv);

  std::ifstream in(edges_path);
  if (!in) throw CLI::ValidationError("edge list not found: " + edges_path);
  GraphDataset g = load_edge_list(in, fs::path(edges_path).stem().string());

  ReportJson results;
  results["kind"] = "graph_matching";
  results["dataset"] = g.name;
  results["vertices"] = g.vertex_count;
  results["queries"] = queries;
  results["runs"] = ReportJson::array();
  double cidan_total = 0.0;
  for (BackendKind b : backends) {
    WorkloadStats s = run_matching_dataset(g, b, cfg, queries);
    results["runs"].push_back({{"backend", to_string(b)},
                               {"pim_latency_ns", s.pim.latency_ns},
                               {"host_ns", s.host_ns},
                               {"total_ns", s.total_ns()},
                               {"energy_pj", s.pim.energy_pj}});
    if (b == BackendKind::Cidan) cidan_total = s.total_ns();
  }
  std::cout << std::left << std::setw(10) << "backend" << std::setw(16) << "total_ns"
            << std::setw(12) << "lat(C=1)" << "\n";
  for (const auto& run : results["runs"])
    std::cout << std::left << std::setw(10) << run["backend"].get<std::string>()
              << std::setw(16) << run["total_ns"].get<double>() << std::setw(12)
              << (cidan_total ? run["total_ns"].get<double>() / cidan_total : 0.0) << "\n";
  std::cout << "report: " << emit_report(results, cfg, out_dir, "graph") << "\n";
  return 0;
}

int cmd_dna(const std::string& config_path, std::uint64_t seed, bool seed_given,
            const std::string& pattern, const std::string& text,
            const std::string& backends_csv, const std::string& out_dir, bool pim_add) {
  ExperimentConfig cfg = load_cfg(config_path, seed, seed_given);
  const auto backends = parse_backends(backends_csv);
  const MyersAddStrategy strategy =
      pim_add ? MyersAddStrategy::PimTransposedAdd : MyersAddStrategy::HostAdd;

  ReportJson results;
  results["kind"] = "dna_mapping";
  results["pattern_len"] = pattern.size();
  results["text_len"] = text.size();
  results["runs"] = ReportJson::array();
  double cidan_total = 0.0;
  for (BackendKind b : backends) {
    MyersResult r = myers_search(pattern, text, b, cfg, strategy);
    ReportJson mix = ReportJson::object();
    for (const auto& [k, v] : r.stats.op_mix) mix[k] = v;
    results["runs"].push_back({{"backend", to_string(b)},
                               {"pim_latency_ns", r.stats.pim.latency_ns},
                               {"host_ns", r.stats.host_ns},
                               {"total_ns", r.stats.total_ns()},
                               {"energy_pj", r.stats.pim.energy_pj},
                               {"final_distance", r.distances.empty() ? -1 : r.distances.back()},
                               {"op_mix", mix}});
    if (b == BackendKind::Cidan) cidan_total = r.stats.total_ns();
  }
  std::cout << std::left << std::setw(10) << "backend" << std::setw(16) << "total_ns"
            << std::setw(12) << "lat(C=1)" << "\n";
  for (const auto& run : results["runs"])
    std::cout << std::left << std::setw(10) << run["backend"].get<std::string>()
              << std::setw(16) << run["total_ns"].get<double>() << std::setw(12)
              << (cidan_total ? run["total_ns"].get<double>() / cidan_total : 0.0) << "\n";
  std::cout << "report: " << emit_report(results, cfg, out_dir, "dna") << "\n";
  return 0;
}

int cmd_compare(const std::string& config_path, std::uint64_t seed, bool seed_given,
                const std::string& targets_path, const std::string& out_dir) {
  ExperimentConfig cfg = load_cfg(config_path, seed, seed_given);
  ReportJson targets = load_targets(targets_path);
  CompareReport report = compare_against_targets(cfg, targets);

  ReportJson results;
  results["kind"] = "compare";
  results["targets_file"] = targets_path;
  results["checks"] = ReportJson::array();
  int failed = 0;
  for (const auto& c : report.checks) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(44) << c.name
              << " expected " << std::setw(10) << c.expected << " actual " << std::setw(12)
              << c.actual << " (tol ±" << c.tolerance_frac * 100 << "%)\n";
    results["checks"].push_back({{"name", c.name},
                                 {"expected", c.expected},
                                 {"actual", c.actual},
                                 {"tolerance_frac", c.tolerance_frac},
                                 {"pass", c.pass}});
    if (!c.pass) ++failed;
  }
  std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " checks failed")
            << "\n";
  std::cout << "report: " << emit_report(results, cfg, out_dir, "compare") << "\n";
  return failed == 0 ? 0 : 1;
}

int cmd_check_trace(const std::string& config_path, const std::string& trace_path) {
  ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
  std::ifstream in(trace_path);
  if (!in) throw CLI::ValidationError("trace not found: " + trace_path);
  CommandTrace trace = read_trace_csv(in, cfg.timing);
  const auto violations = check_trace(trace, cfg.timing);
  if (violations.empty()) {
    std::cout << "ok: " << trace.commands.size() << " commands, no violations\n";
    return 0;
  }
  for (const auto& v : violations)
    std::cout << "violation[" << v.rule << "] at command " << v.command_index << ": "
              << v.detail << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bulk-bitwise in-DRAM computing simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON config file (defaults built in)");
  auto* seed_opt = app.add_option("--seed", seed, "seed override");
  app.add_option("--out", out_dir, "output directory");

  auto* mb = app.add_subcommand("microbench", "bulk bitwise op over a large vector");
  std::string op = "and", size = "4Mb", backends = "cidan,redram,ambit";
  mb->add_option("--op", op, "copy|not|and|or|xor|add");
  mb->add_option("--size", size, "vector size, e.g. 4Mb (2^20-bit megabits)");
  mb->add_option("--backends", backends, "comma list: cidan,redram,ambit,drisa");

  auto* aes = app.add_subcommand("aes", "bit-sliced encryption offload");
  int key_bits = 128, blocks = 16;
  bool kat = false;
  std::string aes_backends = "cidan,redram";
  aes->add_option("--key-bits", key_bits, "128|192|256");
  aes->add_option("--blocks", blocks, "blocks batched across lanes");
  aes->add_option("--backends", aes_backends, "comma list");
  aes->add_flag("--kat", kat, "run the standard known-answer vector");
  std::string key_hex, plaintext_hex;
  aes->add_option("--key-hex", key_hex, "key as a hex string");
  aes->add_option("--plaintext-hex", plaintext_hex, "plaintext blocks as a hex string");

  auto* graph = app.add_subcommand("graph", "matching index over an edge list");
  std::string edges;
  int queries = 8;
  std::string graph_backends = "cidan,redram,ambit";
  graph->add_option("--edges", edges, "edge list file, one 'u v' per line")->required();
  graph->add_option("--queries", queries, "sampled vertex pairs");
  graph->add_option("--backends", graph_backends, "comma list");

  auto* dna = app.add_subcommand("dna", "bit-vector approximate string matching");
  std::string pattern = "ACGTACGT", text = "ACGTTACGTACGGTACGT";
  bool pim_add = false;
  std::string dna_backends = "cidan,redram,ambit";
  dna->add_option("--pattern", pattern, "pattern string");
  dna->add_option("--text", text, "text string");
  dna->add_option("--backends", dna_backends, "comma list");
  dna->add_flag("--pim-add", pim_add, "use the transposed in-memory adder");

  auto* compare = app.add_subcommand("compare", "regression against stored constants");
  std::string targets = "configs/paper_targets.json";
  compare->add_option("--against", targets,
                      "'paper' or a targets JSON path (default configs/paper_targets.json)");

  auto* check = app.add_subcommand("check-trace", "validate a trace CSV");
  std::string trace_path;
  check->add_option("trace", trace_path, "trace CSV file")->required();

  CLI11_PARSE(app, argc, argv);
  const bool seed_given = seed_opt->count() > 0;

  try {
    if (mb->parsed()) return cmd_microbench(config_path, seed, seed_given, op, size, backends,
                                            out_dir);
    if (aes->parsed())
      return cmd_aes(config_path, seed, seed_given, key_bits, blocks, aes_backends, out_dir,
                     kat, key_hex, plaintext_hex);
    if (graph->parsed())
      return cmd_graph(config_path, seed, seed_given, edges, queries, graph_backends, out_dir);
    if (dna->parsed())
      return cmd_dna(config_path, seed, seed_given, pattern, text, dna_backends, out_dir,
                     pim_add);
    if (compare->parsed()) {
      if (targets == "paper") targets = "configs/paper_targets.json";
      return cmd_compare(config_path, seed, seed_given, targets, out_dir);
    }
    if (check->parsed()) return cmd_check_trace(config_path, trace_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
