#include "cidan/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cidan/errors.hpp"

namespace cidan {

namespace {

ReportJson counts_json(const MacroCounts& m) {
  return ReportJson{{"aap", m.aap},   {"ap", m.ap},     {"act", m.act},
                    {"wr", m.wr},     {"prea", m.prea}, {"compute_cycles", m.compute_cycles}};
}

std::string run_name(RowFunc op, std::uint64_t size, BackendKind backend) {
  std::ostringstream os;
  os << to_string(op) << "_" << size << "_" << to_string(backend);
  return os.str();
}

GraphDataset synthetic_graph(std::uint64_t seed, int n, double p) {
  GraphDataset g;
  g.name = "synthetic";
  g.vertex_count = n;
  g.adjacency.assign(static_cast<std::size_t>(n), BitRow(static_cast<std::size_t>(n)));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng) < p) g.add_edge(u, v);
  return g;
}

std::string random_dna(std::uint64_t seed, std::size_t len) {
  static const char alphabet[] = {'A', 'C', 'G', 'T'};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 3);
  std::string s(len, 'A');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

}  // namespace

ReportJson load_targets(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("targets file not found: " + path);
  ReportJson j;
  in >> j;
  return j;
}

ReportJson run_microbench_suite(const ExperimentConfig& cfg,
                                const std::vector<std::uint64_t>& sizes,
                                const std::vector<RowFunc>& ops,
                                const std::vector<BackendKind>& backends) {
  ReportJson suite;
  suite["kind"] = "microbench_suite";
  suite["runs"] = ReportJson::array();
  for (RowFunc op : ops) {
    for (std::uint64_t size : sizes) {
      for (BackendKind backend : backends) {
        if (!supports(backend, op)) {
          suite["runs"].push_back({{"name", run_name(op, size, backend)},
                                   {"op", to_string(op)},
                                   {"size_bits", size},
                                   {"backend", to_string(backend)},
                                   {"supported", false}});
          continue;
        }
        MicrobenchSpec spec{op, size, backend};
        MicrobenchResult r = run_microbench(spec, cfg);
        suite["runs"].push_back({{"name", run_name(op, size, backend)},
                                 {"op", to_string(op)},
                                 {"size_bits", size},
                                 {"backend", to_string(backend)},
                                 {"supported", true},
                                 {"chunks", r.chunks},
                                 {"latency_ns", r.stats.latency_ns},
                                 {"energy_pj", r.stats.energy_pj},
                                 {"throughput_gops", r.throughput_gops},
                                 {"macro_counts", counts_json(r.stats.macro_counts)}});
      }
    }
  }

  // Normalized columns (cidan = 1), recomputable from the runs block.
  ReportJson norm = ReportJson::object();
  for (RowFunc op : ops) {
    ReportJson per_size = ReportJson::object();
    for (std::uint64_t size : sizes) {
      double cidan_lat = 0.0, cidan_en = 0.0;
      for (const auto& run : suite["runs"])
        if (run["op"] == to_string(op) && run["size_bits"] == size &&
            run["backend"] == "cidan" && run["supported"].get<bool>()) {
          cidan_lat = run["latency_ns"].get<double>();
          cidan_en = run["energy_pj"].get<double>();
        }
      if (cidan_lat == 0.0) continue;
      ReportJson lat = ReportJson::object(), en = ReportJson::object();
      for (const auto& run : suite["runs"]) {
        if (run["op"] != to_string(op) || run["size_bits"] != size ||
            !run["supported"].get<bool>())
          continue;
        const std::string b = run["backend"].get<std::string>();
        lat[b] = run["latency_ns"].get<double>() / cidan_lat;
        en[b] = run["energy_pj"].get<double>() / cidan_en;
      }
      per_size[std::to_string(size)] = {{"latency", lat}, {"energy", en}};
    }
    norm[to_string(op)] = per_size;
  }
  suite["normalized"] = norm;
  return suite;
}

namespace {

void check(CompareReport& report, const std::string& name, double expected, double actual,
           double tol) {
  MetricCheck c;
  c.name = name;
  c.expected = expected;
  c.actual = actual;
  c.tolerance_frac = tol;
  c.pass = std::abs(actual - expected) <= tol * std::abs(expected);
  report.checks.push_back(c);
}

}  // namespace

CompareReport compare_against_targets(const ExperimentConfig& cfg, const ReportJson& targets) {
  CompareReport report;
  const auto& mb = targets.at("microbench");
  const double lat_tol = mb.at("latency_ratio_tolerance").get<double>();
  const double stab_tol = mb.at("size_stability_tolerance").get<double>();
  const double thr_tol = mb.at("throughput_tolerance").get<double>();
  const double en_tol = mb.at("energy_ratio_tolerance").get<double>();

  const std::vector<std::uint64_t> sizes = {1ULL << 20, 2ULL << 20, 4ULL << 20};
  const std::vector<RowFunc> ops = {RowFunc::Not, RowFunc::And, RowFunc::Or, RowFunc::Xor};
  const std::vector<BackendKind> backends = {BackendKind::Cidan, BackendKind::Redram,
                                             BackendKind::Ambit};
  ReportJson suite = run_microbench_suite(cfg, sizes, ops, backends);
  const auto& norm = suite.at("normalized");

  for (const auto& [op, row] : mb.at("latency_ratio").items()) {
    for (const auto& [backend, expected] : row.items()) {
      std::vector<double> per_size;
      for (std::uint64_t size : sizes)
        per_size.push_back(
            norm.at(op).at(std::to_string(size)).at("latency").at(backend).get<double>());
      check(report, "latency_ratio/" + op + "/" + backend, expected.get<double>(),
            per_size.back(), lat_tol);
      for (std::size_t i = 0; i + 1 < per_size.size(); ++i)
        check(report, "latency_ratio_stability/" + op + "/" + backend + "/size" +
                          std::to_string(i),
              per_size.back(), per_size[i], stab_tol);
    }
  }

  for (const auto& [backend, row] : mb.at("throughput_gops").items())
    for (const auto& [op, expected] : row.items()) {
      bool found = false;
      double actual = 0.0;
      for (const auto& run : suite["runs"])
        if (run["op"] == op && run["backend"] == backend &&
            run["size_bits"] == sizes.back() && run["supported"].get<bool>()) {
          actual = run["throughput_gops"].get<double>();
          found = true;
        }
      if (found)
        check(report, "throughput/" + backend + "/" + op, expected.get<double>(), actual,
              thr_tol);
    }

  for (const auto& [op, row] : mb.at("energy_ratio").items())
    for (const auto& [backend, expected] : row.items())
      check(report, "energy_ratio/" + op + "/" + backend, expected.get<double>(),
            norm.at(op).at(std::to_string(sizes.back())).at("energy").at(backend).get<double>(),
            en_tol);

  // Graph matching index: per-query mix is one AND plus one OR, so the
  // dataset ratio must track the microbench ratio.
  {
    const auto& gt = targets.at("graph");
    const double tol = gt.at("tolerance").get<double>();
    GraphDataset g = synthetic_graph(cfg.seed, 48, 0.25);
    WorkloadStats cidan = run_matching_dataset(g, BackendKind::Cidan, cfg, 6);
    for (const auto& [backend, expected] : gt.at("latency_ratio").items()) {
      WorkloadStats other = run_matching_dataset(g, *backend_from_string(backend), cfg, 6);
      check(report, "graph_latency_ratio/" + backend, expected.get<double>(),
            other.total_ns() / cidan.total_ns(), tol);
    }
  }

  // DNA mapping ratios.
  {
    const auto& dt = targets.at("dna");
    const double tol = dt.at("tolerance").get<double>();
    const std::string pattern = random_dna(cfg.seed + 1, 24);
    const std::string text = random_dna(cfg.seed + 2, 96);
    MyersResult cidan = myers_search(pattern, text, BackendKind::Cidan, cfg);
    for (const auto& [backend, expected] : dt.at("latency_ratio").items()) {
      MyersResult other = myers_search(pattern, text, *backend_from_string(backend), cfg);
      check(report, "dna_latency_ratio/" + backend, expected.get<double>(),
            other.stats.total_ns() / cidan.stats.total_ns(), tol);
    }
  }

  // End-to-end encryption under the documented host profile
  // (calibration-dependent).
  {
    const auto& at = targets.at("aes");
    const double tol = at.at("tolerance").get<double>();
    std::mt19937_64 rng(cfg.seed + 3);
    // Full-lane batch: the shipped host profile is calibrated for the
    // steady state where every lane carries a block.
    std::vector<std::array<std::uint8_t, 16>> blocks(
        static_cast<std::size_t>(cfg.geometry.row_bits()));
    for (auto& b : blocks)
      for (auto& v : b) v = static_cast<std::uint8_t>(rng());
    std::vector<std::uint8_t> key(16);
    for (auto& v : key) v = static_cast<std::uint8_t>(rng());
    AesResult cidan = aes_encrypt(blocks, key, BackendKind::Cidan, cfg);
    for (const auto& [backend, expected] : at.at("latency_ratio").items()) {
      AesResult other = aes_encrypt(blocks, key, *backend_from_string(backend), cfg);
      check(report, "aes_latency_ratio/" + backend, expected.get<double>(),
            other.stats.total_ns() / cidan.stats.total_ns(), tol);
    }
  }

  return report;
}

std::string emit_report(const ReportJson& results, const ExperimentConfig& cfg,
                        const std::string& out_dir, const std::string& stem) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  ReportJson j = results;
  j["config"] = ReportJson::parse(config_to_json(cfg));
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.seed;
  const std::string path = (fs::path(out_dir) / (stem + ".json")).string();
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << "\n";
  return path;
}

bool verify_report(const std::string& report_json_path) {
  namespace fs = std::filesystem;
  std::ifstream in(report_json_path);
  if (!in) throw std::runtime_error("report not found: " + report_json_path);
  ReportJson j;
  in >> j;
  const ExperimentConfig cfg = parse_config(j.at("config").dump());
  const fs::path dir = fs::path(report_json_path).parent_path();

  bool ok = true;
  if (!j.contains("runs")) return true;
  for (const auto& run : j.at("runs")) {
    if (!run.contains("trace_csv")) continue;
    std::ifstream tf(dir / run.at("trace_csv").get<std::string>());
    if (!tf) return false;
    CommandTrace trace = read_trace_csv(tf, cfg.timing);
    const double lat = trace.total_latency;
    const double en = energy_of(trace, cfg.energy);
    ok = ok && std::abs(lat - run.at("latency_ns").get<double>()) <= 1e-6 * lat;
    ok = ok && std::abs(en - run.at("energy_pj").get<double>()) <= 1e-6 * en;
  }
  return ok;
}

}  // namespace cidan
