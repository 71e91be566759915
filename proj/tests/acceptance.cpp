// Acceptance suite: replays every gated claim at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.
//
// Usage: acceptance_tests [configs_dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cidan/bbop.hpp"
#include "cidan/report.hpp"
#include "cidan/workloads.hpp"
#include "edit_distance_oracle.hpp"
#include "reference_aes.hpp"

using namespace cidan;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what) {
  std::printf("criterion %2d: %s  %s\n", criterion, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

bool within(double actual, double expected, double tol) {
  return std::abs(actual - expected) <= tol * std::abs(expected);
}

std::string ratio_str(const char* name, double actual, double expected, double tol) {
  std::ostringstream os;
  os << name << "=" << actual << " (ref " << expected << " ±" << tol * 100 << "%)";
  return os.str();
}

// --- criterion 1: exhaustive truth tables --------------------------------

void criterion_truth_tables() {
  bool ok = true;
  const std::pair<TlpeFunc, int (*)(int, int)> funcs[] = {
      {TlpeFunc::Not, [](int a, int) { return a ? 0 : 1; }},
      {TlpeFunc::And, [](int a, int b) { return a & b; }},
      {TlpeFunc::Or, [](int a, int b) { return a | b; }},
      {TlpeFunc::Nand, [](int a, int b) { return 1 - (a & b); }},
      {TlpeFunc::Nor, [](int a, int b) { return 1 - (a | b); }},
      {TlpeFunc::Xor, [](int a, int b) { return a ^ b; }},
      {TlpeFunc::Xnor, [](int a, int b) { return 1 - (a ^ b); }}};
  int cases = 0;
  for (const auto& [f, oracle] : funcs) {
    const Schedule s = compile_schedule(f);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int l1 = 0; l1 < 2; ++l1)
          for (int l2 = 0; l2 < 2; ++l2) {
            const auto r = run_schedule(s, {a != 0, b != 0, false, false},
                                        TlpeState{l1 != 0, l2 != 0});
            ok = ok && r.result == (oracle(a, b) != 0);
            ++cases;
          }
  }
  const Schedule add = compile_schedule(TlpeFunc::AddBit);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int cin = 0; cin < 2; ++cin) {
        const auto r = run_schedule(add, {a != 0, b != 0, false, false},
                                    TlpeState{cin != 0, false});
        const int sum = a + b + cin;
        ok = ok && r.result == (sum % 2 == 1) && r.carry && *r.carry == (sum >= 2);
        ++cases;
      }
  report(1, ok, "exhaustive gate/adder truth tables (" + std::to_string(cases) + " cases)");
}

// --- criterion 2: functional equivalence over random rows ----------------

void criterion_functional_equivalence(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const std::size_t nbits = static_cast<std::size_t>(cfg.geometry.row_bits());
  const int trials = 10000;
  bool ok = true;
  std::string failed_cell;

  const std::vector<std::pair<BackendKind, RowFunc>> cells = {
      {BackendKind::Cidan, RowFunc::Copy},  {BackendKind::Cidan, RowFunc::Not},
      {BackendKind::Cidan, RowFunc::And},   {BackendKind::Cidan, RowFunc::Or},
      {BackendKind::Cidan, RowFunc::Xor},   {BackendKind::Cidan, RowFunc::Add},
      {BackendKind::Redram, RowFunc::Copy}, {BackendKind::Redram, RowFunc::Not},
      {BackendKind::Redram, RowFunc::And},  {BackendKind::Redram, RowFunc::Or},
      {BackendKind::Redram, RowFunc::Xor},  {BackendKind::Ambit, RowFunc::Copy},
      {BackendKind::Ambit, RowFunc::Not},   {BackendKind::Ambit, RowFunc::And},
      {BackendKind::Ambit, RowFunc::Or},    {BackendKind::Ambit, RowFunc::Xor},
      {BackendKind::Drisa, RowFunc::Copy},  {BackendKind::Drisa, RowFunc::Not},
      {BackendKind::Drisa, RowFunc::And}};

  for (const auto& [backend, func] : cells) {
    MemoryImage mem(cfg.geometry);
    DeviceScheduler sched(cfg.timing, cfg.geometry);
    const RowRef s1{0, 10}, s2{1, 10}, cin{3, 10}, dst{2, 10}, carry{3, 11};
    for (int t = 0; t < trials && ok; ++t) {
      BitRow a = BitRow::random(nbits, rng);
      BitRow b = BitRow::random(nbits, rng);
      mem.write_row(s1, a);
      mem.write_row(s2, b);
      BitRow expect;
      if (func == RowFunc::Add) {
        BitRow c = BitRow::random(nbits, rng);
        mem.write_row(cin, c);
        exec_add_rows(backend, mem, sched, s1, s2, cin, dst, carry);
        expect = a ^ b ^ c;
        ok = ok && mem.row(carry) == ((a & b) | (b & c) | (a & c));
      } else {
        exec_rowop(backend, func, mem, sched, s1, s2, dst);
        switch (func) {
          case RowFunc::Copy: expect = a; break;
          case RowFunc::Not: expect = ~a; break;
          case RowFunc::And: expect = a & b; break;
          case RowFunc::Or: expect = a | b; break;
          case RowFunc::Xor: expect = a ^ b; break;
          default: break;
        }
      }
      ok = ok && mem.row(dst) == expect;
      if (t % 500 == 499) sched.clear_trace();
    }
    if (!ok && failed_cell.empty())
      failed_cell = std::string(to_string(backend)) + "/" + to_string(func);
  }
  report(2, ok,
         ok ? "19 backend/op cells x 10000 random row pairs bit-exact"
            : "mismatch in cell " + failed_cell);
}

// --- criterion 3: command counts ------------------------------------------

void criterion_macro_counts(const ExperimentConfig& cfg) {
  bool ok = true;
  std::string detail;
  MemoryImage mem(cfg.geometry);

  auto run_counts = [&](BackendKind b, RowFunc f) {
    DeviceScheduler sched(cfg.timing, cfg.geometry);
    if (f == RowFunc::Add)
      return exec_add_rows(b, mem, sched, {0, 1}, {1, 1}, {3, 1}, {2, 1}, {3, 2}).macro_counts;
    return exec_rowop(b, f, mem, sched, {0, 1}, {1, 1}, {2, 1}).macro_counts;
  };
  const struct {
    BackendKind b;
    RowFunc f;
    MacroCounts want;
  } cells[] = {
      {BackendKind::Cidan, RowFunc::Copy, {0, 0, 2, 1, 1, 1}},
      {BackendKind::Cidan, RowFunc::Not, {0, 0, 2, 1, 1, 1}},
      {BackendKind::Cidan, RowFunc::And, {0, 0, 3, 1, 1, 1}},
      {BackendKind::Cidan, RowFunc::Or, {0, 0, 3, 1, 1, 1}},
      {BackendKind::Cidan, RowFunc::Xor, {0, 0, 3, 1, 1, 2}},
      {BackendKind::Cidan, RowFunc::Add, {0, 0, 3, 1, 1, 2}},
      {BackendKind::Redram, RowFunc::Copy, {1, 0, 0, 0, 0, 0}},
      {BackendKind::Redram, RowFunc::Not, {1, 0, 0, 0, 0, 0}},
      {BackendKind::Redram, RowFunc::And, {3, 0, 0, 0, 0, 0}},
      {BackendKind::Redram, RowFunc::Or, {3, 0, 0, 0, 0, 0}},
      {BackendKind::Redram, RowFunc::Xor, {3, 0, 0, 0, 0, 0}},
      {BackendKind::Ambit, RowFunc::Copy, {1, 0, 0, 0, 0, 0}},
      {BackendKind::Ambit, RowFunc::Not, {2, 0, 0, 0, 0, 0}},
      {BackendKind::Ambit, RowFunc::And, {4, 0, 0, 0, 0, 0}},
      {BackendKind::Ambit, RowFunc::Or, {4, 0, 0, 0, 0, 0}},
      {BackendKind::Ambit, RowFunc::Xor, {5, 2, 0, 0, 0, 0}},
      {BackendKind::Drisa, RowFunc::Copy, {0, 2, 0, 0, 0, 0}},
      {BackendKind::Drisa, RowFunc::Not, {2, 0, 0, 0, 0, 0}},
      {BackendKind::Drisa, RowFunc::And, {2, 1, 0, 0, 0, 0}},
  };
  for (const auto& c : cells) {
    const MacroCounts got = run_counts(c.b, c.f);
    if (!(got == c.want)) {
      ok = false;
      detail = std::string(to_string(c.b)) + "/" + to_string(c.f);
    }
  }
  // Undefined cells raise unsupported errors.
  for (RowFunc f : {RowFunc::Or, RowFunc::Xor, RowFunc::Add}) {
    bool threw = false;
    DeviceScheduler sched(cfg.timing, cfg.geometry);
    try {
      if (f == RowFunc::Add)
        exec_add_rows(BackendKind::Drisa, mem, sched, {0, 1}, {1, 1}, {3, 1}, {2, 1}, {3, 2});
      else
        exec_rowop(BackendKind::Drisa, f, mem, sched, {0, 1}, {1, 1}, {2, 1});
    } catch (const UnsupportedOpError&) {
      threw = true;
    }
    ok = ok && threw;
  }
  report(3, ok,
         ok ? "macro counts equal the published sequences for all 19 defined cells"
            : "count mismatch at " + detail);
}

// --- criteria 4/5/6: microbenchmark table ---------------------------------

struct SuiteNumbers {
  // [op][backend] -> value at 4Mb
  std::map<std::string, std::map<std::string, double>> latency_ratio, energy_ratio;
  std::map<std::string, std::map<std::string, std::vector<double>>> ratio_by_size;
  std::map<std::string, double> cidan_throughput;
};

SuiteNumbers run_suite(const ExperimentConfig& cfg) {
  const std::vector<std::uint64_t> sizes = {1ULL << 20, 2ULL << 20, 4ULL << 20};
  const std::vector<RowFunc> ops = {RowFunc::Not, RowFunc::And, RowFunc::Or, RowFunc::Xor};
  const std::vector<BackendKind> backends = {BackendKind::Cidan, BackendKind::Redram,
                                             BackendKind::Ambit};
  const ReportJson suite = run_microbench_suite(cfg, sizes, ops, backends);
  SuiteNumbers out;
  const auto& norm = suite.at("normalized");
  for (RowFunc op : ops) {
    const std::string opname = to_string(op);
    for (const char* b : {"redram", "ambit"}) {
      std::vector<double> per_size;
      for (auto size : sizes)
        per_size.push_back(
            norm.at(opname).at(std::to_string(size)).at("latency").at(b).get<double>());
      out.latency_ratio[opname][b] = per_size.back();
      out.ratio_by_size[opname][b] = per_size;
      out.energy_ratio[opname][b] =
          norm.at(opname).at(std::to_string(sizes.back())).at("energy").at(b).get<double>();
    }
    for (const auto& run : suite.at("runs"))
      if (run.at("op") == opname && run.at("backend") == "cidan" &&
          run.at("size_bits").get<std::uint64_t>() == sizes.back())
        out.cidan_throughput[opname] = run.at("throughput_gops").get<double>();
  }
  return out;
}

void criterion_latency_ratios(const SuiteNumbers& s) {
  const double tol = 0.10;
  struct {
    const char* op;
    double ambit, redram;
  } want[] = {{"not", 2.4, 1.2}, {"and", 4.32, 3.24}, {"or", 4.32, 3.24}, {"xor", 6.54, 3.19}};
  bool ok = true;
  std::ostringstream os;
  for (const auto& w : want) {
    const double ra = s.latency_ratio.at(w.op).at("ambit");
    const double rr = s.latency_ratio.at(w.op).at("redram");
    ok = ok && within(ra, w.ambit, tol) && within(rr, w.redram, tol);
    os << w.op << " A=" << ra << "/R=" << rr << " ";
    // size stability ±1%
    for (const char* b : {"ambit", "redram"}) {
      const auto& v = s.ratio_by_size.at(w.op).at(b);
      for (double x : v) ok = ok && within(x, v.back(), 0.01);
    }
  }
  report(4, ok, "latency ratios ±10%, size-stable ±1%: " + os.str());
}

void criterion_throughput(const SuiteNumbers& s) {
  const double tol = 0.20;
  const bool ok = within(s.cidan_throughput.at("and"), 205.03, tol) &&
                  within(s.cidan_throughput.at("or"), 205.03, tol) &&
                  within(s.cidan_throughput.at("not"), 227.5, tol);
  std::ostringstream os;
  os << "GOps/s and=" << s.cidan_throughput.at("and") << " (ref 205.03) not="
     << s.cidan_throughput.at("not") << " (ref 227.5) ±20%";
  report(5, ok, os.str());
}

void criterion_energy(const SuiteNumbers& s, const ExperimentConfig& cfg) {
  const double tol = 0.25;
  bool ok = within(s.energy_ratio.at("and").at("redram"), 1.96, tol) &&
            within(s.energy_ratio.at("and").at("ambit"), 2.61, tol) &&
            within(s.energy_ratio.at("or").at("redram"), 1.96, tol) &&
            within(s.energy_ratio.at("or").at("ambit"), 2.61, tol);

  // Absolute energies are config-dependent; they are property-checked
  // instead: additive over concatenation and monotone in the inputs.
  CommandTrace t1, t2, joint;
  t1.commands = {{CommandKind::ACT, 0, 0, 0, 0.0}, {CommandKind::PRE, 0, 0, 0, 35.0}};
  t2.commands = {{CommandKind::ACT, 0, 1, 0, 47.5}, {CommandKind::PRE, 0, 0, 0, 82.5}};
  joint.commands = t1.commands;
  joint.commands.insert(joint.commands.end(), t2.commands.begin(), t2.commands.end());
  t1.finalize(cfg.timing);
  t2.finalize(cfg.timing);
  joint.finalize(cfg.timing);
  ok = ok && std::abs(energy_of(joint, cfg.energy) -
                      (energy_of(t1, cfg.energy) + energy_of(t2, cfg.energy))) < 1e-9;

  CommandTrace more = joint;
  more.commands.push_back({CommandKind::ACT, 1, 0, 0, 90.0});
  more.finalize(cfg.timing);
  ok = ok && energy_of(more, cfg.energy) > energy_of(joint, cfg.energy);
  EnergyParams bumped = cfg.energy;
  bumped.e_act_pre *= 2.0;
  ok = ok && energy_of(joint, bumped) > energy_of(joint, cfg.energy);

  std::ostringstream os;
  os << "energy ratios and/or R=" << s.energy_ratio.at("and").at("redram") << " (ref 1.96) A="
     << s.energy_ratio.at("and").at("ambit") << " (ref 2.61) ±25%; additivity/monotonicity hold";
  report(6, ok, os.str());
}

// --- criterion 7: timing invariants over random schedules ------------------

void criterion_timing(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 11);
  std::size_t commands = 0;
  bool ok = true;

  // Stream A: random raw command patterns (chained activates, writes,
  // per-bank and group precharges).
  {
    DeviceScheduler sched(cfg.timing, cfg.geometry);
    for (int i = 0; i < 36000; ++i) {
      const int bank = static_cast<int>(rng() % 8);
      const int row = static_cast<int>(rng() % 16000);
      if (!sched.bank_open(bank)) {
        sched.issue(CommandKind::ACT, bank, row, static_cast<double>(rng() % 40));
        continue;
      }
      switch (rng() % 4) {
        case 0: sched.issue(CommandKind::WR, bank, sched.bank_open_row(bank), 0.0); break;
        case 1: sched.issue(CommandKind::PRE, bank, 0, 0.0); break;
        case 2: sched.issue(CommandKind::ACT, bank, row, 0.0); break;
        default: sched.issue(CommandKind::PREA, bank, 0, 0.0); break;
      }
    }
    CommandTrace t;
    t.commands = sched.trace();
    t.finalize(cfg.timing);
    commands += t.commands.size();
    ok = ok && check_trace(t, cfg.timing, cfg.geometry).empty();
  }

  // Stream B: randomized back-end operations interleaved over both groups.
  {
    MemoryImage mem(cfg.geometry);
    DeviceScheduler sched(cfg.timing, cfg.geometry);
    const BackendKind kinds[] = {BackendKind::Cidan, BackendKind::Redram, BackendKind::Ambit,
                                 BackendKind::Drisa};
    const RowFunc funcs[] = {RowFunc::Copy, RowFunc::Not, RowFunc::And, RowFunc::Or,
                             RowFunc::Xor};
    for (int i = 0; i < 10000; ++i) {
      const BackendKind b = kinds[rng() % 4];
      const RowFunc f = funcs[rng() % 5];
      if (!supports(b, f)) continue;
      const int g = static_cast<int>(rng() % 2) * 4;
      const int r = static_cast<int>(rng() % 16000);
      exec_rowop(b, f, mem, sched, {g + 0, r}, {g + 1, r}, {g + 2, r});
    }
    CommandTrace t;
    t.commands = sched.trace();
    t.finalize(cfg.timing);
    commands += t.commands.size();
    ok = ok && check_trace(t, cfg.timing, cfg.geometry).empty();
  }

  // Stream C: the pipelined microbench traces themselves.
  for (RowFunc f : {RowFunc::And, RowFunc::Xor, RowFunc::Not}) {
    MicrobenchResult r = run_microbench({f, 2ULL << 20, BackendKind::Cidan}, cfg);
    commands += r.stats.trace.commands.size();
    ok = ok && check_trace(r.stats.trace, cfg.timing, cfg.geometry).empty();
  }

  report(7, ok && commands >= 100000,
         "independent checker clean over " + std::to_string(commands) + " commands");
}

// --- criterion 8: encryption offload ---------------------------------------

void criterion_aes(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 13);
  bool ok = true;

  // Known-answer vector.
  {
    std::vector<std::array<std::uint8_t, 16>> blocks(1);
    std::vector<std::uint8_t> key(16);
    for (int i = 0; i < 16; ++i) {
      blocks[0][static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i * 0x11);
      key[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    }
    const std::array<std::uint8_t, 16> expect = {0x69, 0xc4, 0xe0, 0xd8, 0x6a, 0x7b, 0x04,
                                                 0x30, 0xd8, 0xcd, 0xb7, 0x80, 0x70, 0xb4,
                                                 0xc5, 0x5a};
    ok = ok && aes_encrypt(blocks, key, BackendKind::Cidan, cfg).ciphertext[0] == expect;
  }

  // 1000 random (key, plaintext) cases cycling the three key lengths, run on
  // a narrow-row geometry (function does not depend on the row width).
  ExperimentConfig narrow = cfg;
  narrow.geometry.cols_per_row = 8;  // 64-bit rows
  int checked = 0;
  for (int t = 0; t < 1000 && ok; ++t) {
    const std::size_t key_bytes = t % 3 == 0 ? 16 : t % 3 == 1 ? 24 : 32;
    std::vector<std::uint8_t> key(key_bytes);
    for (auto& v : key) v = static_cast<std::uint8_t>(rng());
    std::vector<std::array<std::uint8_t, 16>> blocks(1);
    for (auto& v : blocks[0]) v = static_cast<std::uint8_t>(rng());
    const AesResult r = aes_encrypt(blocks, key, BackendKind::Cidan, narrow);
    ok = ok && r.ciphertext[0] == refaes::encrypt_block(blocks[0], key);
    ++checked;
  }

  // Workload latency ratio under the documented host profile, full-lane
  // batch (calibration-dependent).
  std::vector<std::array<std::uint8_t, 16>> blocks(
      static_cast<std::size_t>(cfg.geometry.row_bits()));
  for (auto& b : blocks)
    for (auto& v : b) v = static_cast<std::uint8_t>(rng());
  std::vector<std::uint8_t> key(16);
  for (auto& v : key) v = static_cast<std::uint8_t>(rng());
  const AesResult c = aes_encrypt(blocks, key, BackendKind::Cidan, cfg);
  const AesResult r = aes_encrypt(blocks, key, BackendKind::Redram, cfg);
  const double ratio = r.stats.total_ns() / c.stats.total_ns();
  ok = ok && within(ratio, 1.15, 0.30);
  ok = ok && c.offloaded_share > 0.65 && c.offloaded_share < 0.85;

  report(8, ok,
         std::to_string(checked) + " random cases bit-exact; " +
             ratio_str("latency ratio redram", ratio, 1.15, 0.30) +
             " [calibration-dependent]; offloaded share " + std::to_string(c.offloaded_share));
}

// --- criterion 9: matching index -------------------------------------------

void criterion_matching(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 17);
  bool ok = true;

  for (int trial = 0; trial < 2 && ok; ++trial) {
    GraphDataset g;
    const int n = 33 + static_cast<int>(rng() % 32);  // up to 64
    g.vertex_count = n;
    g.adjacency.assign(static_cast<std::size_t>(n), BitRow(static_cast<std::size_t>(n)));
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 3 == 0) g.add_edge(u, v);
    for (int i = 0; i < n && ok; ++i) {
      for (int j = i + 1; j < n && ok; ++j) {
        std::size_t common = 0, uni = 0;
        for (int k = 0; k < n; ++k) {
          const bool a = g.adjacency[static_cast<std::size_t>(i)].get(static_cast<std::size_t>(k));
          const bool b = g.adjacency[static_cast<std::size_t>(j)].get(static_cast<std::size_t>(k));
          common += a && b;
          uni += a || b;
        }
        const double expect =
            uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
        ok = ok && std::abs(matching_index(g, i, j, BackendKind::Cidan, cfg).value - expect) <
                       1e-12;
      }
    }
  }

  GraphDataset g;
  g.vertex_count = 48;
  g.adjacency.assign(48, BitRow(48));
  for (int u = 0; u < 48; ++u)
    for (int v = u + 1; v < 48; ++v)
      if (rng() % 4 == 0) g.add_edge(u, v);
  const WorkloadStats c = run_matching_dataset(g, BackendKind::Cidan, cfg, 8);
  const WorkloadStats r = run_matching_dataset(g, BackendKind::Redram, cfg, 8);
  const WorkloadStats a = run_matching_dataset(g, BackendKind::Ambit, cfg, 8);
  const double rr = r.total_ns() / c.total_ns();
  const double ra = a.total_ns() / c.total_ns();
  ok = ok && within(rr, 3.24, 0.05) && within(ra, 4.32, 0.05);

  report(9, ok,
         "all-pairs exact vs brute force; " + ratio_str("redram", rr, 3.24, 0.05) + ", " +
             ratio_str("ambit", ra, 4.32, 0.05));
}

// --- criterion 10: bit-vector DNA mapping -----------------------------------

void criterion_dna(const ExperimentConfig& cfg) {
  std::mt19937_64 rng(cfg.seed + 19);
  static const char alphabet[] = {'A', 'C', 'G', 'T'};
  auto random_dna = [&](std::size_t len) {
    std::string s(len, 'A');
    for (auto& ch : s) ch = alphabet[rng() % 4];
    return s;
  };

  // Functional equality on a narrow-row geometry (same code path, cheap rows).
  ExperimentConfig narrow = cfg;
  narrow.geometry.cols_per_row = 32;  // 256-bit rows
  bool ok = true;
  for (int t = 0; t < 1000 && ok; ++t) {
    const std::string pattern = random_dna(1 + rng() % 64);
    const std::string text = random_dna(1 + rng() % 256);
    const MyersResult r = myers_search(pattern, text, BackendKind::Cidan, narrow);
    ok = ok && r.distances == dporacle::per_position_distances(pattern, text);
  }
  for (int t = 0; t < 100 && ok; ++t) {  // patterns spanning multiple words
    const std::string pattern = random_dna(65 + rng() % 150);
    const std::string text = random_dna(64 + rng() % 192);
    const MyersResult r = myers_search(pattern, text, BackendKind::Cidan, narrow);
    ok = ok && r.distances == dporacle::per_position_distances(pattern, text);
  }

  const std::string pattern = random_dna(24);
  const std::string text = random_dna(96);
  const MyersResult c = myers_search(pattern, text, BackendKind::Cidan, cfg);
  const MyersResult r = myers_search(pattern, text, BackendKind::Redram, cfg);
  const MyersResult a = myers_search(pattern, text, BackendKind::Ambit, cfg);
  const double rr = r.stats.total_ns() / c.stats.total_ns();
  const double ra = a.stats.total_ns() / c.stats.total_ns();
  ok = ok && within(rr, 3.14, 0.20) && within(ra, 4.35, 0.20);

  std::ostringstream mix;
  mix << " op-mix/char:";
  for (const auto& [k, v] : c.stats.op_mix)
    mix << " " << k << "=" << static_cast<double>(v) / static_cast<double>(text.size());
  report(10, ok,
         "1100 cases equal the DP oracle; " + ratio_str("redram", rr, 3.14, 0.20) + ", " +
             ratio_str("ambit", ra, 4.35, 0.20) + mix.str());
}

}  // namespace

int main(int argc, char** argv) {
  const auto t0 = std::chrono::steady_clock::now();

  ExperimentConfig cfg;
  if (argc > 1) {
    const std::filesystem::path p = std::filesystem::path(argv[1]) / "default.json";
    if (std::filesystem::exists(p)) cfg = load_config(p.string());
  }
  std::printf("config %s (hash %s, seed %llu)\n", argc > 1 ? "configs/default.json" : "builtin",
              config_hash(cfg).c_str(), static_cast<unsigned long long>(cfg.seed));

  criterion_truth_tables();
  criterion_functional_equivalence(cfg);
  criterion_macro_counts(cfg);
  const SuiteNumbers suite = run_suite(cfg);
  criterion_latency_ratios(suite);
  criterion_throughput(suite);
  criterion_energy(suite, cfg);
  criterion_timing(cfg);
  criterion_aes(cfg);
  criterion_matching(cfg);
  criterion_dna(cfg);

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(11, seconds < 300.0,
         "suite finished in " + std::to_string(seconds) + " s (< 300 s)");

  std::printf("%s (%d failed)\n", g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT",
              g_failures);
  return g_failures;
}
