#include <doctest.h>

#include <random>
#include <sstream>

#include "cidan/dram.hpp"

using namespace cidan;

namespace {
TimingParams tp() { return TimingParams{}; }
DramGeometry geom() { return DramGeometry{}; }
}  // namespace

TEST_CASE("timing parameter validation") {
  TimingParams t = tp();
  t.validate();
  t.t_rc = 40.0;  // breaks t_rc = t_ras + t_rp
  CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("activation pacing across banks") {
  DeviceScheduler s(tp(), geom());
  CHECK(s.issue(CommandKind::ACT, 0, 10, 0.0) == doctest::Approx(0.0));
  // Second activation to another bank is pushed to t_rrd.
  CHECK(s.issue(CommandKind::ACT, 1, 20, 0.0) == doctest::Approx(7.5));
}

TEST_CASE("four-activation window delays the fifth") {
  DeviceScheduler s(tp(), geom());
  for (int b = 0; b < 4; ++b) s.issue(CommandKind::ACT, b, 0, 0.0);
  // Requested at 10 ns, but the window only reopens at 30 ns.
  CHECK(s.issue(CommandKind::ACT, 4, 0, 10.0) == doctest::Approx(30.0));
}

TEST_CASE("column access waits for the row to be ready") {
  DeviceScheduler s(tp(), geom());
  s.issue(CommandKind::ACT, 0, 5, 0.0);
  CHECK(s.issue(CommandKind::RD, 0, 5, 5.0) == doctest::Approx(15.0));
}

TEST_CASE("column access to a precharged bank is a protocol error") {
  DeviceScheduler s(tp(), geom());
  CHECK_THROWS_AS(s.issue(CommandKind::RD, 0, 5, 0.0), ProtocolError);
  s.issue(CommandKind::ACT, 0, 5, 0.0);
  CHECK_THROWS_AS(s.issue(CommandKind::WR, 0, 6, 0.0), ProtocolError);  // row not open
}

TEST_CASE("macro expansion and latency") {
  const auto aap = expand_macro(MacroKind::AAP, 2, 7, 9);
  REQUIRE(aap.size() == 3);
  CHECK(aap[0].kind == CommandKind::ACT);
  CHECK(aap[1].kind == CommandKind::ACT);
  CHECK(aap[2].kind == CommandKind::PRE);
  CHECK(macro_latency(MacroKind::AAP, tp()) == doctest::Approx(82.5));
  CHECK(macro_latency(MacroKind::AP, tp()) == doctest::Approx(47.5));

  // Scheduled AAP reproduces the quoted in-place copy latency.
  DeviceScheduler s(tp(), geom());
  const double a1 = s.issue(CommandKind::ACT, 0, 7, 0.0);
  const double a2 = s.issue(CommandKind::ACT, 0, 9, a1);
  const double pre = s.issue(CommandKind::PRE, 0, 0, a2);
  CHECK(a2 == doctest::Approx(35.0));
  CHECK(pre + tp().t_rp == doctest::Approx(82.5));
}

TEST_CASE("scheduler is deterministic and monotone in the request time") {
  auto run = [](double second_request) {
    DeviceScheduler s(tp(), geom());
    s.issue(CommandKind::ACT, 0, 1, 0.0);
    return s.issue(CommandKind::ACT, 1, 2, second_request);
  };
  CHECK(run(0.0) == run(0.0));
  double prev = run(0.0);
  for (double req = 0.0; req < 20.0; req += 2.5) {
    const double t = run(req);
    CHECK(t >= prev - 1e-12);
    prev = t;
  }
}

TEST_CASE("trace checker flags seeded violations") {
  CommandTrace t;
  t.commands = {{CommandKind::ACT, 0, 1, 0, 0.0}, {CommandKind::ACT, 1, 2, 0, 5.0}};
  t.finalize(tp());
  auto v = check_trace(t, tp());
  REQUIRE(v.size() == 1);
  CHECK(v[0].rule == "t_rrd");

  CommandTrace f;
  for (int i = 0; i < 5; ++i)
    f.commands.push_back({CommandKind::ACT, i, 0, 0, 7.4 * i});  // fifth lands inside 30 ns
  f.finalize(tp());
  bool saw_faw = false;
  for (const auto& viol : check_trace(f, tp())) saw_faw |= viol.rule == "t_faw";
  CHECK(saw_faw);
}

TEST_CASE("random schedules pass the independent checker") {
  std::mt19937_64 rng(101);
  DeviceScheduler s(tp(), geom());
  // Random mix of legal command patterns (activate, column access, close).
  for (int i = 0; i < 10000; ++i) {
    const int bank = static_cast<int>(rng() % 8);
    const int row = static_cast<int>(rng() % 16384);
    if (!s.bank_open(bank)) {
      s.issue(CommandKind::ACT, bank, row, static_cast<double>(rng() % 50));
      continue;
    }
    switch (rng() % 4) {
      case 0: s.issue(CommandKind::WR, bank, s.bank_open_row(bank), 0.0); break;
      case 1: s.issue(CommandKind::PRE, bank, 0, 0.0); break;
      case 2: s.issue(CommandKind::ACT, bank, row, 0.0); break;  // chained activate
      default: s.issue(CommandKind::PREA, bank, 0, 0.0); break;
    }
  }
  CommandTrace t;
  t.commands = s.trace();
  t.finalize(tp());
  CHECK(check_trace(t, tp()).empty());
}

TEST_CASE("energy accounting") {
  EnergyParams ep;
  CommandTrace empty;
  empty.finalize(tp());
  CHECK(energy_of(empty, ep) == doctest::Approx(0.0));  // zero-duration empty trace

  CommandTrace idle;
  idle.total_latency = 100.0;
  CHECK(energy_of(idle, ep) == doctest::Approx(100.0 * ep.p_background));

  // Additivity over concatenation of adjacent slices.
  CommandTrace t1, t2, whole;
  t1.commands = {{CommandKind::ACT, 0, 0, 0, 0.0}, {CommandKind::PRE, 0, 0, 0, 35.0}};
  t2.commands = {{CommandKind::ACT, 0, 1, 0, 47.5}, {CommandKind::PRE, 0, 0, 0, 82.5}};
  whole.commands = t1.commands;
  whole.commands.insert(whole.commands.end(), t2.commands.begin(), t2.commands.end());
  t1.finalize(tp());
  t2.finalize(tp());
  whole.finalize(tp());
  CHECK(energy_of(whole, ep) ==
        doctest::Approx(energy_of(t1, ep) + energy_of(t2, ep)));
}

TEST_CASE("trace csv round trip") {
  CommandTrace t;
  t.commands = {{CommandKind::ACT, 3, 17, 0, 12.5},
                {CommandKind::COMPUTE, 2, 0, 2, 30.0},
                {CommandKind::WR, 2, 9, 0, 32.5},
                {CommandKind::PREA, 2, 0, 0, 65.0}};
  t.finalize(tp());
  std::stringstream ss;
  write_trace_csv(ss, t);
  CommandTrace back = read_trace_csv(ss, tp());
  REQUIRE(back.commands.size() == t.commands.size());
  for (std::size_t i = 0; i < t.commands.size(); ++i) {
    CHECK(back.commands[i].kind == t.commands[i].kind);
    CHECK(back.commands[i].bank == t.commands[i].bank);
    CHECK(back.commands[i].row == t.commands[i].row);
    CHECK(back.commands[i].cycles == t.commands[i].cycles);
    CHECK(back.commands[i].issue_ns == doctest::Approx(t.commands[i].issue_ns));
  }
  CHECK(back.total_latency == doctest::Approx(t.total_latency));
}
