#include <doctest.h>

#include <random>

#include "cidan/errors.hpp"
#include "cidan/tlpe.hpp"

using namespace cidan;

namespace {

bool boolean_oracle(TlpeFunc f, bool a, bool b) {
  switch (f) {
    case TlpeFunc::Not: return !a;
    case TlpeFunc::And: return a && b;
    case TlpeFunc::Or: return a || b;
    case TlpeFunc::Nand: return !(a && b);
    case TlpeFunc::Nor: return !(a || b);
    case TlpeFunc::Xor: return a != b;
    case TlpeFunc::Xnor: return a == b;
    default: return false;
  }
}

std::array<bool, 4> inputs2(bool a, bool b) { return {a, b, false, false}; }

}  // namespace

TEST_CASE("single gate cycles match the basic-operation table") {
  TlpeControlWord and_cfg;
  and_cfg.enable_bank = {true, true, false, false};
  and_cfg.threshold_select = 2;
  CHECK(tlpe_cycle({}, and_cfg, {true, true, false, false}).second);
  CHECK_FALSE(tlpe_cycle({}, and_cfg, {true, false, false, false}).second);

  TlpeControlWord not_cfg;
  not_cfg.enable_bank = {true, false, false, false};
  not_cfg.invert = {true, false, false, false};
  not_cfg.threshold_select = 1;
  CHECK_FALSE(tlpe_cycle({}, not_cfg, {true, false, false, false}).second);
  CHECK(tlpe_cycle({}, not_cfg, {false, false, false, false}).second);

  TlpeControlWord nor_cfg;
  nor_cfg.enable_bank = {true, true, false, false};
  nor_cfg.invert = {true, true, false, false};
  nor_cfg.threshold_select = 2;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      CHECK(tlpe_cycle({}, nor_cfg, inputs2(a, b)).second == !(a || b));
}

TEST_CASE("disabled inputs contribute nothing") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    TlpeControlWord c;
    for (int i = 0; i < 4; ++i) {
      c.enable_bank[static_cast<std::size_t>(i)] = rng() & 1;
      c.invert[static_cast<std::size_t>(i)] = rng() & 1;
    }
    c.enable_l1_feedback = rng() & 1;
    c.enable_l2_feedback = rng() & 1;
    c.threshold_select = 1 + static_cast<int>(rng() % 2);
    TlpeState st{static_cast<bool>(rng() & 1), static_cast<bool>(rng() & 1)};
    std::array<bool, 4> in = {static_cast<bool>(rng() & 1), static_cast<bool>(rng() & 1),
                              static_cast<bool>(rng() & 1), static_cast<bool>(rng() & 1)};
    const bool base = tlpe_cycle(st, c, in).second;
    for (int i = 0; i < 4; ++i) {
      if (c.enable_bank[static_cast<std::size_t>(i)]) continue;
      auto flipped = in;
      flipped[static_cast<std::size_t>(i)] = !flipped[static_cast<std::size_t>(i)];
      CHECK(tlpe_cycle(st, c, flipped).second == base);
    }
  }
}

TEST_CASE("schedule shapes follow the per-function table") {
  for (TlpeFunc f : {TlpeFunc::Not, TlpeFunc::And, TlpeFunc::Or, TlpeFunc::Nand, TlpeFunc::Nor})
    CHECK(compile_schedule(f).cycles.size() == 1);
  const Schedule x = compile_schedule(TlpeFunc::Xor);
  CHECK(x.cycles.size() == 2);
  CHECK(x.cycles[0].latch_action == LatchAction::StoreL1);
  CHECK(x.result_source == ResultSource::OrL1Final);
  const Schedule add = compile_schedule(TlpeFunc::AddBit);
  CHECK(add.cycles.size() == 2);
  CHECK(add.cycles[0].latch_action == LatchAction::StoreL2);
  CHECK(add.cycles[1].latch_action == LatchAction::MoveL2ToL1);
  CHECK(add.produces_carry);
}

TEST_CASE("exhaustive schedule equivalence for the eight basic functions") {
  for (TlpeFunc f : {TlpeFunc::Not, TlpeFunc::And, TlpeFunc::Or, TlpeFunc::Nand, TlpeFunc::Nor,
                     TlpeFunc::Xor, TlpeFunc::Xnor}) {
    const Schedule s = compile_schedule(f);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int l1 = 0; l1 < 2; ++l1)
          for (int l2 = 0; l2 < 2; ++l2) {
            const auto r = run_schedule(s, inputs2(a, b), TlpeState{(bool)l1, (bool)l2});
            CHECK(r.result == boolean_oracle(f, a, b));
          }
  }
}

TEST_CASE("adder schedule equals the full adder over all eight cases") {
  const Schedule add = compile_schedule(TlpeFunc::AddBit);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int cin = 0; cin < 2; ++cin) {
        const auto r = run_schedule(add, inputs2(a, b), TlpeState{static_cast<bool>(cin), false});
        const int total = a + b + cin;
        CHECK(r.result == (total % 2 == 1));
        REQUIRE(r.carry.has_value());
        CHECK(*r.carry == (total >= 2));       // majority, moved into L1
        CHECK(r.state.l1 == (total >= 2));
      }
  // The worked example: 1 + 1 with carry-in 0.
  const auto r = run_schedule(add, inputs2(true, true), TlpeState{false, false});
  CHECK_FALSE(r.result);
  CHECK(r.state.l1);
}

TEST_CASE("unknown schedule input is rejected") {
  CHECK_THROWS_AS(compile_schedule(static_cast<TlpeFunc>(99)), UnsupportedOpError);
}

TEST_CASE("array evaluation matches the per-lane reference") {
  std::mt19937_64 rng(11);
  for (TlpeFunc f : {TlpeFunc::And, TlpeFunc::Or, TlpeFunc::Xor, TlpeFunc::Xnor, TlpeFunc::Not,
                     TlpeFunc::AddBit}) {
    const Schedule s = compile_schedule(f);
    const std::size_t lanes = 200;  // crosses a word boundary
    BitRow a = BitRow::random(lanes, rng);
    BitRow b = BitRow::random(lanes, rng);
    TlpeaState st(lanes);
    st.l1 = BitRow::random(lanes, rng);
    TlpeaState word_state = st;
    const std::array<const BitRow*, 4> rows = {&a, &b, nullptr, nullptr};
    BitRow out = tlpea_apply(s, rows, word_state);
    for (std::size_t i = 0; i < lanes; ++i) {
      const auto r = run_schedule(s, inputs2(a.get(i), b.get(i)),
                                  TlpeState{st.l1.get(i), st.l2.get(i)});
      CHECK(out.get(i) == r.result);
      CHECK(word_state.l1.get(i) == r.state.l1);
      CHECK(word_state.l2.get(i) == r.state.l2);
    }
  }
}

TEST_CASE("array ops equal the host bitwise oracle on wide rows") {
  std::mt19937_64 rng(13);
  const std::size_t lanes = 8192;
  BitRow a = BitRow::random(lanes, rng);
  BitRow b = BitRow::random(lanes, rng);
  TlpeaState st(lanes);
  const std::array<const BitRow*, 4> rows = {&a, &b, nullptr, nullptr};
  CHECK(tlpea_apply(compile_schedule(TlpeFunc::And), rows, st) == (a & b));
  CHECK(tlpea_apply(compile_schedule(TlpeFunc::Or), rows, st) == (a | b));
  CHECK(tlpea_apply(compile_schedule(TlpeFunc::Xor), rows, st) == (a ^ b));
}

TEST_CASE("adder across the array: sum row and carry states") {
  std::mt19937_64 rng(17);
  const std::size_t lanes = 512;
  BitRow a = BitRow::random(lanes, rng);
  BitRow b = BitRow::random(lanes, rng);
  TlpeaState st(lanes);  // zero carries
  const std::array<const BitRow*, 4> rows = {&a, &b, nullptr, nullptr};
  BitRow sum = tlpea_apply(compile_schedule(TlpeFunc::AddBit), rows, st);
  CHECK(sum == (a ^ b));
  CHECK(st.l1 == (a & b));
}

TEST_CASE("lane independence: perturbing other lanes never leaks") {
  std::mt19937_64 rng(19);
  const std::size_t lanes = 130;
  BitRow a = BitRow::random(lanes, rng);
  BitRow b = BitRow::random(lanes, rng);
  const Schedule s = compile_schedule(TlpeFunc::Xor);
  TlpeaState st(lanes);
  const std::array<const BitRow*, 4> rows = {&a, &b, nullptr, nullptr};
  BitRow base = tlpea_apply(s, rows, st);
  for (std::size_t flip = 0; flip < lanes; flip += 13) {
    BitRow a2 = a;
    a2.set(flip, !a2.get(flip));
    TlpeaState st2(lanes);
    const std::array<const BitRow*, 4> rows2 = {&a2, &b, nullptr, nullptr};
    BitRow out = tlpea_apply(s, rows2, st2);
    for (std::size_t i = 0; i < lanes; ++i)
      if (i != flip) CHECK(out.get(i) == base.get(i));
  }
}

TEST_CASE("width mismatch is rejected") {
  BitRow a(64), b(65);
  TlpeaState st(64);
  const std::array<const BitRow*, 4> rows = {&a, &b, nullptr, nullptr};
  CHECK_THROWS_AS(tlpea_apply(compile_schedule(TlpeFunc::And), rows, st),
                  std::invalid_argument);
}

TEST_CASE("multibit add equals lane-wise integer addition") {
  std::mt19937_64 rng(23);
  for (int width = 1; width <= 16; width *= 2) {
    const std::size_t lanes = 96;
    std::vector<BitRow> ap, bp;
    for (int k = 0; k < width; ++k) {
      ap.push_back(BitRow::random(lanes, rng));
      bp.push_back(BitRow::random(lanes, rng));
    }
    const auto r = tlpea_multibit_add(ap, bp);
    CHECK(r.tlpe_cycles == 2 * width);
    for (std::size_t lane = 0; lane < lanes; ++lane) {
      std::uint32_t va = 0, vb = 0, vs = 0;
      for (int k = 0; k < width; ++k) {
        va |= static_cast<std::uint32_t>(ap[static_cast<std::size_t>(k)].get(lane)) << k;
        vb |= static_cast<std::uint32_t>(bp[static_cast<std::size_t>(k)].get(lane)) << k;
        vs |= static_cast<std::uint32_t>(r.sum_planes[static_cast<std::size_t>(k)].get(lane))
              << k;
      }
      const std::uint32_t mask = width == 32 ? ~0u : ((1u << width) - 1);
      CHECK(vs == ((va + vb) & mask));
      CHECK(r.carry_row.get(lane) == (((va + vb) >> width) & 1));
    }
  }

  // Worked cases: 1+1 = 2 in two planes; all-zero operands.
  BitRow one(4), zero(4);
  one.set(0, true);
  auto r = tlpea_multibit_add({one, zero}, {one, zero});
  CHECK_FALSE(r.sum_planes[0].get(0));
  CHECK(r.sum_planes[1].get(0));
  CHECK_FALSE(r.carry_row.get(0));
  auto rz = tlpea_multibit_add({zero, zero}, {zero, zero});
  CHECK_FALSE(rz.sum_planes[0].any());
  CHECK_FALSE(rz.sum_planes[1].any());
  CHECK_FALSE(rz.carry_row.any());

  CHECK_THROWS_AS(tlpea_multibit_add({one}, {one, zero}), std::invalid_argument);
}
