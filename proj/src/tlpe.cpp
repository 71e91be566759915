#include "cidan/tlpe.hpp"

#include <stdexcept>

#include "cidan/errors.hpp"
#include "cidan/threshold.hpp"

namespace cidan {

namespace {

TlpeControlWord make_ctrl(std::initializer_list<int> enabled, std::initializer_list<int> inverted,
                          int threshold, LatchAction latch = LatchAction::None,
                          bool use_l1 = false, bool use_l2 = false) {
  TlpeControlWord c;
  for (int i : enabled) c.enable_bank[static_cast<std::size_t>(i)] = true;
  for (int i : inverted) c.invert[static_cast<std::size_t>(i)] = true;
  c.threshold_select = threshold;
  c.latch_action = latch;
  c.enable_l1_feedback = use_l1;
  c.enable_l2_feedback = use_l2;
  return c;
}

void apply_latch(TlpeState& st, LatchAction action, bool out) {
  switch (action) {
    case LatchAction::None:
      break;
    case LatchAction::StoreL1:
      st.l1 = out;
      break;
    case LatchAction::StoreL2:
      st.l2 = out;
      break;
    case LatchAction::MoveL2ToL1:
      st.l1 = st.l2;
      break;
  }
}

}  // namespace

std::pair<TlpeState, bool> tlpe_cycle(const TlpeState& state, const TlpeControlWord& ctrl,
                                      const std::array<bool, 4>& bank_inputs) {
  int sum = 0;
  for (int i = 0; i < 4; ++i) {
    if (!ctrl.enable_bank[static_cast<std::size_t>(i)]) continue;  // disabled lines contribute 0
    bool x = bank_inputs[static_cast<std::size_t>(i)] ^ ctrl.invert[static_cast<std::size_t>(i)];
    sum += x ? 1 : 0;
  }
  if (ctrl.enable_l1_feedback && state.l1) sum += 1;
  if (ctrl.enable_l2_feedback && state.l2) sum -= 2;
  const bool out = sum >= ctrl.threshold_select;

  TlpeState next = state;
  apply_latch(next, ctrl.latch_action, out);
  return {next, out};
}

Schedule compile_schedule(TlpeFunc func) {
  Schedule s;
  switch (func) {
    case TlpeFunc::Not:
      s.cycles = {make_ctrl({0}, {0}, 1)};
      break;
    case TlpeFunc::And:
      s.cycles = {make_ctrl({0, 1}, {}, 2)};
      break;
    case TlpeFunc::Or:
      s.cycles = {make_ctrl({0, 1}, {}, 1)};
      break;
    case TlpeFunc::Nand:
      s.cycles = {make_ctrl({0, 1}, {0, 1}, 1)};
      break;
    case TlpeFunc::Nor:
      s.cycles = {make_ctrl({0, 1}, {0, 1}, 2)};
      break;
    case TlpeFunc::Xor:
      // Cycle 1: I1 & ~I2, parked in L1. Cycle 2: ~I1 & I2. The two minterms
      // are disjoint, so the written value is OR(L1, final).
      s.cycles = {make_ctrl({0, 1}, {1}, 2, LatchAction::StoreL1),
                  make_ctrl({0, 1}, {0}, 2)};
      s.result_source = ResultSource::OrL1Final;
      break;
    case TlpeFunc::Xnor:
      s.cycles = {make_ctrl({0, 1}, {}, 2, LatchAction::StoreL1),
                  make_ctrl({0, 1}, {0, 1}, 2)};
      s.result_source = ResultSource::OrL1Final;
      break;
    case TlpeFunc::AddBit:
      // Carry-in lives in L1. Cycle 1: Maj(A,B,Cin) -> L2. Cycle 2: sum via
      // [-2,1,1,1;1] with the fresh carry on the -2 input, then L2 -> L1 so
      // the carry is in place for the next bit plane.
      s.cycles = {make_ctrl({0, 1}, {}, 2, LatchAction::StoreL2, /*use_l1=*/true),
                  make_ctrl({0, 1}, {}, 1, LatchAction::MoveL2ToL1, /*use_l1=*/true,
                            /*use_l2=*/true)};
      s.produces_carry = true;
      break;
    default:
      throw UnsupportedOpError("compile_schedule: unknown function");
  }
  return s;
}

Schedule passthrough_schedule() {
  Schedule s;
  s.cycles = {make_ctrl({0}, {}, 1)};
  return s;
}

Schedule bind_operands(const Schedule& sched, int pos1, int pos2) {
  if (pos1 == pos2 || pos1 < 0 || pos1 > 3 || pos2 < 0 || pos2 > 3)
    throw std::invalid_argument("bind_operands: positions must be distinct bank indices");
  Schedule out = sched;
  for (auto& c : out.cycles) {
    TlpeControlWord r = c;
    r.enable_bank = {};
    r.invert = {};
    const int dst[2] = {pos1, pos2};
    for (int i = 0; i < 2; ++i) {
      r.enable_bank[static_cast<std::size_t>(dst[i])] = c.enable_bank[static_cast<std::size_t>(i)];
      r.invert[static_cast<std::size_t>(dst[i])] = c.invert[static_cast<std::size_t>(i)];
    }
    c = r;
  }
  return out;
}

ScheduleResult run_schedule(const Schedule& sched, const std::array<bool, 4>& inputs,
                            TlpeState state) {
  bool first_l1 = false;
  bool out = false;
  for (std::size_t i = 0; i < sched.cycles.size(); ++i) {
    auto [next, o] = tlpe_cycle(state, sched.cycles[i], inputs);
    state = next;
    out = o;
    if (i == 0) first_l1 = state.l1;
  }
  ScheduleResult r;
  r.result = sched.result_source == ResultSource::OrL1Final ? (first_l1 || out) : out;
  r.state = state;
  if (sched.produces_carry) r.carry = state.l1;
  return r;
}

namespace {

// Word-parallel threshold cycle. Counts the (up to five) unit inputs with a
// carry-save tree, then compares against T shifted by the -2 L2 input.
struct WordCycle {
  std::uint64_t inv[4];
  std::uint64_t en[4];
  std::uint64_t en_l1;
  std::uint64_t en_l2;
  int threshold;

  explicit WordCycle(const TlpeControlWord& c) {
    for (int i = 0; i < 4; ++i) {
      inv[i] = c.invert[static_cast<std::size_t>(i)] ? ~0ULL : 0ULL;
      en[i] = c.enable_bank[static_cast<std::size_t>(i)] ? ~0ULL : 0ULL;
    }
    en_l1 = c.enable_l1_feedback ? ~0ULL : 0ULL;
    en_l2 = c.enable_l2_feedback ? ~0ULL : 0ULL;
    threshold = c.threshold_select;
  }

  std::uint64_t eval(const std::uint64_t b[4], std::uint64_t l1, std::uint64_t l2) const {
    const std::uint64_t x0 = (b[0] ^ inv[0]) & en[0];
    const std::uint64_t x1 = (b[1] ^ inv[1]) & en[1];
    const std::uint64_t x2 = (b[2] ^ inv[2]) & en[2];
    const std::uint64_t x3 = (b[3] ^ inv[3]) & en[3];
    const std::uint64_t x4 = l1 & en_l1;

    const std::uint64_t s1 = x0 ^ x1 ^ x2;
    const std::uint64_t c1 = (x0 & x1) | (x1 & x2) | (x0 & x2);
    const std::uint64_t s2 = x3 ^ x4;
    const std::uint64_t c2 = x3 & x4;
    const std::uint64_t lo = s1 ^ s2;   // count bit 0
    const std::uint64_t cc = s1 & s2;
    const std::uint64_t t0 = c1 ^ c2 ^ cc;                          // count bit 1
    const std::uint64_t t1 = (c1 & c2) | (c2 & cc) | (c1 & cc);     // count bit 2

    const std::uint64_t neg = l2 & en_l2;  // lanes whose effective T is raised by 2
    if (threshold == 1)
      return (~neg & (lo | t0 | t1)) | (neg & (t1 | (t0 & lo)));  // count>=1 / count>=3
    return (~neg & (t0 | t1)) | (neg & t1);                       // count>=2 / count>=4
  }
};

}  // namespace

BitRow tlpea_apply(const Schedule& sched, const std::array<const BitRow*, 4>& bank_rows,
                   TlpeaState& state) {
  std::size_t lanes = state.l1.size();
  for (const BitRow* r : bank_rows)
    if (r) {
      if (lanes == 0) lanes = r->size();
      if (r->size() != lanes) throw std::invalid_argument("tlpea_apply: row width mismatch");
    }
  if (state.l1.size() != lanes || state.l2.size() != lanes)
    throw std::invalid_argument("tlpea_apply: state row width mismatch");

  const std::size_t nw = state.l1.word_count();
  BitRow first_l1(lanes);
  BitRow out(lanes);

  for (std::size_t ci = 0; ci < sched.cycles.size(); ++ci) {
    const WordCycle wc(sched.cycles[ci]);
    const LatchAction latch = sched.cycles[ci].latch_action;
    for (std::size_t w = 0; w < nw; ++w) {
      std::uint64_t b[4];
      for (int i = 0; i < 4; ++i)
        b[i] = bank_rows[static_cast<std::size_t>(i)]
                   ? bank_rows[static_cast<std::size_t>(i)]->word(w)
                   : 0ULL;
      const std::uint64_t o = wc.eval(b, state.l1.word(w), state.l2.word(w));
      out.word(w) = o;
      switch (latch) {
        case LatchAction::None:
          break;
        case LatchAction::StoreL1:
          state.l1.word(w) = o;
          break;
        case LatchAction::StoreL2:
          state.l2.word(w) = o;
          break;
        case LatchAction::MoveL2ToL1:
          state.l1.word(w) = state.l2.word(w);
          break;
      }
    }
    if (ci == 0) first_l1 = state.l1;
  }

  if (sched.result_source == ResultSource::OrL1Final) out |= first_l1;
  return out;
}

MultibitAddResult tlpea_multibit_add(const std::vector<BitRow>& a_planes,
                                     const std::vector<BitRow>& b_planes) {
  if (a_planes.size() != b_planes.size())
    throw std::invalid_argument("tlpea_multibit_add: plane count mismatch");
  MultibitAddResult r;
  if (a_planes.empty()) return r;

  const std::size_t lanes = a_planes.front().size();
  TlpeaState state(lanes);  // L1 = carry-in, all zero
  const Schedule add = compile_schedule(TlpeFunc::AddBit);

  r.sum_planes.reserve(a_planes.size());
  for (std::size_t k = 0; k < a_planes.size(); ++k) {
    const std::array<const BitRow*, 4> rows = {&a_planes[k], &b_planes[k], nullptr, nullptr};
    r.sum_planes.push_back(tlpea_apply(add, rows, state));
    r.tlpe_cycles += 2;
  }
  r.carry_row = state.l1;
  return r;
}

}  // namespace cidan
