#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cidan/bitrow.hpp"

namespace cidan {

// One processing element: a reconfigurable threshold gate implementing a
// subset of [-2,1,1,1,1,1;T] (T in {1,2}) plus two result latches. The -2
// input is fed by latch L2, the four unit inputs by the bank lines B1-B4
// (each with an XOR invert control), and the remaining unit input by L1.

enum class LatchAction { None, StoreL1, StoreL2, MoveL2ToL1 };
enum class ResultSource { FinalCycle, OrL1Final };

struct TlpeControlWord {
  std::array<bool, 4> invert{};       // C0-C3, XOR on the bank inputs
  std::array<bool, 4> enable_bank{};  // per-bank-input enable
  bool enable_l1_feedback = false;    // unit-weight L1 input
  bool enable_l2_feedback = false;    // weight -2 L2 input
  int threshold_select = 1;           // 1 or 2
  LatchAction latch_action = LatchAction::None;
};

struct TlpeState {
  bool l1 = false;
  bool l2 = false;
  bool operator==(const TlpeState&) const = default;
};

enum class TlpeFunc { Not, And, Or, Nand, Nor, Xor, Xnor, AddBit };

// Per-cycle control words for one function, plus how the written-back result
// is formed. Single cycle for the threshold functions, two cycles for
// XOR/XNOR (cycle-1 output parked in L1, result = OR(L1, final cycle)) and
// for the full adder (majority to L2, then sum; L2 moved to L1 for the next
// bit plane).
struct Schedule {
  std::vector<TlpeControlWord> cycles;
  ResultSource result_source = ResultSource::FinalCycle;
  bool produces_carry = false;
};

struct ScheduleResult {
  bool result = false;
  std::optional<bool> carry;  // final L1 for AddBit
  TlpeState state;
};

// Evaluate one gate cycle: threshold output of the enabled inputs, then the
// latch action. Returns the new state and the raw gate output.
std::pair<TlpeState, bool> tlpe_cycle(const TlpeState& state, const TlpeControlWord& ctrl,
                                      const std::array<bool, 4>& bank_inputs);

// Control words for the eight basic functions. Operands are bound to bank
// positions 0 and 1; use bind_operands() to retarget.
Schedule compile_schedule(TlpeFunc func);

// Single-cycle pass-through of one operand (the Copy datapath).
Schedule passthrough_schedule();

// Remap a schedule compiled for bank positions (0,1) onto (pos1, pos2).
Schedule bind_operands(const Schedule& sched, int pos1, int pos2);

// Run a full schedule on one lane.
ScheduleResult run_schedule(const Schedule& sched, const std::array<bool, 4>& inputs,
                            TlpeState state);

// Lane state for a whole TLPE array, one bit per lane.
struct TlpeaState {
  BitRow l1;
  BitRow l2;

  TlpeaState() = default;
  explicit TlpeaState(std::size_t lanes) : l1(lanes), l2(lanes) {}
};

// Word-parallel evaluation of a schedule across all lanes. bank_rows holds up
// to four operand rows (null = lines held at 0); every present row and the
// state rows must share one width. Equivalent to run_schedule per lane.
BitRow tlpea_apply(const Schedule& sched, const std::array<const BitRow*, 4>& bank_rows,
                   TlpeaState& state);

// Lane-parallel multi-bit addition over transposed operands: plane k holds
// bit k of every lane's word. Returns the sum planes and the final carry row.
// Costs exactly two gate cycles per plane.
struct MultibitAddResult {
  std::vector<BitRow> sum_planes;
  BitRow carry_row;
  int tlpe_cycles = 0;
};
MultibitAddResult tlpea_multibit_add(const std::vector<BitRow>& a_planes,
                                     const std::vector<BitRow>& b_planes);

}  // namespace cidan
