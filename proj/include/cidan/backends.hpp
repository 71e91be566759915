#pragma once

#include <map>
#include <optional>
#include <string>

#include "cidan/dram.hpp"
#include "cidan/memory.hpp"
#include "cidan/tlpe.hpp"

namespace cidan {

enum class BackendKind { Cidan, Ambit, Redram, Drisa };
enum class RowFunc { Copy, Not, And, Or, Xor, Add };

const char* to_string(BackendKind b);
const char* to_string(RowFunc f);
std::optional<BackendKind> backend_from_string(const std::string& s);
std::optional<RowFunc> rowfunc_from_string(const std::string& s);

// Capability table: which functions each platform executes natively.
bool supports(BackendKind backend, RowFunc func);

struct MacroCounts {
  int aap = 0;
  int ap = 0;
  int act = 0;  // bare activations (outside AAP/AP macros)
  int wr = 0;
  int prea = 0;
  int compute_cycles = 0;

  MacroCounts& operator+=(const MacroCounts& o);
  bool operator==(const MacroCounts&) const = default;
};

struct RunStats {
  CommandTrace trace;
  double latency_ns = 0.0;
  double energy_pj = 0.0;
  MacroCounts macro_counts;
};

// Expected macro counts per Table-style command sequences (throws
// UnsupportedOpError for undefined cells).
MacroCounts expected_macro_counts(BackendKind backend, RowFunc func);

// The command sequence of one row operation, with intra-op dependencies.
// Programs let a driver interleave many operations on one scheduler in time
// order (the scheduler's issue times are globally non-decreasing).
struct OpProgram {
  enum class Dep {
    OpStart,      // the operation's arrival time
    Prev,         // issue time of the previous command
    DataReady,    // last activation + t_rcd
    ComputeDone,  // compute issue + cycles * t_ck
    WriteBack     // write issue + t_wr + t_writeback_extra
  };
  struct Cmd {
    CommandKind kind;
    int bank;
    int row;
    int cycles;
    Dep dep;
  };
  std::vector<Cmd> cmds;
  MacroCounts counts;
};

// Staging copies resolved for the Cidan distinct-banks-in-one-group rule.
struct ResolvedPlacement {
  std::vector<std::pair<RowRef, RowRef>> fixups;  // executed as priced copies
  RowRef src1;
  RowRef src2;
};

ResolvedPlacement resolve_cidan_placement(const DramGeometry& geom, RowFunc func, RowRef src1,
                                          RowRef src2, RowRef dest);

// Build the full command program (fixup copies inlined) / apply the memory
// effect. The two are split so event-driven runners can schedule commands
// without touching data.
OpProgram build_rowop_program(BackendKind backend, RowFunc func, const DramGeometry& geom,
                              RowRef src1, RowRef src2, RowRef dest);
void apply_rowop_memory(BackendKind backend, RowFunc func, MemoryImage& mem, RowRef src1,
                        RowRef src2, RowRef dest);

// Cursor over one program bound to a scheduler.
class ProgramRun {
 public:
  ProgramRun(const OpProgram* prog, double arrival);

  bool done() const { return idx_ >= prog_->cmds.size(); }
  // Earliest legal issue time of the next command.
  double probe(const DeviceScheduler& sched) const;
  // Issue the next command; returns its time.
  double commit(DeviceScheduler& sched);

  const std::vector<DramCommand>& issued() const { return issued_; }
  const OpProgram& program() const { return *prog_; }

 private:
  double request_time(const TimingParams& tp) const;

  const OpProgram* prog_;
  double arrival_;
  std::size_t idx_ = 0;
  double prev_issue_ = 0.0;
  double last_act_issue_ = 0.0;
  double compute_done_ = 0.0;
  double wr_issue_ = 0.0;
  std::vector<DramCommand> issued_;
};

// Run one program to completion on the scheduler.
RunStats run_program(const OpProgram& prog, DeviceScheduler& sched, double arrival = 0.0,
                     const EnergyParams* ep = nullptr);

// Execute one row-level bulk-bitwise operation: update the memory image and
// push the platform's command sequence through the shared scheduler.
// Unary functions (Copy/Not) ignore src2. For Cidan the operands must sit in
// distinct banks of one four-bank group; offending sources are first staged
// with an explicit, fully priced copy.
RunStats exec_rowop(BackendKind backend, RowFunc func, MemoryImage& mem, DeviceScheduler& sched,
                    RowRef src1, RowRef src2, RowRef dest, double request_ns = 0.0,
                    const EnergyParams* ep = nullptr);

// Lane-wise full addition (Cidan only): sum and carry-out rows from the two
// operand rows and a carry-in row. The carry-in is loaded into the lane L1
// latches; the carry-out is materialized from the latches into dest_carry.
RunStats exec_add_rows(BackendKind backend, MemoryImage& mem, DeviceScheduler& sched, RowRef src_a,
                       RowRef src_b, RowRef carry_in, RowRef dest_sum, RowRef dest_carry,
                       double request_ns = 0.0, const EnergyParams* ep = nullptr);

// Functional triple-row activation: all three rows collapse to the bit-wise
// majority, which is also returned. AND/OR come from pinning c to 0/1.
BitRow ambit_majority(MemoryImage& mem, RowRef a, RowRef b, RowRef c);

enum class DraMode { Nand2, Nor2, And2, Or2, Not };

// Functional double-row activation with the selectable sense amplifier.
BitRow redram_dra(MemoryImage& mem, RowRef a, RowRef b, DraMode mode);

// Row copy priced per platform (RowClone-style for Ambit/Redram).
RunStats copy_row(BackendKind backend, MemoryImage& mem, DeviceScheduler& sched, RowRef src,
                  RowRef dest, double request_ns = 0.0, const EnergyParams* ep = nullptr);

// Reserved compute/staging rows at the top of each bank.
constexpr int kComputeRowCount = 8;
int compute_row(const DramGeometry& geom, int slot);

}  // namespace cidan
