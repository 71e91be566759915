#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cidan/errors.hpp"

namespace cidan {

struct DramGeometry {
  int banks_per_chip = 8;
  int rows_per_bank = 16384;
  int cols_per_row = 1024;
  int bits_per_col = 8;
  int bank_group_size = 4;  // banks sharing one TLPE array

  int row_bits() const { return cols_per_row * bits_per_col; }
  int row_bytes() const { return row_bits() / 8; }
  int group_count() const { return banks_per_chip / bank_group_size; }

  void validate() const;
};

// All durations in nanoseconds.
struct TimingParams {
  double t_rcd = 15.0;   // ACT to data-ready at the sense amps
  double t_ras = 35.0;   // ACT to row restored (earliest PRE)
  double t_rp = 12.5;    // precharge duration
  double t_rc = 47.5;    // same-bank ACT to ACT across a precharge
  double t_rrd = 7.5;    // any-bank ACT to ACT on one device
  double t_faw = 30.0;   // window holding at most four ACTs
  double t_ck = 1.25;    // TLPE array clock period
  double t_wr = 15.0;    // write recovery before precharge
  double t_writeback_extra = 17.5;  // compute write-back settle (calibration knob)

  void validate() const;
};

// Per-command energies in pJ; background power in mW (= pJ/ns).
struct EnergyParams {
  double e_act_pre = 2500.0;   // one activate + its precharge share
  double e_rd = 400.0;         // column read burst
  double e_wr = 600.0;         // full-row write through the write drivers
  double e_tlpe_cycle = 13.0;  // one TLPE array compute cycle
  double p_background = 2.0;   // standby power

  void validate() const;
};

enum class CommandKind { ACT, PRE, PREA, RD, WR, COMPUTE, TRA, DRA };

const char* to_string(CommandKind k);
std::optional<CommandKind> command_kind_from_string(const std::string& s);

struct DramCommand {
  CommandKind kind = CommandKind::ACT;
  int bank = 0;
  int row = 0;
  int cycles = 0;  // COMPUTE only
  double issue_ns = 0.0;
};

struct TraceViolation {
  std::string rule;
  std::size_t command_index = 0;
  std::string detail;
};

struct CommandTrace {
  std::vector<DramCommand> commands;
  double total_latency = 0.0;
  std::vector<TraceViolation> violations;

  // Sort by issue time and recompute the busy span (first issue to last
  // command completion under tp).
  void finalize(const TimingParams& tp);
  bool empty() const { return commands.empty(); }
};

// Completion time of one command (issue + occupancy).
double command_completion(const DramCommand& c, const TimingParams& tp);

// FIFO per-device command scheduler. issue() places each request at the
// earliest time satisfying the protocol, mutating bank/device state.
// Deterministic: identical request streams give identical traces.
class DeviceScheduler {
 public:
  DeviceScheduler(const TimingParams& tp, const DramGeometry& geom);

  // Returns the assigned issue time. Throws ProtocolError on illegal use
  // (e.g. RD/WR to a precharged bank). Issue times are globally
  // non-decreasing over the call sequence (the command bus runs forward), so
  // callers that want overlap must interleave their requests in time order.
  double issue(CommandKind kind, int bank, int row, double request_ns, int cycles = 0);

  // Earliest legal time for the command without committing it.
  double probe(CommandKind kind, int bank, int row, double request_ns) const;

  const std::vector<DramCommand>& trace() const { return trace_; }
  void clear_trace() { trace_.clear(); }
  const TimingParams& timing() const { return tp_; }
  const DramGeometry& geometry() const { return geom_; }

  bool bank_open(int bank) const { return banks_[static_cast<std::size_t>(bank)].open; }
  int bank_open_row(int bank) const { return banks_[static_cast<std::size_t>(bank)].open_row; }
  double bank_last_act(int bank) const { return banks_[static_cast<std::size_t>(bank)].last_act; }

 private:
  struct BankState {
    bool open = false;
    int open_row = -1;
    double last_act = -1e18;
    double last_wr = -1e18;
    double pre_done = 0.0;
  };

  double earliest_act(int bank, double t) const;
  double earliest_time(CommandKind kind, int bank, int row, double t) const;
  void record_act(int bank, int row, double t);

  TimingParams tp_;
  DramGeometry geom_;
  std::vector<BankState> banks_;
  double last_issue_ = -1e18;
  double last_act_any_ = -1e18;
  std::deque<double> act_window_;  // up to 4 most recent ACT times
  std::vector<DramCommand> trace_;
};

// Macro sequences used by the charge-sharing platforms.
enum class MacroKind { AAP, AP };

// Expand a macro into its primitive commands (rows for AAP are src then dst).
std::vector<DramCommand> expand_macro(MacroKind kind, int bank, int src_row, int dst_row);

double macro_latency(MacroKind kind, const TimingParams& tp);

// Independent protocol checker: re-derives bank state from a time-sorted
// trace and reports every rule breach. Kept free of DeviceScheduler logic so
// the two can cross-validate.
std::vector<TraceViolation> check_trace(const CommandTrace& trace, const TimingParams& tp,
                                        const DramGeometry& geom = DramGeometry{});

// Command-class energy plus background power over the trace span.
double energy_of(const CommandTrace& trace, const EnergyParams& ep);

// CSV export/import, columns: issue_time_ns,kind,bank,row. For COMPUTE the
// row column carries the cycle count.
void write_trace_csv(std::ostream& os, const CommandTrace& trace);
CommandTrace read_trace_csv(std::istream& is, const TimingParams& tp);

}  // namespace cidan
