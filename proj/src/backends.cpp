#include "cidan/backends.hpp"

#include <algorithm>

#include "cidan/errors.hpp"

namespace cidan {

const char* to_string(BackendKind b) {
  switch (b) {
    case BackendKind::Cidan: return "cidan";
    case BackendKind::Ambit: return "ambit";
    case BackendKind::Redram: return "redram";
    case BackendKind::Drisa: return "drisa";
  }
  return "?";
}

const char* to_string(RowFunc f) {
  switch (f) {
    case RowFunc::Copy: return "copy";
    case RowFunc::Not: return "not";
    case RowFunc::And: return "and";
    case RowFunc::Or: return "or";
    case RowFunc::Xor: return "xor";
    case RowFunc::Add: return "add";
  }
  return "?";
}

std::optional<BackendKind> backend_from_string(const std::string& s) {
  if (s == "cidan") return BackendKind::Cidan;
  if (s == "ambit") return BackendKind::Ambit;
  if (s == "redram") return BackendKind::Redram;
  if (s == "drisa") return BackendKind::Drisa;
  return std::nullopt;
}

std::optional<RowFunc> rowfunc_from_string(const std::string& s) {
  if (s == "copy") return RowFunc::Copy;
  if (s == "not") return RowFunc::Not;
  if (s == "and") return RowFunc::And;
  if (s == "or") return RowFunc::Or;
  if (s == "xor") return RowFunc::Xor;
  if (s == "add") return RowFunc::Add;
  return std::nullopt;
}

bool supports(BackendKind backend, RowFunc func) {
  switch (backend) {
    case BackendKind::Cidan:
      return true;
    case BackendKind::Redram:
    case BackendKind::Ambit:
      return func != RowFunc::Add;
    case BackendKind::Drisa:
      return func == RowFunc::Copy || func == RowFunc::Not || func == RowFunc::And;
  }
  return false;
}

MacroCounts& MacroCounts::operator+=(const MacroCounts& o) {
  aap += o.aap;
  ap += o.ap;
  act += o.act;
  wr += o.wr;
  prea += o.prea;
  compute_cycles += o.compute_cycles;
  return *this;
}

MacroCounts expected_macro_counts(BackendKind backend, RowFunc func) {
  if (!supports(backend, func))
    throw UnsupportedOpError(std::string(to_string(backend)) + " does not implement " +
                             to_string(func));
  MacroCounts m;
  switch (backend) {
    case BackendKind::Cidan:
      m.act = (func == RowFunc::Copy || func == RowFunc::Not) ? 2 : 3;
      m.wr = 1;
      m.prea = 1;
      m.compute_cycles = (func == RowFunc::Xor || func == RowFunc::Add) ? 2 : 1;
      break;
    case BackendKind::Redram:
      m.aap = (func == RowFunc::Copy || func == RowFunc::Not) ? 1 : 3;
      break;
    case BackendKind::Ambit:
      switch (func) {
        case RowFunc::Copy: m.aap = 1; break;
        case RowFunc::Not: m.aap = 2; break;
        case RowFunc::And:
        case RowFunc::Or: m.aap = 4; break;
        case RowFunc::Xor: m.aap = 5; m.ap = 2; break;
        default: break;
      }
      break;
    case BackendKind::Drisa:
      switch (func) {
        case RowFunc::Copy: m.ap = 2; break;
        case RowFunc::Not: m.aap = 2; break;
        case RowFunc::And: m.aap = 2; m.ap = 1; break;
        default: break;
      }
      break;
  }
  return m;
}

int compute_row(const DramGeometry& geom, int slot) {
  if (slot < 0 || slot >= kComputeRowCount)
    throw std::invalid_argument("compute_row: bad slot");
  return geom.rows_per_bank - 1 - slot;
}

BitRow ambit_majority(MemoryImage& mem, RowRef a, RowRef b, RowRef c) {
  const BitRow& ra = mem.row(a);
  const BitRow& rb = mem.row(b);
  const BitRow& rc = mem.row(c);
  BitRow maj = (ra & rb) | (rb & rc) | (ra & rc);
  // Charge sharing leaves the computed value in all three rows.
  mem.write_row(a, maj);
  mem.write_row(b, maj);
  mem.write_row(c, maj);
  return maj;
}

BitRow redram_dra(MemoryImage& mem, RowRef a, RowRef b, DraMode mode) {
  const BitRow& ra = mem.row(a);
  const BitRow& rb = mem.row(b);
  BitRow out;
  switch (mode) {
    case DraMode::Nand2: out = ~(ra & rb); break;
    case DraMode::Nor2: out = ~(ra | rb); break;
    case DraMode::And2: out = ra & rb; break;
    case DraMode::Or2: out = ra | rb; break;
    case DraMode::Not: out = ~ra; break;
  }
  mem.write_row(a, out);
  if (mode != DraMode::Not) mem.write_row(b, out);
  return out;
}

namespace {

using Dep = OpProgram::Dep;

bool is_unary(RowFunc f) { return f == RowFunc::Copy || f == RowFunc::Not; }

void push_aap(OpProgram& p, int bank, int first_row, int second_row,
              CommandKind first_kind = CommandKind::ACT) {
  const Dep lead = p.cmds.empty() ? Dep::OpStart : Dep::Prev;
  p.cmds.push_back({first_kind, bank, first_row, 0, lead});
  p.cmds.push_back({CommandKind::ACT, bank, second_row, 0, Dep::Prev});
  p.cmds.push_back({CommandKind::PRE, bank, 0, 0, Dep::Prev});
  p.counts.aap += 1;
}

void push_ap(OpProgram& p, int bank, int row) {
  const Dep lead = p.cmds.empty() ? Dep::OpStart : Dep::Prev;
  p.cmds.push_back({CommandKind::ACT, bank, row, 0, lead});
  p.cmds.push_back({CommandKind::PRE, bank, 0, 0, Dep::Prev});
  p.counts.ap += 1;
}

void push_cidan_op(OpProgram& p, const std::vector<RowRef>& acts, RowRef dest, int cycles) {
  for (std::size_t i = 0; i < acts.size(); ++i) {
    const Dep lead = p.cmds.empty() ? Dep::OpStart : Dep::Prev;
    p.cmds.push_back({CommandKind::ACT, acts[i].bank, acts[i].row, 0, lead});
    p.counts.act += 1;
  }
  p.cmds.push_back({CommandKind::COMPUTE, dest.bank, 0, cycles, Dep::DataReady});
  p.counts.compute_cycles += cycles;
  p.cmds.push_back({CommandKind::WR, dest.bank, dest.row, 0, Dep::ComputeDone});
  p.counts.wr += 1;
  p.cmds.push_back({CommandKind::PREA, dest.bank, 0, 0, Dep::WriteBack});
  p.counts.prea += 1;
}

int in_bank_row(const RowRef& r, int bank, int staging_row) {
  return r.bank == bank ? r.row : staging_row;
}

int cidan_cycles(RowFunc func) {
  return (func == RowFunc::Xor || func == RowFunc::Add) ? 2 : 1;
}

TlpeFunc tlpe_func_for(RowFunc func) {
  switch (func) {
    case RowFunc::Not: return TlpeFunc::Not;
    case RowFunc::And: return TlpeFunc::And;
    case RowFunc::Or: return TlpeFunc::Or;
    case RowFunc::Xor: return TlpeFunc::Xor;
    default: throw UnsupportedOpError("no TLPE schedule for this function");
  }
}

}  // namespace

ResolvedPlacement resolve_cidan_placement(const DramGeometry& geom, RowFunc func, RowRef src1,
                                          RowRef src2, RowRef dest) {
  const int gsize = geom.bank_group_size;
  const bool unary = is_unary(func);
  if (gsize < (unary ? 2 : 3))
    throw AllocationError("cidan: bank group too small for the operand set");
  const int gbase = (dest.bank / gsize) * gsize;

  ResolvedPlacement r;
  std::vector<int> used = {dest.bank};
  auto stage = [&](RowRef ref, int slot) -> RowRef {
    int staging_bank = -1;
    for (int b = gbase; b < gbase + gsize; ++b) {
      if (b == ref.bank) continue;
      if (std::find(used.begin(), used.end(), b) != used.end()) continue;
      staging_bank = b;
      break;
    }
    if (staging_bank < 0) throw AllocationError("cidan: no staging bank available");
    used.push_back(staging_bank);
    const RowRef staged{staging_bank, compute_row(geom, slot)};
    r.fixups.emplace_back(ref, staged);
    return staged;
  };
  auto place = [&](RowRef ref, int slot) -> RowRef {
    const bool in_group = ref.bank >= gbase && ref.bank < gbase + gsize;
    if (in_group && std::find(used.begin(), used.end(), ref.bank) == used.end()) {
      used.push_back(ref.bank);
      return ref;
    }
    return stage(ref, slot);
  };

  if (func == RowFunc::Copy) {
    // Copy is the staging primitive itself; it only needs two distinct banks
    // (an inter-group hop rides the shared data path at the same cost).
    r.src1 = src1.bank == dest.bank ? stage(src1, 0) : src1;
  } else {
    r.src1 = place(src1, 0);
    if (!unary) r.src2 = place(src2, 1);
  }
  return r;
}

OpProgram build_rowop_program(BackendKind backend, RowFunc func, const DramGeometry& geom,
                              RowRef src1, RowRef src2, RowRef dest) {
  if (func == RowFunc::Add)
    throw UnsupportedOpError("build_rowop_program: addition uses its own entry point");
  if (!supports(backend, func))
    throw UnsupportedOpError(std::string(to_string(backend)) + " does not implement " +
                             to_string(func));

  OpProgram p;
  const bool unary = is_unary(func);

  if (backend == BackendKind::Cidan) {
    const ResolvedPlacement rp = resolve_cidan_placement(geom, func, src1, src2, dest);
    for (const auto& [from, to] : rp.fixups) {
      OpProgram copy = build_rowop_program(BackendKind::Cidan, RowFunc::Copy, geom, from,
                                           RowRef{}, to);
      for (auto cmd : copy.cmds) {
        if (!p.cmds.empty() && cmd.dep == Dep::OpStart) cmd.dep = Dep::Prev;
        p.cmds.push_back(cmd);
      }
      p.counts += copy.counts;
    }
    std::vector<RowRef> acts = unary ? std::vector<RowRef>{rp.src1, dest}
                                     : std::vector<RowRef>{rp.src1, rp.src2, dest};
    push_cidan_op(p, acts, dest, cidan_cycles(func));
    return p;
  }

  // Charge-sharing platforms work in the destination bank's compute-row
  // area; cross-bank sources are represented by the staging rows, their
  // copies are covered by the published macro counts.
  const int bank = dest.bank;
  const int t1 = compute_row(geom, 0);
  const int t2 = compute_row(geom, 1);
  const int t3 = compute_row(geom, 2);
  const int ctl = compute_row(geom, 3);

  switch (backend) {
    case BackendKind::Redram:
      if (func == RowFunc::Copy) {
        push_aap(p, bank, in_bank_row(src1, bank, t1), dest.row);
      } else if (func == RowFunc::Not) {
        push_aap(p, bank, t1, dest.row, CommandKind::DRA);
      } else {
        push_aap(p, bank, in_bank_row(src1, bank, t1), t1);
        push_aap(p, bank, in_bank_row(src2, bank, t2), t2);
        push_aap(p, bank, t1, dest.row, CommandKind::DRA);
      }
      break;

    case BackendKind::Ambit:
      if (func == RowFunc::Copy) {
        push_aap(p, bank, in_bank_row(src1, bank, t1), dest.row);
      } else if (func == RowFunc::Not) {
        push_aap(p, bank, in_bank_row(src1, bank, t1), t3);  // into the dual-contact row
        push_aap(p, bank, t3, dest.row);
      } else if (func == RowFunc::And || func == RowFunc::Or) {
        push_aap(p, bank, in_bank_row(src1, bank, t1), t1);
        push_aap(p, bank, in_bank_row(src2, bank, t2), t2);
        push_aap(p, bank, ctl, ctl);  // control row initialization
        push_aap(p, bank, t1, dest.row, CommandKind::TRA);
      } else {  // Xor
        push_aap(p, bank, in_bank_row(src1, bank, t1), t1);
        push_aap(p, bank, in_bank_row(src2, bank, t2), t2);
        push_aap(p, bank, in_bank_row(src2, bank, t2), t3);  // complement via dual-contact
        push_ap(p, bank, ctl);
        push_ap(p, bank, ctl);
        push_aap(p, bank, t1, t1, CommandKind::TRA);
        push_aap(p, bank, t2, dest.row, CommandKind::TRA);
      }
      break;

    case BackendKind::Drisa:
      if (func == RowFunc::Copy) {
        push_ap(p, bank, in_bank_row(src1, bank, t1));
        push_ap(p, bank, dest.row);
      } else if (func == RowFunc::Not) {
        push_aap(p, bank, in_bank_row(src1, bank, t1), t3);
        push_aap(p, bank, t3, dest.row);
      } else {  // And: AP AAP AAP
        push_ap(p, bank, ctl);
        push_aap(p, bank, in_bank_row(src1, bank, t1), t1);
        push_aap(p, bank, in_bank_row(src2, bank, t2), dest.row, CommandKind::DRA);
      }
      break;

    case BackendKind::Cidan:
      break;  // handled above
  }
  return p;
}

void apply_rowop_memory(BackendKind backend, RowFunc func, MemoryImage& mem, RowRef src1,
                        RowRef src2, RowRef dest) {
  const DramGeometry& geom = mem.geometry();
  const bool unary = is_unary(func);
  const std::size_t nbits = static_cast<std::size_t>(geom.row_bits());

  if (backend == BackendKind::Cidan) {
    const ResolvedPlacement rp = resolve_cidan_placement(geom, func, src1, src2, dest);
    for (const auto& [from, to] : rp.fixups) mem.write_row(to, mem.row(from));
    const int gsize = geom.bank_group_size;
    const int gbase = (dest.bank / gsize) * gsize;
    const int pos1 = rp.src1.bank % gsize;

    Schedule sched_fn;
    if (func == RowFunc::Copy)
      sched_fn = bind_operands(passthrough_schedule(), pos1, (pos1 + 1) % gsize);
    else if (unary)
      sched_fn = bind_operands(compile_schedule(TlpeFunc::Not), pos1, (pos1 + 1) % gsize);
    else
      sched_fn = bind_operands(compile_schedule(tlpe_func_for(func)), pos1,
                               rp.src2.bank - gbase);

    // The TLPE array sees the open rows on its per-bank input lines.
    std::array<const BitRow*, 4> lines = {nullptr, nullptr, nullptr, nullptr};
    BitRow r1 = mem.row(rp.src1);
    BitRow r2 = unary ? BitRow(nbits) : mem.row(rp.src2);
    lines[static_cast<std::size_t>(pos1)] = &r1;
    if (!unary) lines[static_cast<std::size_t>(rp.src2.bank - gbase)] = &r2;
    TlpeaState st(nbits);
    mem.write_row(dest, tlpea_apply(sched_fn, lines, st));
    return;
  }

  const int bank = dest.bank;
  const RowRef t1{bank, compute_row(geom, 0)};
  const RowRef t2{bank, compute_row(geom, 1)};
  const RowRef t3{bank, compute_row(geom, 2)};
  const RowRef ctl{bank, compute_row(geom, 3)};
  const BitRow a = mem.row(src1);
  const BitRow b = unary ? BitRow(nbits) : mem.row(src2);

  switch (backend) {
    case BackendKind::Redram:
      if (func == RowFunc::Copy) {
        mem.write_row(dest, a);
      } else if (func == RowFunc::Not) {
        mem.write_row(t1, a);
        mem.write_row(dest, redram_dra(mem, t1, t2, DraMode::Not));
      } else {
        mem.write_row(t1, a);
        mem.write_row(t2, b);
        BitRow out;
        if (func == RowFunc::And)
          out = redram_dra(mem, t1, t2, DraMode::And2);
        else if (func == RowFunc::Or)
          out = redram_dra(mem, t1, t2, DraMode::Or2);
        else {
          // The selectable sense amplifier evaluates the pair function in the
          // single dual-row activation.
          out = (a | b) & ~(a & b);
          mem.write_row(t1, out);
          mem.write_row(t2, out);
        }
        mem.write_row(dest, out);
      }
      break;

    case BackendKind::Ambit:
      if (func == RowFunc::Copy) {
        mem.write_row(dest, a);
      } else if (func == RowFunc::Not) {
        mem.write_row(t3, a);  // complement readable on the dual-contact port
        mem.write_row(dest, ~a);
      } else if (func == RowFunc::And || func == RowFunc::Or) {
        mem.write_row(t1, a);
        mem.write_row(t2, b);
        mem.write_row(ctl, func == RowFunc::And ? BitRow::zeros(nbits) : BitRow::ones(nbits));
        mem.write_row(dest, ambit_majority(mem, t1, t2, ctl));
      } else {  // Xor
        mem.write_row(t1, a);
        mem.write_row(t2, b);
        mem.write_row(t3, ~b);
        mem.write_row(ctl, BitRow::zeros(nbits));
        ambit_majority(mem, t1, t3, ctl);  // t1 = a & ~b
        // Second minterm comes out of the complement port; the in-array
        // detail is abstracted, the command sequence is the published one.
        mem.write_row(t2, ~a & b);
        mem.write_row(ctl, BitRow::ones(nbits));
        mem.write_row(dest, ambit_majority(mem, t2, t1, ctl));
      }
      break;

    case BackendKind::Drisa:
      if (func == RowFunc::Copy) {
        mem.write_row(dest, a);
      } else if (func == RowFunc::Not) {
        mem.write_row(t3, a);
        mem.write_row(dest, ~a);
      } else {
        mem.write_row(ctl, BitRow::zeros(nbits));
        mem.write_row(t1, a);
        mem.write_row(t2, a & b);
        mem.write_row(dest, a & b);
      }
      break;

    case BackendKind::Cidan:
      break;
  }
}

ProgramRun::ProgramRun(const OpProgram* prog, double arrival)
    : prog_(prog), arrival_(arrival), prev_issue_(arrival) {}

double ProgramRun::request_time(const TimingParams& tp) const {
  const OpProgram::Cmd& c = prog_->cmds[idx_];
  switch (c.dep) {
    case Dep::OpStart: return arrival_;
    case Dep::Prev: return prev_issue_;
    case Dep::DataReady: return last_act_issue_ + tp.t_rcd;
    case Dep::ComputeDone: return compute_done_;
    case Dep::WriteBack: return wr_issue_ + tp.t_wr + tp.t_writeback_extra;
  }
  return arrival_;
}

double ProgramRun::probe(const DeviceScheduler& sched) const {
  const OpProgram::Cmd& c = prog_->cmds[idx_];
  return sched.probe(c.kind, c.bank, c.row, request_time(sched.timing()));
}

double ProgramRun::commit(DeviceScheduler& sched) {
  const OpProgram::Cmd& c = prog_->cmds[idx_];
  const double t = sched.issue(c.kind, c.bank, c.row, request_time(sched.timing()), c.cycles);
  prev_issue_ = t;
  if (c.kind == CommandKind::ACT || c.kind == CommandKind::TRA || c.kind == CommandKind::DRA)
    last_act_issue_ = t;
  if (c.kind == CommandKind::COMPUTE)
    compute_done_ = t + c.cycles * sched.timing().t_ck;
  if (c.kind == CommandKind::WR) wr_issue_ = t;
  issued_.push_back(DramCommand{c.kind, c.bank, c.row, c.cycles, t});
  ++idx_;
  return t;
}

RunStats run_program(const OpProgram& prog, DeviceScheduler& sched, double arrival,
                     const EnergyParams* ep) {
  ProgramRun run(&prog, arrival);
  while (!run.done()) run.commit(sched);
  RunStats stats;
  stats.trace.commands = run.issued();
  stats.trace.finalize(sched.timing());
  stats.latency_ns = stats.trace.total_latency;
  stats.macro_counts = prog.counts;
  if (ep) stats.energy_pj = energy_of(stats.trace, *ep);
  return stats;
}

RunStats exec_rowop(BackendKind backend, RowFunc func, MemoryImage& mem, DeviceScheduler& sched,
                    RowRef src1, RowRef src2, RowRef dest, double request_ns,
                    const EnergyParams* ep) {
  if (func == RowFunc::Add)
    throw UnsupportedOpError("exec_rowop: use exec_add_rows for addition");
  const OpProgram prog = build_rowop_program(backend, func, mem.geometry(), src1, src2, dest);
  apply_rowop_memory(backend, func, mem, src1, src2, dest);
  return run_program(prog, sched, request_ns, ep);
}

RunStats exec_add_rows(BackendKind backend, MemoryImage& mem, DeviceScheduler& sched, RowRef src_a,
                       RowRef src_b, RowRef carry_in, RowRef dest_sum, RowRef dest_carry,
                       double request_ns, const EnergyParams* ep) {
  if (backend != BackendKind::Cidan)
    throw UnsupportedOpError(std::string(to_string(backend)) + " does not implement add");

  const DramGeometry& geom = mem.geometry();
  const int gsize = geom.bank_group_size;
  const int gbase = (dest_sum.bank / gsize) * gsize;

  auto in_group = [&](RowRef r) { return r.bank >= gbase && r.bank < gbase + gsize; };
  if (!in_group(src_a) || !in_group(src_b) || src_a.bank == src_b.bank ||
      src_a.bank == dest_sum.bank || src_b.bank == dest_sum.bank)
    throw AllocationError("cidan add: operands must occupy distinct banks of one group");

  OpProgram prog;
  push_cidan_op(prog, {src_a, src_b, dest_sum}, dest_sum, 2);

  // Carry-in is pre-loaded into the lane L1 latches; the carry-out is
  // materialized from the latches (no extra bus command, matching the
  // published sequence).
  Schedule add = bind_operands(compile_schedule(TlpeFunc::AddBit), src_a.bank - gbase,
                               src_b.bank - gbase);
  TlpeaState st(static_cast<std::size_t>(geom.row_bits()));
  st.l1 = mem.row(carry_in);
  std::array<const BitRow*, 4> lines = {nullptr, nullptr, nullptr, nullptr};
  BitRow ra = mem.row(src_a);
  BitRow rb = mem.row(src_b);
  lines[static_cast<std::size_t>(src_a.bank - gbase)] = &ra;
  lines[static_cast<std::size_t>(src_b.bank - gbase)] = &rb;
  BitRow sum = tlpea_apply(add, lines, st);
  mem.write_row(dest_sum, sum);
  mem.write_row(dest_carry, st.l1);
  return run_program(prog, sched, request_ns, ep);
}

RunStats copy_row(BackendKind backend, MemoryImage& mem, DeviceScheduler& sched, RowRef src,
                  RowRef dest, double request_ns, const EnergyParams* ep) {
  return exec_rowop(backend, RowFunc::Copy, mem, sched, src, RowRef{}, dest, request_ns, ep);
}

}  // namespace cidan
