#include <algorithm>
#include <map>

#include "cidan/errors.hpp"
#include "cidan/workloads.hpp"

namespace cidan {

namespace {

constexpr int kPinnedRows = 16;

// Row-resident bit-vector register file for the recurrence state. Every
// bitwise step is a real back-end row operation; destinations take a fresh
// row in a bank distinct from both sources (and from any bank the value is
// known to pair with later), so the distinct-bank rule holds without extra
// copies.
class VectorRegs {
 public:
  VectorRegs(MemoryImage& mem, DeviceScheduler& sched, BackendKind backend,
             const ExperimentConfig& cfg, WorkloadStats& stats)
      : mem_(mem),
        sched_(sched),
        backend_(backend),
        cfg_(cfg),
        stats_(stats),
        gsize_(cfg.geometry.bank_group_size),
        next_row_(static_cast<std::size_t>(gsize_), 0) {}

  RowRef host_store(const BitRow& v, std::initializer_list<RowRef> avoid = {}) {
    const RowRef ref = fresh_row(avoid);
    mem_.write_row(ref, padded(v));
    // Host writes a full row image.
    stats_.host_ns += static_cast<double>(cfg_.geometry.row_bytes()) *
                      cfg_.host_cost.ns_per_host_byte;
    return ref;
  }

  RowRef op2(RowFunc func, RowRef a, RowRef b, std::initializer_list<RowRef> avoid = {}) {
    std::vector<RowRef> av{a, b};
    av.insert(av.end(), avoid.begin(), avoid.end());
    const RowRef dest = fresh_row_v(av);
    RunStats s = exec_rowop(backend_, func, mem_, sched_, a, b, dest);
    stats_.pim.macro_counts += s.macro_counts;
    stats_.op_mix[to_string(func)] += 1;
    return dest;
  }

  RowRef op_not(RowRef a, std::initializer_list<RowRef> avoid = {}) {
    std::vector<RowRef> av{a};
    av.insert(av.end(), avoid.begin(), avoid.end());
    const RowRef dest = fresh_row_v(av);
    RunStats s = exec_rowop(backend_, RowFunc::Not, mem_, sched_, a, RowRef{}, dest);
    stats_.pim.macro_counts += s.macro_counts;
    stats_.op_mix["not"] += 1;
    return dest;
  }

  const BitRow& value(RowRef r) const { return mem_.row(r); }
  MemoryImage& mem() { return mem_; }
  DeviceScheduler& sched() { return sched_; }

 private:
  BitRow padded(const BitRow& v) const {
    BitRow row(static_cast<std::size_t>(cfg_.geometry.row_bits()));
    for (std::size_t i = 0; i < v.size(); ++i) row.set(i, v.get(i));
    return row;
  }

  RowRef fresh_row(std::initializer_list<RowRef> avoid) {
    std::vector<RowRef> av(avoid.begin(), avoid.end());
    return fresh_row_v(av);
  }

  RowRef fresh_row_v(const std::vector<RowRef>& avoid) {
    for (int b = 0; b < gsize_; ++b) {
      bool bad = false;
      for (const RowRef& r : avoid)
        if (r.bank == b) bad = true;
      if (bad) continue;
      auto& row = next_row_[static_cast<std::size_t>(b)];
      // Ring reuse of dead register rows; the first rows stay pinned for the
      // resident Peq table.
      if (row >= cfg_.geometry.rows_per_bank - kComputeRowCount) row = kPinnedRows;
      return RowRef{b, row++};
    }
    throw AllocationError("myers: no destination bank available");
  }

  MemoryImage& mem_;
  DeviceScheduler& sched_;
  BackendKind backend_;
  const ExperimentConfig& cfg_;
  WorkloadStats& stats_;
  int gsize_;
  std::vector<int> next_row_;
};

// Word-chain add over the first m lanes of two rows (the one carry-breaking
// step of the recurrence); executed on the host by default.
BitRow host_add(const BitRow& a, const BitRow& b, std::size_t m) {
  BitRow out(a.size());
  unsigned __int128 carry = 0;
  const std::size_t words = (m + 63) / 64;
  for (std::size_t w = 0; w < words; ++w) {
    const unsigned __int128 s =
        static_cast<unsigned __int128>(a.word(w)) + b.word(w) + carry;
    out.word(w) = static_cast<std::uint64_t>(s);
    carry = s >> 64;
  }
  return out;
}

}  // namespace

MyersResult myers_search(const std::string& pattern, const std::string& text,
                         BackendKind backend, const ExperimentConfig& cfg,
                         MyersAddStrategy strategy) {
  const std::size_t m = pattern.size();
  const std::size_t row_bits = static_cast<std::size_t>(cfg.geometry.row_bits());
  if (m == 0) throw std::invalid_argument("myers: empty pattern");
  if (m > row_bits)
    throw std::invalid_argument("myers: pattern too long for single-row mode");
  if (strategy == MyersAddStrategy::PimTransposedAdd && backend != BackendKind::Cidan)
    throw UnsupportedOpError("transposed in-memory add needs the cidan adder");

  MemoryImage mem(cfg.geometry);
  DeviceScheduler sched(cfg.timing, cfg.geometry);
  MyersResult out;
  WorkloadStats& stats = out.stats;
  VectorRegs regs(mem, sched, backend, cfg, stats);

  // Peq preprocessing: one resident row per alphabet symbol.
  std::map<char, BitRow> peq_host;
  for (std::size_t i = 0; i < m; ++i) {
    auto it = peq_host.try_emplace(pattern[i], BitRow(row_bits)).first;
    it->second.set(i, true);
  }
  std::map<char, RowRef> peq;
  for (auto& [c, row] : peq_host) peq[c] = regs.host_store(row);
  const RowRef zero_eq = regs.host_store(BitRow(row_bits));  // symbols absent from the pattern

  BitRow pv_init(row_bits);
  for (std::size_t i = 0; i < m; ++i) pv_init.set(i, true);
  RowRef pv = regs.host_store(pv_init, {zero_eq});
  RowRef mv = regs.host_store(BitRow(row_bits), {zero_eq, pv});

  int score = static_cast<int>(m);
  const std::size_t msb = m - 1;
  out.distances.reserve(text.size());

  for (char tc : text) {
    auto peq_it = peq.find(tc);
    const RowRef eq = peq_it == peq.end() ? zero_eq : peq_it->second;

    const RowRef xv = regs.op2(RowFunc::Or, eq, mv);
    const RowRef t1 = regs.op2(RowFunc::And, eq, pv);

    RowRef t2;
    if (strategy == MyersAddStrategy::HostAdd) {
      // Carry propagation crosses lanes, so the sum is formed on the host and
      // written back as a row.
      BitRow sum = host_add(regs.value(t1), regs.value(pv), m);
      stats.host_ns += 3.0 * static_cast<double>((m + 7) / 8) * cfg.host_cost.ns_per_host_byte;
      t2 = regs.host_store(sum, {pv});
    } else {
      // Transposed in-memory add: bit k of the two operands becomes plane k,
      // planes ripple through the full-adder schedule two cycles each.
      const int gsize = cfg.geometry.bank_group_size;
      RowRef carry{3 % gsize, compute_row(cfg.geometry, 6)};
      mem.write_row(carry, BitRow(row_bits));
      BitRow sum(row_bits);
      const BitRow va = regs.value(t1);
      const BitRow vb = regs.value(pv);
      for (std::size_t k = 0; k < m; ++k) {
        BitRow pa(row_bits), pb(row_bits);
        pa.set(0, va.get(k));
        pb.set(0, vb.get(k));
        const RowRef ra = regs.host_store(pa);
        const RowRef rb = regs.host_store(pb, {ra});
        std::vector<RowRef> av{ra, rb};
        RowRef dest{-1, -1};
        for (int b = 0; b < gsize; ++b)
          if (b != ra.bank && b != rb.bank && b != carry.bank) {
            dest = RowRef{b, compute_row(cfg.geometry, 7)};
            break;
          }
        const RowRef carry_out{carry.bank, compute_row(cfg.geometry, 5)};
        RunStats s = exec_add_rows(BackendKind::Cidan, mem, sched, ra, rb, carry, dest,
                                   carry_out);
        stats.pim.macro_counts += s.macro_counts;
        stats.op_mix["add"] += 1;
        sum.set(k, mem.row(dest).get(0));
        mem.write_row(carry, mem.row(carry_out));
      }
      t2 = regs.host_store(sum, {pv});
    }

    const RowRef t3 = regs.op2(RowFunc::Xor, t2, pv);
    const RowRef xh = regs.op2(RowFunc::Or, t3, eq, {pv});
    const RowRef t4 = regs.op2(RowFunc::Or, xh, pv);
    const RowRef t5 = regs.op_not(t4, {mv});
    const RowRef ph = regs.op2(RowFunc::Or, mv, t5, {xv});
    const RowRef mh = regs.op2(RowFunc::And, pv, xh);

    if (regs.value(ph).get(msb))
      score += 1;
    else if (regs.value(mh).get(msb))
      score -= 1;
    out.distances.push_back(score);

    // Horizontal deltas shift down one lane before forming the next column;
    // the lane shift crosses bit-lines and stays on the host.
    BitRow ph_shift = regs.value(ph).shifted_left(1);
    BitRow mh_shift = regs.value(mh).shifted_left(1);
    stats.host_ns += 2.0 * static_cast<double>((m + 7) / 8) * cfg.host_cost.ns_per_host_byte;
    const RowRef phs = regs.host_store(ph_shift, {xv});
    const RowRef mhs = regs.host_store(mh_shift, {xv, phs});

    const RowRef t6 = regs.op2(RowFunc::Or, xv, phs, {mhs});
    const RowRef t7 = regs.op_not(t6, {mhs});
    pv = regs.op2(RowFunc::Or, mhs, t7, {zero_eq});
    mv = regs.op2(RowFunc::And, phs, xv, {zero_eq, pv});
  }

  stats.pim.trace.commands = sched.trace();
  stats.pim.trace.finalize(cfg.timing);
  stats.pim.latency_ns = stats.pim.trace.total_latency;
  stats.pim.energy_pj = energy_of(stats.pim.trace, cfg.energy);
  return out;
}

}  // namespace cidan
