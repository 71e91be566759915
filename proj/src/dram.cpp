#include "cidan/dram.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace cidan {

namespace {
constexpr double kEps = 1e-9;  // slack for float comparisons on ns values
}

void DramGeometry::validate() const {
  if (banks_per_chip <= 0 || rows_per_bank <= 0 || cols_per_row <= 0 || bits_per_col <= 0)
    throw std::invalid_argument("DramGeometry: counts must be positive");
  if (bank_group_size <= 0 || banks_per_chip % bank_group_size != 0)
    throw std::invalid_argument("DramGeometry: banks_per_chip must be divisible by bank_group_size");
}

void TimingParams::validate() const {
  const double all[] = {t_rcd, t_ras, t_rp, t_rc, t_rrd, t_faw, t_ck, t_wr};
  for (double v : all)
    if (v <= 0.0) throw std::invalid_argument("TimingParams: durations must be positive");
  if (t_writeback_extra < 0.0)
    throw std::invalid_argument("TimingParams: t_writeback_extra must be non-negative");
  if (std::abs(t_rc - (t_ras + t_rp)) > kEps)
    throw std::invalid_argument("TimingParams: t_rc must equal t_ras + t_rp");
  if (t_faw < t_rrd) throw std::invalid_argument("TimingParams: t_faw must be >= t_rrd");
}

void EnergyParams::validate() const {
  const double all[] = {e_act_pre, e_rd, e_wr, e_tlpe_cycle, p_background};
  for (double v : all)
    if (v < 0.0) throw std::invalid_argument("EnergyParams: energies must be non-negative");
}

const char* to_string(CommandKind k) {
  switch (k) {
    case CommandKind::ACT: return "ACT";
    case CommandKind::PRE: return "PRE";
    case CommandKind::PREA: return "PREA";
    case CommandKind::RD: return "RD";
    case CommandKind::WR: return "WR";
    case CommandKind::COMPUTE: return "COMPUTE";
    case CommandKind::TRA: return "TRA";
    case CommandKind::DRA: return "DRA";
  }
  return "?";
}

std::optional<CommandKind> command_kind_from_string(const std::string& s) {
  static const std::map<std::string, CommandKind> m = {
      {"ACT", CommandKind::ACT}, {"PRE", CommandKind::PRE},   {"PREA", CommandKind::PREA},
      {"RD", CommandKind::RD},   {"WR", CommandKind::WR},     {"COMPUTE", CommandKind::COMPUTE},
      {"TRA", CommandKind::TRA}, {"DRA", CommandKind::DRA}};
  auto it = m.find(s);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

double command_completion(const DramCommand& c, const TimingParams& tp) {
  switch (c.kind) {
    case CommandKind::ACT:
    case CommandKind::TRA:
    case CommandKind::DRA:
      return c.issue_ns + tp.t_ras;
    case CommandKind::PRE:
    case CommandKind::PREA:
      return c.issue_ns + tp.t_rp;
    case CommandKind::RD:
      return c.issue_ns;
    case CommandKind::WR:
      return c.issue_ns + tp.t_wr;
    case CommandKind::COMPUTE:
      return c.issue_ns + c.cycles * tp.t_ck;
  }
  return c.issue_ns;
}

void CommandTrace::finalize(const TimingParams& tp) {
  std::stable_sort(commands.begin(), commands.end(),
                   [](const DramCommand& a, const DramCommand& b) { return a.issue_ns < b.issue_ns; });
  if (commands.empty()) {
    total_latency = 0.0;
    return;
  }
  double end = 0.0;
  for (const auto& c : commands) end = std::max(end, command_completion(c, tp));
  total_latency = end - commands.front().issue_ns;
}

DeviceScheduler::DeviceScheduler(const TimingParams& tp, const DramGeometry& geom)
    : tp_(tp), geom_(geom), banks_(static_cast<std::size_t>(geom.banks_per_chip)) {
  tp_.validate();
  geom_.validate();
}

double DeviceScheduler::earliest_act(int bank, double t) const {
  const BankState& bs = banks_[static_cast<std::size_t>(bank)];
  // Device-level activation pacing.
  t = std::max(t, last_act_any_ + tp_.t_rrd);
  if (act_window_.size() == 4) t = std::max(t, act_window_.front() + tp_.t_faw);
  if (bs.open) {
    // Chained activation with the row buffer still charged (the in-DRAM copy
    // trick): spaced t_ras from the previous ACT, no precharge in between.
    t = std::max(t, bs.last_act + tp_.t_ras);
  } else {
    t = std::max(t, bs.pre_done);
    t = std::max(t, bs.last_act + tp_.t_rc);
  }
  return t;
}

void DeviceScheduler::record_act(int bank, int row, double t) {
  BankState& bs = banks_[static_cast<std::size_t>(bank)];
  bs.open = true;
  bs.open_row = row;
  bs.last_act = t;
  last_act_any_ = t;
  act_window_.push_back(t);
  if (act_window_.size() > 4) act_window_.pop_front();
}

double DeviceScheduler::earliest_time(CommandKind kind, int bank, int row, double t) const {
  const BankState& bs = banks_[static_cast<std::size_t>(bank)];
  // The command bus runs forward: nothing may be scheduled before an
  // already-issued command.
  if (kind != CommandKind::COMPUTE) t = std::max(t, last_issue_);

  switch (kind) {
    case CommandKind::ACT:
    case CommandKind::TRA:
    case CommandKind::DRA:
      t = earliest_act(bank, t);
      break;

    case CommandKind::RD:
    case CommandKind::WR:
      if (!bs.open)
        throw ProtocolError(std::string(to_string(kind)) + " to precharged bank (t_rcd rule)");
      if (row != bs.open_row)
        throw ProtocolError(std::string(to_string(kind)) + " to a row that is not open");
      t = std::max(t, bs.last_act + tp_.t_rcd);
      break;

    case CommandKind::PRE:
      if (!bs.open) throw ProtocolError("PRE on a precharged bank");
      t = std::max(t, bs.last_act + tp_.t_ras);
      t = std::max(t, bs.last_wr + tp_.t_wr);
      break;

    case CommandKind::PREA: {
      // Precharge-all is scoped to the issuing bank's group: closing the
      // whole device would tear down rows the other groups' in-flight
      // operations still hold open.
      const int gbase = (bank / geom_.bank_group_size) * geom_.bank_group_size;
      bool any = false;
      for (int b = gbase; b < gbase + geom_.bank_group_size; ++b) {
        const BankState& st = banks_[static_cast<std::size_t>(b)];
        if (!st.open) continue;
        any = true;
        t = std::max(t, st.last_act + tp_.t_ras);
        t = std::max(t, st.last_wr + tp_.t_wr);
      }
      if (!any) throw ProtocolError("PREA with no open bank in the group");
      break;
    }

    case CommandKind::COMPUTE:
      // TLPE array clocking; no DRAM bus constraint.
      break;
  }
  return t;
}

double DeviceScheduler::probe(CommandKind kind, int bank, int row, double request_ns) const {
  if (bank < 0 || bank >= geom_.banks_per_chip)
    throw ProtocolError("probe: bank index out of range");
  return earliest_time(kind, bank, row, request_ns);
}

double DeviceScheduler::issue(CommandKind kind, int bank, int row, double request_ns, int cycles) {
  if (bank < 0 || bank >= geom_.banks_per_chip)
    throw ProtocolError("issue: bank index out of range");
  const double t = earliest_time(kind, bank, row, request_ns);
  BankState& bs = banks_[static_cast<std::size_t>(bank)];

  switch (kind) {
    case CommandKind::ACT:
    case CommandKind::TRA:
    case CommandKind::DRA:
      record_act(bank, row, t);
      break;

    case CommandKind::RD:
      break;
    case CommandKind::WR:
      bs.last_wr = t;
      break;

    case CommandKind::PRE:
      bs.open = false;
      bs.open_row = -1;
      bs.pre_done = t + tp_.t_rp;
      break;

    case CommandKind::PREA: {
      const int gbase = (bank / geom_.bank_group_size) * geom_.bank_group_size;
      for (int b = gbase; b < gbase + geom_.bank_group_size; ++b) {
        BankState& st = banks_[static_cast<std::size_t>(b)];
        if (!st.open) continue;
        st.open = false;
        st.open_row = -1;
        st.pre_done = t + tp_.t_rp;
      }
      break;
    }

    case CommandKind::COMPUTE:
      break;
  }
  if (kind != CommandKind::COMPUTE) last_issue_ = std::max(last_issue_, t);

  trace_.push_back(DramCommand{kind, bank, row, cycles, t});
  return t;
}

std::vector<DramCommand> expand_macro(MacroKind kind, int bank, int src_row, int dst_row) {
  std::vector<DramCommand> cmds;
  if (kind == MacroKind::AAP) {
    cmds.push_back({CommandKind::ACT, bank, src_row, 0, 0.0});
    cmds.push_back({CommandKind::ACT, bank, dst_row, 0, 0.0});
    cmds.push_back({CommandKind::PRE, bank, 0, 0, 0.0});
  } else {
    cmds.push_back({CommandKind::ACT, bank, src_row, 0, 0.0});
    cmds.push_back({CommandKind::PRE, bank, 0, 0, 0.0});
  }
  return cmds;
}

double macro_latency(MacroKind kind, const TimingParams& tp) {
  return kind == MacroKind::AAP ? 2.0 * tp.t_ras + tp.t_rp : tp.t_ras + tp.t_rp;
}

namespace {

bool is_act_class(CommandKind k) {
  return k == CommandKind::ACT || k == CommandKind::TRA || k == CommandKind::DRA;
}

struct CheckerBank {
  bool open = false;
  int open_row = -1;
  double last_act = -1e18;
  double last_wr = -1e18;
  double last_pre = -1e18;
  bool had_pre_since_act = true;
};

}  // namespace

std::vector<TraceViolation> check_trace(const CommandTrace& trace, const TimingParams& tp,
                                        const DramGeometry& geom) {
  std::vector<TraceViolation> out;
  std::vector<double> act_times;
  std::map<int, CheckerBank> banks;

  auto flag = [&](const std::string& rule, std::size_t idx, const std::string& detail) {
    out.push_back({rule, idx, detail});
  };

  for (std::size_t i = 0; i < trace.commands.size(); ++i) {
    const DramCommand& c = trace.commands[i];
    if (i > 0 && c.issue_ns + kEps < trace.commands[i - 1].issue_ns)
      flag("ordering", i, "trace not sorted by issue time");
    CheckerBank& b = banks[c.bank];

    if (is_act_class(c.kind)) {
      if (!act_times.empty() && c.issue_ns + kEps < act_times.back() + tp.t_rrd)
        flag("t_rrd", i, "activation closer than t_rrd to the previous one");
      if (act_times.size() >= 4 &&
          c.issue_ns + kEps < act_times[act_times.size() - 4] + tp.t_faw)
        flag("t_faw", i, "fifth activation inside a t_faw window");
      if (b.open) {
        if (c.issue_ns + kEps < b.last_act + tp.t_ras)
          flag("t_ras", i, "chained activation earlier than t_ras");
      } else {
        if (c.issue_ns + kEps < b.last_pre + tp.t_rp)
          flag("t_rp", i, "activation before precharge completed");
        if (c.issue_ns + kEps < b.last_act + tp.t_rc)
          flag("t_rc", i, "same-bank activation cycle shorter than t_rc");
      }
      act_times.push_back(c.issue_ns);
      b.open = true;
      b.open_row = c.row;
      b.last_act = c.issue_ns;
      b.had_pre_since_act = false;
    } else if (c.kind == CommandKind::RD || c.kind == CommandKind::WR) {
      if (!b.open)
        flag("bank_state", i, std::string(to_string(c.kind)) + " to a precharged bank");
      else if (c.issue_ns + kEps < b.last_act + tp.t_rcd)
        flag("t_rcd", i, "column access before data ready");
      if (c.kind == CommandKind::WR) b.last_wr = c.issue_ns;
    } else if (c.kind == CommandKind::PRE) {
      if (!b.open) flag("bank_state", i, "PRE on a precharged bank");
      if (c.issue_ns + kEps < b.last_act + tp.t_ras)
        flag("t_ras", i, "precharge before row restore");
      if (c.issue_ns + kEps < b.last_wr + tp.t_wr)
        flag("t_wr", i, "precharge before write recovery");
      b.open = false;
      b.last_pre = c.issue_ns;
      b.had_pre_since_act = true;
    } else if (c.kind == CommandKind::PREA) {
      const int gbase = (c.bank / geom.bank_group_size) * geom.bank_group_size;
      for (auto& [bank_id, cb] : banks) {
        if (!cb.open || bank_id < gbase || bank_id >= gbase + geom.bank_group_size) continue;
        if (c.issue_ns + kEps < cb.last_act + tp.t_ras)
          flag("t_ras", i, "precharge-all before row restore in bank " + std::to_string(bank_id));
        if (c.issue_ns + kEps < cb.last_wr + tp.t_wr)
          flag("t_wr", i, "precharge-all before write recovery in bank " + std::to_string(bank_id));
        cb.open = false;
        cb.last_pre = c.issue_ns;
        cb.had_pre_since_act = true;
      }
    }
    // COMPUTE carries no bus-level constraint.
  }
  return out;
}

double energy_of(const CommandTrace& trace, const EnergyParams& ep) {
  double pj = 0.0;
  for (const auto& c : trace.commands) {
    switch (c.kind) {
      case CommandKind::ACT:
      case CommandKind::TRA:
      case CommandKind::DRA:
        // The pair cost is booked at activation; PRE/PREA close the banks
        // whose share was already charged (one pair per activation).
        pj += ep.e_act_pre;
        break;
      case CommandKind::RD:
        pj += ep.e_rd;
        break;
      case CommandKind::WR:
        pj += ep.e_wr;
        break;
      case CommandKind::COMPUTE:
        pj += ep.e_tlpe_cycle * c.cycles;
        break;
      case CommandKind::PRE:
      case CommandKind::PREA:
        break;
    }
  }
  return pj + ep.p_background * trace.total_latency;
}

void write_trace_csv(std::ostream& os, const CommandTrace& trace) {
  os.precision(15);  // ns values are dyadic; this round-trips them exactly
  os << "issue_time_ns,kind,bank,row\n";
  for (const auto& c : trace.commands) {
    const int row_field = c.kind == CommandKind::COMPUTE ? c.cycles : c.row;
    os << c.issue_ns << ',' << to_string(c.kind) << ',' << c.bank << ',' << row_field << '\n';
  }
}

CommandTrace read_trace_csv(std::istream& is, const TimingParams& tp) {
  CommandTrace trace;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1 && line.rfind("issue_time_ns", 0) == 0) continue;
    std::stringstream ss(line);
    std::string t_s, kind_s, bank_s, row_s;
    if (!std::getline(ss, t_s, ',') || !std::getline(ss, kind_s, ',') ||
        !std::getline(ss, bank_s, ',') || !std::getline(ss, row_s, ','))
      throw ParseError("trace csv: malformed line " + std::to_string(lineno));
    auto kind = command_kind_from_string(kind_s);
    if (!kind) throw ParseError("trace csv: unknown command kind '" + kind_s + "'", lineno);
    DramCommand c;
    c.kind = *kind;
    c.issue_ns = std::stod(t_s);
    c.bank = std::stoi(bank_s);
    if (c.kind == CommandKind::COMPUTE)
      c.cycles = std::stoi(row_s);
    else
      c.row = std::stoi(row_s);
    trace.commands.push_back(c);
  }
  trace.finalize(tp);
  return trace;
}

}  // namespace cidan
