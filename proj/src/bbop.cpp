#include "cidan/bbop.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "cidan/errors.hpp"

namespace cidan {

namespace {
constexpr int kStripeRows = 8;
}

RowRef map_address(std::uint64_t byte_addr, const DramGeometry& geom) {
  const std::uint64_t row_bytes = static_cast<std::uint64_t>(geom.row_bytes());
  if (byte_addr % row_bytes != 0)
    throw AllocationError("address 0x" + [&] {
      std::ostringstream os;
      os << std::hex << byte_addr;
      return os.str();
    }() + " is not row-aligned");
  const std::uint64_t stripe_bytes = kStripeRows * row_bytes;
  const std::uint64_t stripe = byte_addr / stripe_bytes;
  const int bank = static_cast<int>(stripe % static_cast<std::uint64_t>(geom.banks_per_chip));
  const std::uint64_t row =
      (stripe / static_cast<std::uint64_t>(geom.banks_per_chip)) * kStripeRows +
      (byte_addr % stripe_bytes) / row_bytes;
  if (row >= static_cast<std::uint64_t>(geom.rows_per_bank - kComputeRowCount))
    throw AllocationError("capacity exceeded: row index past the usable area");
  return RowRef{bank, static_cast<int>(row)};
}

namespace {

void skip_ws(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

std::uint64_t parse_number(const std::string& s, std::size_t& pos) {
  skip_ws(s, pos);
  const std::size_t start = pos;
  int base = 10;
  if (pos + 1 < s.size() && s[pos] == '0' && (s[pos + 1] == 'x' || s[pos + 1] == 'X')) {
    base = 16;
    pos += 2;
  }
  std::uint64_t v = 0;
  bool any = false;
  while (pos < s.size()) {
    const char c = s[pos];
    int d;
    if (c >= '0' && c <= '9')
      d = c - '0';
    else if (base == 16 && c >= 'a' && c <= 'f')
      d = c - 'a' + 10;
    else if (base == 16 && c >= 'A' && c <= 'F')
      d = c - 'A' + 10;
    else
      break;
    v = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
    any = true;
    ++pos;
  }
  if (!any) throw ParseError("expected a number", start);
  return v;
}

void expect_comma(const std::string& s, std::size_t& pos) {
  skip_ws(s, pos);
  if (pos >= s.size() || s[pos] != ',') throw ParseError("expected ','", pos);
  ++pos;
}

std::string parse_word(const std::string& s, std::size_t& pos) {
  skip_ws(s, pos);
  const std::size_t start = pos;
  while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
    ++pos;
  if (pos == start) throw ParseError("expected an identifier", start);
  return s.substr(start, pos - start);
}

}  // namespace

BbopInstruction decode(const std::string& text, BackendKind backend, const DramGeometry& geom) {
  std::size_t pos = 0;
  skip_ws(text, pos);
  const std::string mnemonic = parse_word(text, pos);
  if (mnemonic != "bbop") throw ParseError("expected 'bbop'", 0);

  BbopInstruction instr;
  instr.backend = backend;
  instr.dest.byte_addr = parse_number(text, pos);
  expect_comma(text, pos);
  instr.src1.byte_addr = parse_number(text, pos);
  expect_comma(text, pos);
  instr.src2.byte_addr = parse_number(text, pos);
  expect_comma(text, pos);
  const std::size_t func_pos = pos;
  const std::string func_name = parse_word(text, pos);
  auto func = rowfunc_from_string(func_name);
  if (!func) throw ParseError("unknown function '" + func_name + "'", func_pos);
  instr.func = *func;
  if (!supports(backend, instr.func))
    throw UnsupportedOpError(std::string(to_string(backend)) + " does not implement " +
                             func_name);

  std::uint64_t length = static_cast<std::uint64_t>(geom.row_bits());
  skip_ws(text, pos);
  if (pos < text.size() && text[pos] == ',') {
    ++pos;
    skip_ws(text, pos);
    if (text.compare(pos, 4, "len=") != 0) throw ParseError("expected 'len='", pos);
    pos += 4;
    length = parse_number(text, pos);
    if (pos < text.size()) {
      if (text.compare(pos, 2, "Mb") == 0) {
        length <<= 20;
        pos += 2;
      } else if (text.compare(pos, 2, "Kb") == 0) {
        length <<= 10;
        pos += 2;
      } else if (text[pos] == 'b') {
        ++pos;
      }
    }
  }
  skip_ws(text, pos);
  if (pos != text.size()) throw ParseError("trailing characters", pos);

  instr.dest.length_bits = instr.src1.length_bits = instr.src2.length_bits = length;
  return instr;
}

std::string print_instruction(const BbopInstruction& instr, const DramGeometry& geom) {
  std::ostringstream os;
  os << "bbop 0x" << std::hex << instr.dest.byte_addr << ", 0x" << instr.src1.byte_addr
     << ", 0x" << instr.src2.byte_addr << std::dec << ", " << to_string(instr.func);
  if (instr.dest.length_bits != static_cast<std::uint64_t>(geom.row_bits()))
    os << ", len=" << instr.dest.length_bits << "b";
  return os.str();
}

bool placement_legal(const ChunkPlacement& chunk, const DramGeometry& geom, bool unary) {
  const int gsize = geom.bank_group_size;
  const int gbase = chunk.group * gsize;
  auto in_group = [&](const RowRef& r) { return r.bank >= gbase && r.bank < gbase + gsize; };
  if (!in_group(chunk.src1) || !in_group(chunk.dest)) return false;
  if (chunk.src1.bank == chunk.dest.bank) return false;
  if (!unary) {
    if (!in_group(chunk.src2)) return false;
    if (chunk.src2.bank == chunk.dest.bank || chunk.src2.bank == chunk.src1.bank) return false;
  }
  return true;
}

VectorPlacement allocate(const BbopInstruction& instr, const DramGeometry& geom) {
  const std::uint64_t row_bits = static_cast<std::uint64_t>(geom.row_bits());
  const std::uint64_t row_bytes = static_cast<std::uint64_t>(geom.row_bytes());
  const std::uint64_t chunks = (instr.dest.length_bits + row_bits - 1) / row_bits;
  const bool unary = instr.func == RowFunc::Copy || instr.func == RowFunc::Not;
  const int gsize = geom.bank_group_size;

  VectorPlacement placement;
  placement.chunks.reserve(chunks);
  for (std::uint64_t c = 0; c < chunks; ++c) {
    ChunkPlacement chunk;
    chunk.dest = map_address(instr.dest.byte_addr + c * row_bytes, geom);
    chunk.src1 = map_address(instr.src1.byte_addr + c * row_bytes, geom);
    chunk.src2 = unary ? chunk.src1 : map_address(instr.src2.byte_addr + c * row_bytes, geom);
    chunk.group = chunk.dest.bank / gsize;

    if (instr.backend == BackendKind::Cidan && !placement_legal(chunk, geom, unary)) {
      const int gbase = chunk.group * gsize;
      std::vector<int> used = {chunk.dest.bank};
      auto legalize = [&](RowRef& src, int slot) {
        const bool in_group = src.bank >= gbase && src.bank < gbase + gsize;
        if (in_group && std::find(used.begin(), used.end(), src.bank) == used.end()) {
          used.push_back(src.bank);
          return;
        }
        for (int b = gbase; b < gbase + gsize; ++b) {
          if (b == src.bank || std::find(used.begin(), used.end(), b) != used.end()) continue;
          const RowRef staged{b, compute_row(geom, slot)};
          chunk.fixups.push_back({src, staged});
          src = staged;
          used.push_back(b);
          return;
        }
        throw AllocationError("no staging bank available in group");
      };
      legalize(chunk.src1, 4);
      if (!unary) legalize(chunk.src2, 5);
    }
    placement.chunks.push_back(std::move(chunk));
  }
  return placement;
}

std::vector<RowOpCall> lower(const BbopInstruction& instr, const VectorPlacement& placement) {
  std::vector<RowOpCall> plan;
  const bool unary = instr.func == RowFunc::Copy || instr.func == RowFunc::Not;
  for (const auto& chunk : placement.chunks) {
    for (const auto& fix : chunk.fixups)
      plan.push_back({RowOpCall::Kind::FixupCopy, RowFunc::Copy, fix.from, {}, fix.to});
    RowOpCall op;
    op.kind = RowOpCall::Kind::Op;
    op.func = instr.func;
    op.src1 = chunk.src1;
    op.src2 = unary ? RowRef{} : chunk.src2;
    op.dest = chunk.dest;
    plan.push_back(op);
  }
  return plan;
}

RunStats execute_plan(const BbopInstruction& instr, const std::vector<RowOpCall>& plan,
                      MemoryImage& mem, DeviceScheduler& sched) {
  RunStats total;
  const std::size_t first = sched.trace().size();
  for (const auto& call : plan) {
    RunStats s;
    if (call.func == RowFunc::Add) {
      // Vector-level add: lane-wise full add per chunk, zero carry-in row,
      // carry-out parked in a staging row.
      const RowRef zero{call.dest.bank, compute_row(mem.geometry(), 6)};
      const RowRef carry{call.dest.bank, compute_row(mem.geometry(), 7)};
      s = exec_add_rows(instr.backend, mem, sched, call.src1, call.src2, zero, call.dest, carry);
    } else {
      s = exec_rowop(instr.backend, call.func, mem, sched, call.src1, call.src2, call.dest);
    }
    total.macro_counts += s.macro_counts;
  }
  total.trace.commands.assign(sched.trace().begin() + static_cast<long>(first),
                              sched.trace().end());
  total.trace.finalize(sched.timing());
  total.latency_ns = total.trace.total_latency;
  return total;
}

void write_vector(MemoryImage& mem, const VectorHandle& v, const std::vector<bool>& bits) {
  const DramGeometry& geom = mem.geometry();
  const std::uint64_t row_bits = static_cast<std::uint64_t>(geom.row_bits());
  for (std::uint64_t i = 0; i < bits.size(); ++i) {
    const RowRef r = map_address(v.byte_addr + (i / row_bits) * geom.row_bytes(), geom);
    mem.mutable_row(r).set(i % row_bits, bits[i]);
  }
}

std::vector<bool> read_vector(const MemoryImage& mem, const VectorHandle& v) {
  const DramGeometry& geom = mem.geometry();
  const std::uint64_t row_bits = static_cast<std::uint64_t>(geom.row_bits());
  std::vector<bool> bits(v.length_bits);
  for (std::uint64_t i = 0; i < v.length_bits; ++i) {
    const RowRef r = map_address(v.byte_addr + (i / row_bits) * geom.row_bytes(), geom);
    bits[i] = mem.row(r).get(i % row_bits);
  }
  return bits;
}

std::string plan_to_json(const BbopInstruction& instr, const VectorPlacement& placement) {
  std::ostringstream os;
  os << "{\n  \"func\": \"" << to_string(instr.func) << "\",\n  \"backend\": \""
     << to_string(instr.backend) << "\",\n  \"chunks\": [";
  for (std::size_t i = 0; i < placement.chunks.size(); ++i) {
    const auto& c = placement.chunks[i];
    os << (i ? "," : "") << "\n    {\"group\": " << c.group << ", \"src1\": [" << c.src1.bank
       << "," << c.src1.row << "], \"src2\": [" << c.src2.bank << "," << c.src2.row
       << "], \"dest\": [" << c.dest.bank << "," << c.dest.row << "], \"fixups\": "
       << c.fixups.size() << "}";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

}  // namespace cidan
