#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cidan/backends.hpp"
#include "cidan/dram.hpp"
#include "cidan/memory.hpp"

namespace cidan {

// A vector operand: byte address plus length in bits. Addresses must be
// row-aligned; the default length is one row.
struct VectorHandle {
  std::uint64_t byte_addr = 0;
  std::uint64_t length_bits = 0;
  bool operator==(const VectorHandle&) const = default;
};

// Decoded "bbop dest, src1, src2, func" instruction.
struct BbopInstruction {
  RowFunc func = RowFunc::And;
  BackendKind backend = BackendKind::Cidan;
  VectorHandle dest;
  VectorHandle src1;
  VectorHandle src2;
  bool operator==(const BbopInstruction&) const = default;
};

// Address map: the space is striped in eight-row blocks across banks, so
// regions one stripe apart land in neighboring banks of a group.
//   stripe = addr / (8 * row_bytes)
//   bank   = stripe % banks_per_chip
//   row    = (stripe / banks_per_chip) * 8 + (addr % stripe_bytes) / row_bytes
RowRef map_address(std::uint64_t byte_addr, const DramGeometry& geom);

// Parse instruction text. Grammar (EBNF):
//   instr   ::= "bbop" ws ref "," ws ref "," ws ref "," ws func [length]
//   ref     ::= ("0x" hexdigits) | digits
//   func    ::= "copy" | "not" | "and" | "or" | "xor" | "add"
//   length  ::= "," ws "len=" digits ("b" | "Kb" | "Mb")
// Unary functions still take all three operand fields; src2 is ignored.
// Throws ParseError (with position) on bad syntax, UnsupportedOpError when
// the function is outside the backend's capability set.
BbopInstruction decode(const std::string& text, BackendKind backend, const DramGeometry& geom);

std::string print_instruction(const BbopInstruction& instr, const DramGeometry& geom);

// Copies inserted to satisfy the distinct-bank rule.
struct ChunkFixup {
  RowRef from;
  RowRef to;
};

// Physical rows for one row-sized piece of the instruction. src1/src2 are the
// post-fixup references actually fed to the execution unit.
struct ChunkPlacement {
  int group = 0;
  std::vector<ChunkFixup> fixups;
  RowRef src1;
  RowRef src2;
  RowRef dest;
};

struct VectorPlacement {
  std::vector<ChunkPlacement> chunks;
};

// True when the chunk obeys the Cidan distinct-banks-in-one-group rule.
bool placement_legal(const ChunkPlacement& chunk, const DramGeometry& geom, bool unary);

// Derive per-chunk physical placements from the operand addresses; for Cidan
// every returned chunk is legal (fixups included when the homes collide).
// Throws AllocationError when the vector does not fit.
VectorPlacement allocate(const BbopInstruction& instr, const DramGeometry& geom);

struct RowOpCall {
  enum class Kind { FixupCopy, Op } kind = Kind::Op;
  RowFunc func = RowFunc::Copy;
  RowRef src1;
  RowRef src2;
  RowRef dest;
};

// One execution step per fixup copy plus one per chunk. The final chunk's
// padding bits are zeros; result bits past length_bits are don't-care and are
// masked at read-out.
std::vector<RowOpCall> lower(const BbopInstruction& instr, const VectorPlacement& placement);

// Replay a lowered plan through the back-end.
RunStats execute_plan(const BbopInstruction& instr, const std::vector<RowOpCall>& plan,
                      MemoryImage& mem, DeviceScheduler& sched);

// Host-side data movement for tests and drivers (not a priced simulator op:
// operands are assumed resident, as in the bulk-bitwise usage model).
void write_vector(MemoryImage& mem, const VectorHandle& v, const std::vector<bool>& bits);
std::vector<bool> read_vector(const MemoryImage& mem, const VectorHandle& v);

std::string plan_to_json(const BbopInstruction& instr, const VectorPlacement& placement);

}  // namespace cidan
