#include <array>
#include <cstring>

#include "cidan/errors.hpp"
#include "cidan/workloads.hpp"

namespace cidan {

namespace {

const std::uint8_t kSbox[256] = {
    0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b, 0xfe, 0xd7, 0xab,
    0x76, 0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0, 0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4,
    0x72, 0xc0, 0xb7, 0xfd, 0x93, 0x26, 0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71,
    0xd8, 0x31, 0x15, 0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2,
    0xeb, 0x27, 0xb2, 0x75, 0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0, 0x52, 0x3b, 0xd6,
    0xb3, 0x29, 0xe3, 0x2f, 0x84, 0x53, 0xd1, 0x00, 0xed, 0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb,
    0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf, 0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45,
    0xf9, 0x02, 0x7f, 0x50, 0x3c, 0x9f, 0xa8, 0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5,
    0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2, 0xcd, 0x0c, 0x13, 0xec, 0x5f, 0x97, 0x44,
    0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73, 0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a,
    0x90, 0x88, 0x46, 0xee, 0xb8, 0x14, 0xde, 0x5e, 0x0b, 0xdb, 0xe0, 0x32, 0x3a, 0x0a, 0x49,
    0x06, 0x24, 0x5c, 0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79, 0xe7, 0xc8, 0x37, 0x6d,
    0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08, 0xba, 0x78, 0x25,
    0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f, 0x4b, 0xbd, 0x8b, 0x8a, 0x70, 0x3e,
    0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e, 0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e, 0xe1,
    0xf8, 0x98, 0x11, 0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
    0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f, 0xb0, 0x54, 0xbb,
    0x16};

const std::uint8_t kRcon[15] = {0x00, 0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40,
                                0x80, 0x1b, 0x36, 0x6c, 0xd8, 0xab, 0x4d};

int rounds_for_key_bits(std::size_t key_bits) {
  switch (key_bits) {
    case 128: return 10;
    case 192: return 12;
    case 256: return 14;
    default: throw std::invalid_argument("aes: key must be 128, 192 or 256 bits");
  }
}

// Standard key schedule; the schedule itself stays on the host (its offload
// is out of scope).
std::vector<std::array<std::uint8_t, 16>> expand_key(const std::vector<std::uint8_t>& key) {
  const int nk = static_cast<int>(key.size() / 4);
  const int nr = rounds_for_key_bits(key.size() * 8);
  const int total_words = 4 * (nr + 1);
  std::vector<std::array<std::uint8_t, 4>> w(static_cast<std::size_t>(total_words));
  for (int i = 0; i < nk; ++i)
    w[static_cast<std::size_t>(i)] = {key[static_cast<std::size_t>(4 * i)],
                                      key[static_cast<std::size_t>(4 * i + 1)],
                                      key[static_cast<std::size_t>(4 * i + 2)],
                                      key[static_cast<std::size_t>(4 * i + 3)]};
  for (int i = nk; i < total_words; ++i) {
    std::array<std::uint8_t, 4> temp = w[static_cast<std::size_t>(i - 1)];
    if (i % nk == 0) {
      temp = {static_cast<std::uint8_t>(kSbox[temp[1]] ^ kRcon[i / nk]), kSbox[temp[2]],
              kSbox[temp[3]], kSbox[temp[0]]};
    } else if (nk > 6 && i % nk == 4) {
      temp = {kSbox[temp[0]], kSbox[temp[1]], kSbox[temp[2]], kSbox[temp[3]]};
    }
    for (int b = 0; b < 4; ++b)
      w[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)] =
          w[static_cast<std::size_t>(i - nk)][static_cast<std::size_t>(b)] ^
          temp[static_cast<std::size_t>(b)];
  }
  std::vector<std::array<std::uint8_t, 16>> round_keys(static_cast<std::size_t>(nr + 1));
  for (int r = 0; r <= nr; ++r)
    for (int c = 0; c < 4; ++c)
      for (int b = 0; b < 4; ++b)
        round_keys[static_cast<std::size_t>(r)][static_cast<std::size_t>(4 * c + b)] =
            w[static_cast<std::size_t>(4 * r + c)][static_cast<std::size_t>(b)];
  return round_keys;
}

// Bit-sliced state: plane p = 8*byte_index + bit holds that state bit for
// every block (one block per lane). Plane rows are spread over the banks of
// one group; each operation writes a fresh row and the plane's home moves
// there, so a third bank is always free for the destination.
class PlaneFile {
 public:
  PlaneFile(MemoryImage& mem, DeviceScheduler& sched, BackendKind backend, int group,
            std::size_t lanes, WorkloadStats& stats)
      : mem_(mem),
        sched_(sched),
        backend_(backend),
        gbase_(group * mem.geometry().bank_group_size),
        gsize_(mem.geometry().bank_group_size),
        lanes_(lanes),
        stats_(stats),
        next_row_(static_cast<std::size_t>(gsize_), 0) {}

  // Host-side load (input residency, unpriced).
  RowRef host_store(const BitRow& value, int preferred_bank) {
    const RowRef ref = fresh_row(preferred_bank);
    BitRow padded(static_cast<std::size_t>(mem_.geometry().row_bits()));
    for (std::size_t i = 0; i < value.size(); ++i) padded.set(i, value.get(i));
    mem_.write_row(ref, padded);
    return ref;
  }

  RowRef binary_op(RowFunc func, RowRef a, RowRef b, int avoid_bank = -1) {
    const RowRef dest = fresh_row_avoiding({a.bank, b.bank, avoid_bank});
    RunStats s = exec_rowop(backend_, func, mem_, sched_, a, b, dest);
    stats_.pim.macro_counts += s.macro_counts;
    stats_.op_mix[to_string(func)] += 1;
    return dest;
  }

  RowRef unary_op(RowFunc func, RowRef a, int avoid_bank = -1) {
    const RowRef dest = fresh_row_avoiding({a.bank, avoid_bank});
    RunStats s = exec_rowop(backend_, func, mem_, sched_, a, RowRef{}, dest);
    stats_.pim.macro_counts += s.macro_counts;
    stats_.op_mix[to_string(func)] += 1;
    return dest;
  }

  const BitRow& value(RowRef r) const { return mem_.row(r); }

 private:
  RowRef fresh_row(int bank_in_group) {
    auto& row = next_row_[static_cast<std::size_t>(bank_in_group)];
    if (row >= mem_.geometry().rows_per_bank - kComputeRowCount)
      throw AllocationError("aes: out of plane rows");
    return RowRef{gbase_ + bank_in_group, row++};
  }

  RowRef fresh_row_avoiding(std::initializer_list<int> avoid) {
    for (int b = 0; b < gsize_; ++b) {
      bool bad = false;
      for (int a : avoid)
        if (a == gbase_ + b) bad = true;
      if (!bad) return fresh_row(b);
    }
    throw AllocationError("aes: no destination bank available");
  }

  MemoryImage& mem_;
  DeviceScheduler& sched_;
  BackendKind backend_;
  int gbase_;
  int gsize_;
  std::size_t lanes_;
  WorkloadStats& stats_;
  std::vector<int> next_row_;
};

// Work-unit weights used for the offload-share statistic (operations per
// state byte per stage application).
constexpr double kWorkArk = 1.0;
constexpr double kWorkSub = 1.0;
constexpr double kWorkShift = 1.0;
constexpr double kWorkMix = 4.0;

}  // namespace

AesResult aes_encrypt(const std::vector<std::array<std::uint8_t, 16>>& blocks,
                      const std::vector<std::uint8_t>& key, BackendKind backend,
                      const ExperimentConfig& cfg, const HostCostModel* host_override) {
  if (blocks.empty()) throw std::invalid_argument("aes: need at least one block");
  const int nr = rounds_for_key_bits(key.size() * 8);
  if (backend == BackendKind::Drisa)
    throw UnsupportedOpError("drisa lacks the xor needed for the round transforms");

  const HostCostModel& host = host_override ? *host_override : cfg.aes_host_cost;
  const std::size_t lanes = blocks.size();
  const std::size_t row_bits = static_cast<std::size_t>(cfg.geometry.row_bits());
  if (lanes > row_bits) throw std::invalid_argument("aes: more blocks than lanes in a row");

  const auto round_keys = expand_key(key);

  MemoryImage mem(cfg.geometry);
  DeviceScheduler sched(cfg.timing, cfg.geometry);
  AesResult out;
  WorkloadStats& stats = out.stats;
  PlaneFile planes(mem, sched, backend, /*group=*/0, lanes, stats);

  // Slice the blocks: plane 8*byte+bit across lanes.
  std::array<RowRef, 128> state{};
  for (int byte = 0; byte < 16; ++byte) {
    for (int bit = 0; bit < 8; ++bit) {
      BitRow plane(lanes);
      for (std::size_t lane = 0; lane < lanes; ++lane)
        plane.set(lane, (blocks[lane][static_cast<std::size_t>(byte)] >> bit) & 1);
      state[static_cast<std::size_t>(8 * byte + bit)] =
          planes.host_store(plane, (byte + bit) % 3);
    }
  }
  // Constant all-ones row (the xtime mask) the AND reads against.
  BitRow ones = BitRow::ones(lanes);
  const RowRef mask_row = planes.host_store(ones, 3);

  double host_bytes = 0.0;
  double work_host = 0.0, work_pim = 0.0;
  const double bytes_per_stage = 16.0 * static_cast<double>(lanes);

  auto add_round_key = [&](int r) {
    for (int byte = 0; byte < 16; ++byte) {
      for (int bit = 0; bit < 8; ++bit) {
        const bool kbit = (round_keys[static_cast<std::size_t>(r)][static_cast<std::size_t>(byte)] >> bit) & 1;
        if (!kbit) continue;  // xor with an all-zero plane is the identity
        const std::size_t p = static_cast<std::size_t>(8 * byte + bit);
        // Key planes are resident constants; one row holds the all-ones
        // plane, so the xor reads it directly.
        state[p] = planes.binary_op(RowFunc::Xor, state[p], mask_row);
      }
    }
    work_pim += kWorkArk * 16.0;
  };

  auto sub_bytes = [&]() {
    for (int byte = 0; byte < 16; ++byte) {
      std::array<BitRow, 8> in;
      for (int bit = 0; bit < 8; ++bit)
        in[static_cast<std::size_t>(bit)] =
            planes.value(state[static_cast<std::size_t>(8 * byte + bit)]);
      std::array<BitRow, 8> sb;
      for (auto& r : sb) r = BitRow(static_cast<std::size_t>(cfg.geometry.row_bits()));
      for (std::size_t lane = 0; lane < lanes; ++lane) {
        std::uint8_t v = 0;
        for (int bit = 0; bit < 8; ++bit)
          if (in[static_cast<std::size_t>(bit)].get(lane)) v |= static_cast<std::uint8_t>(1 << bit);
        const std::uint8_t s = kSbox[v];
        for (int bit = 0; bit < 8; ++bit)
          sb[static_cast<std::size_t>(bit)].set(lane, (s >> bit) & 1);
      }
      for (int bit = 0; bit < 8; ++bit)
        state[static_cast<std::size_t>(8 * byte + bit)] =
            planes.host_store(sb[static_cast<std::size_t>(bit)], (byte + bit) % 3);
    }
    host_bytes += bytes_per_stage;
    work_host += kWorkSub * 16.0;
  };

  auto shift_rows = [&]() {
    // Pure plane renaming: byte (r, c) <- byte (r, (c + r) mod 4).
    std::array<RowRef, 128> next = state;
    for (int r = 1; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        const int src_byte = r + 4 * ((c + r) % 4);
        const int dst_byte = r + 4 * c;
        for (int bit = 0; bit < 8; ++bit)
          next[static_cast<std::size_t>(8 * dst_byte + bit)] =
              state[static_cast<std::size_t>(8 * src_byte + bit)];
      }
    }
    state = next;
    host_bytes += bytes_per_stage;
    work_host += kWorkShift * 16.0;
  };

  auto mix_columns = [&]() {
    std::array<RowRef, 128> next{};
    for (int c = 0; c < 4; ++c) {
      std::array<std::array<RowRef, 8>, 4> in;   // column bytes
      std::array<std::array<RowRef, 8>, 4> xt;   // xtime of each byte
      for (int r = 0; r < 4; ++r)
        for (int bit = 0; bit < 8; ++bit)
          in[static_cast<std::size_t>(r)][static_cast<std::size_t>(bit)] =
              state[static_cast<std::size_t>(8 * (r + 4 * c) + bit)];
      for (int r = 0; r < 4; ++r) {
        // xtime: shift the planes up one bit and fold the msb back through
        // the reduction polynomial (bits 0,1,3,4), msb gated by an AND
        // against the constant mask row.
        const RowRef msb = planes.binary_op(
            RowFunc::And, in[static_cast<std::size_t>(r)][7], mask_row);
        auto& x = xt[static_cast<std::size_t>(r)];
        x[0] = msb;
        x[1] = planes.binary_op(RowFunc::Xor, in[static_cast<std::size_t>(r)][0], msb);
        x[2] = in[static_cast<std::size_t>(r)][1];
        x[3] = planes.binary_op(RowFunc::Xor, in[static_cast<std::size_t>(r)][2], msb);
        x[4] = planes.binary_op(RowFunc::Xor, in[static_cast<std::size_t>(r)][3], msb);
        x[5] = in[static_cast<std::size_t>(r)][4];
        x[6] = in[static_cast<std::size_t>(r)][5];
        x[7] = in[static_cast<std::size_t>(r)][6];
      }
      // out[r] = xt[r] ^ xt[r+1] ^ in[r+1] ^ in[r+2] ^ in[r+3]
      for (int r = 0; r < 4; ++r) {
        for (int bit = 0; bit < 8; ++bit) {
          const std::size_t b = static_cast<std::size_t>(bit);
          RowRef acc = planes.binary_op(RowFunc::Xor, xt[static_cast<std::size_t>(r)][b],
                                        xt[static_cast<std::size_t>((r + 1) % 4)][b]);
          acc = planes.binary_op(RowFunc::Xor, acc,
                                 in[static_cast<std::size_t>((r + 1) % 4)][b]);
          acc = planes.binary_op(RowFunc::Xor, acc,
                                 in[static_cast<std::size_t>((r + 2) % 4)][b]);
          acc = planes.binary_op(RowFunc::Xor, acc,
                                 in[static_cast<std::size_t>((r + 3) % 4)][b]);
          next[static_cast<std::size_t>(8 * (r + 4 * c) + bit)] = acc;
        }
      }
    }
    state = next;
    work_pim += kWorkMix * 16.0;
  };

  add_round_key(0);
  for (int r = 1; r <= nr; ++r) {
    sub_bytes();
    shift_rows();
    if (r != nr) mix_columns();
    add_round_key(r);
  }

  // Un-slice the ciphertext.
  out.ciphertext.assign(lanes, {});
  for (int byte = 0; byte < 16; ++byte) {
    for (int bit = 0; bit < 8; ++bit) {
      const BitRow& plane = planes.value(state[static_cast<std::size_t>(8 * byte + bit)]);
      for (std::size_t lane = 0; lane < lanes; ++lane)
        if (plane.get(lane))
          out.ciphertext[lane][static_cast<std::size_t>(byte)] |=
              static_cast<std::uint8_t>(1 << bit);
    }
  }

  stats.pim.trace.commands = sched.trace();
  stats.pim.trace.finalize(cfg.timing);
  stats.pim.latency_ns = stats.pim.trace.total_latency;
  stats.pim.energy_pj = energy_of(stats.pim.trace, cfg.energy);
  stats.host_ns = host_bytes * host.ns_per_host_byte;
  out.offloaded_share = work_pim / (work_pim + work_host);
  return out;
}

}  // namespace cidan
