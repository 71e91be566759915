#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cidan {

// Fixed-width bit vector, one bit per DRAM bit-line / TLPE lane.
// Bits beyond size() are kept zero so word-level ops stay exact.
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  static BitRow zeros(std::size_t nbits) { return BitRow(nbits); }

  static BitRow ones(std::size_t nbits) {
    BitRow r(nbits);
    for (auto& w : r.words_) w = ~0ULL;
    r.mask_tail();
    return r;
  }

  static BitRow random(std::size_t nbits, std::mt19937_64& rng) {
    BitRow r(nbits);
    for (auto& w : r.words_) w = rng();
    r.mask_tail();
    return r;
  }

  std::size_t size() const { return nbits_; }
  std::size_t word_count() const { return words_.size(); }
  std::uint64_t word(std::size_t i) const { return words_[i]; }
  std::uint64_t& word(std::size_t i) { return words_[i]; }

  bool get(std::size_t i) const {
    check_index(i);
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }

  void set(std::size_t i, bool v) {
    check_index(i);
    const std::uint64_t m = 1ULL << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
    return n;
  }

  BitRow& operator&=(const BitRow& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  BitRow& operator|=(const BitRow& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  BitRow& operator^=(const BitRow& o) {
    check_same_size(o);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
    return *this;
  }

  friend BitRow operator&(BitRow a, const BitRow& b) { return a &= b; }
  friend BitRow operator|(BitRow a, const BitRow& b) { return a |= b; }
  friend BitRow operator^(BitRow a, const BitRow& b) { return a ^= b; }

  BitRow operator~() const {
    BitRow r(nbits_);
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
    r.mask_tail();
    return r;
  }

  // Shift toward higher lane indices (lane i -> lane i+k), zero fill.
  BitRow shifted_left(std::size_t k) const {
    BitRow r(nbits_);
    if (k >= nbits_) return r;
    const std::size_t ws = k >> 6, bs = k & 63;
    for (std::size_t i = words_.size(); i-- > ws;) {
      std::uint64_t w = words_[i - ws] << bs;
      if (bs && i > ws) w |= words_[i - ws - 1] >> (64 - bs);
      r.words_[i] = w;
    }
    r.mask_tail();
    return r;
  }

  bool operator==(const BitRow& o) const { return nbits_ == o.nbits_ && words_ == o.words_; }
  bool operator!=(const BitRow& o) const { return !(*this == o); }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

 private:
  void mask_tail() {
    if (nbits_ & 63) words_.back() &= (~0ULL) >> (64 - (nbits_ & 63));
  }
  void check_index(std::size_t i) const {
    if (i >= nbits_) throw std::out_of_range("BitRow: bit index " + std::to_string(i));
  }
  void check_same_size(const BitRow& o) const {
    if (nbits_ != o.nbits_) throw std::invalid_argument("BitRow: width mismatch");
  }

  std::size_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace cidan
