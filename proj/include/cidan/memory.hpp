#pragma once

#include <unordered_map>
#include <vector>

#include "cidan/bitrow.hpp"
#include "cidan/dram.hpp"
#include "cidan/errors.hpp"

namespace cidan {

struct RowRef {
  int bank = 0;
  int row = 0;
  bool operator==(const RowRef&) const = default;
};

// Bank-indexed row storage; untouched rows read as all zeros. Rows are
// allocated lazily so a full device image stays cheap.
class MemoryImage {
 public:
  explicit MemoryImage(const DramGeometry& geom)
      : geom_(geom), banks_(static_cast<std::size_t>(geom.banks_per_chip)) {
    geom_.validate();
  }

  const DramGeometry& geometry() const { return geom_; }

  const BitRow& row(RowRef r) const {
    check(r);
    auto& bank = banks_[static_cast<std::size_t>(r.bank)];
    auto it = bank.find(r.row);
    if (it == bank.end()) {
      static thread_local BitRow zero;
      if (zero.size() != static_cast<std::size_t>(geom_.row_bits()))
        zero = BitRow(static_cast<std::size_t>(geom_.row_bits()));
      return zero;
    }
    return it->second;
  }

  BitRow& mutable_row(RowRef r) {
    check(r);
    auto& bank = banks_[static_cast<std::size_t>(r.bank)];
    auto it = bank.find(r.row);
    if (it == bank.end())
      it = bank.emplace(r.row, BitRow(static_cast<std::size_t>(geom_.row_bits()))).first;
    return it->second;
  }

  void write_row(RowRef r, BitRow value) {
    if (value.size() != static_cast<std::size_t>(geom_.row_bits()))
      throw std::invalid_argument("MemoryImage: row width mismatch on write");
    mutable_row(r) = std::move(value);
  }

 private:
  void check(RowRef r) const {
    if (r.bank < 0 || r.bank >= geom_.banks_per_chip || r.row < 0 ||
        r.row >= geom_.rows_per_bank)
      throw std::out_of_range("MemoryImage: row reference out of range");
  }

  DramGeometry geom_;
  mutable std::vector<std::unordered_map<int, BitRow>> banks_;
};

}  // namespace cidan
