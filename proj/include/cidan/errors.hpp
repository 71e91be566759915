#pragma once

#include <stdexcept>
#include <string>

namespace cidan {

// Command issued against the DRAM protocol (names the violated rule).
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// (backend, func) pair outside the capability table.
class UnsupportedOpError : public std::runtime_error {
 public:
  explicit UnsupportedOpError(const std::string& what) : std::runtime_error(what) {}
};

// Operand placement cannot be realized.
class AllocationError : public std::runtime_error {
 public:
  explicit AllocationError(const std::string& what) : std::runtime_error(what) {}
};

// Instruction or config text rejected; carries a position when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  explicit ParseError(const std::string& what) : std::runtime_error(what), pos_(0) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

}  // namespace cidan
