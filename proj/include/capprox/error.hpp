#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace capprox {

// Bad numeric parameter (d = 0, m = 0, function index out of range, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A function sample that violates its contract: a pair valued at bottom, or a
// repeated key.
class InvalidSample : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidPattern : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A shift-table backing that cannot represent the pattern, e.g. a direct
// address table asked to hold a code point beyond its bound.
class BackingUnsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public std::runtime_error {
 public:
  DecodeError(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what + " at byte " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

// Malformed serialized approximator.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace capprox
