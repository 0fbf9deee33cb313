#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace comfortcam {

/// File could not be opened / read / written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed content in an input file. Carries the byte offset at which
/// parsing failed when it is known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t byte_offset)
      : std::runtime_error(msg + " (byte " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  explicit ParseError(const std::string& msg)
      : std::runtime_error(msg), byte_offset_(0) {}

  std::size_t byte_offset() const { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace comfortcam
