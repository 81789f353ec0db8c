#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmla {

// Error raised by the expression parsers; carries the byte offset of the
// offending token in the input string.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t offset)
      : std::runtime_error(msg + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace gmla
