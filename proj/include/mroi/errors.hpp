#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mroi {

enum class ErrorCode {
  io,                     // file could not be opened, read, or written
  unsupported_format,     // not PNG or binary PGM/PPM
  unsupported_bit_depth,  // anything other than 8 bits per sample
  malformed,              // truncated or inconsistent file / sample data
  config,                 // invalid configuration value or unknown key
  dimension_mismatch,     // operands with different extents
  invalid_spec,           // phantom spec violates its invariants
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mroi
