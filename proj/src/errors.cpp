#include "mroi/errors.hpp"

namespace mroi {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::io: return "I/O error";
    case ErrorCode::unsupported_format: return "unsupported format";
    case ErrorCode::unsupported_bit_depth: return "unsupported bit depth";
    case ErrorCode::malformed: return "malformed data";
    case ErrorCode::config: return "configuration error";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::invalid_spec: return "invalid phantom spec";
  }
  return "unknown error";
}

}  // namespace mroi
