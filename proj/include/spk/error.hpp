#pragma once

#include <stdexcept>
#include <string>

namespace spk {

/// Error classes surfaced across the library. The numeric values are
/// shared with the C API (spk_status) and the CLI exit codes.
enum class ErrorCode : int {
  Format = 1,      // malformed file header or payload
  Truncated = 2,   // payload size disagrees with header
  Dimension = 3,   // incompatible or out-of-range sizes / indices
  Range = 4,       // parameter outside its admissible range
  Input = 5,       // missing or empty input
  Selection = 6,   // sub-region selection exhausted its redraw budget
  Numerical = 7,   // NaN / Inf appeared during iteration
  Config = 8,      // configuration file or option problem
  Io = 9,          // filesystem failure
  Degenerate = 10, // input carries no usable signal (zero mean, zero variance)
  Resolution = 11, // length scale below grid resolution
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spk
