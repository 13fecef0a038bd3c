#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace specmerge {

enum class ErrorCode {
  malformed_header,
  sample_out_of_range,
  truncated_payload,
  malformed_payload,
  unsupported_format,
  dimension_mismatch,
  invalid_shift,
  invalid_coefficient,
  empty_input,
  size_guard,
  file_not_found,
  io_error,
  manifest_error,
  unknown_session,
  bad_index,
  invalid_argument,
};

/// Stable snake_case name, used on the wire and in CLI diagnostics.
std::string_view error_code_name(ErrorCode code) noexcept;

/// Human-readable phrase ("sample out of range", "file not found", ...).
std::string_view error_code_phrase(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace specmerge
