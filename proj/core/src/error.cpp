#include "specmerge/error.hpp"

namespace specmerge {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::malformed_header: return "malformed_header";
    case ErrorCode::sample_out_of_range: return "sample_out_of_range";
    case ErrorCode::truncated_payload: return "truncated_payload";
    case ErrorCode::malformed_payload: return "malformed_payload";
    case ErrorCode::unsupported_format: return "unsupported_format";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::invalid_shift: return "invalid_shift";
    case ErrorCode::invalid_coefficient: return "invalid_coefficient";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::size_guard: return "size_guard";
    case ErrorCode::file_not_found: return "file_not_found";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::manifest_error: return "manifest_error";
    case ErrorCode::unknown_session: return "unknown_session";
    case ErrorCode::bad_index: return "bad_index";
    case ErrorCode::invalid_argument: return "invalid_argument";
  }
  return "unknown";
}

std::string_view error_code_phrase(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::malformed_header: return "malformed header";
    case ErrorCode::sample_out_of_range: return "sample out of range";
    case ErrorCode::truncated_payload: return "truncated payload";
    case ErrorCode::malformed_payload: return "malformed payload";
    case ErrorCode::unsupported_format: return "unsupported format";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::invalid_shift: return "invalid shift";
    case ErrorCode::invalid_coefficient: return "invalid coefficient";
    case ErrorCode::empty_input: return "empty input";
    case ErrorCode::size_guard: return "size guard exceeded";
    case ErrorCode::file_not_found: return "file not found";
    case ErrorCode::io_error: return "i/o error";
    case ErrorCode::manifest_error: return "manifest error";
    case ErrorCode::unknown_session: return "unknown session";
    case ErrorCode::bad_index: return "bad index";
    case ErrorCode::invalid_argument: return "invalid argument";
  }
  return "unknown error";
}

namespace {
std::string compose_message(ErrorCode code, const std::string& detail) {
  std::string msg(error_code_phrase(code));
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(compose_message(code, detail)), code_(code), detail_(detail) {}

}  // namespace specmerge
