#include "rdac/error.hpp"

namespace rdac {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::dimension_mismatch: return "dimension mismatch";
    case ErrorCode::image_too_small: return "image too small";
    case ErrorCode::malformed_magic: return "malformed magic";
    case ErrorCode::unsupported_colorspace: return "unsupported colorspace";
    case ErrorCode::truncated_frame: return "truncated frame";
    case ErrorCode::malformed_tokens: return "malformed token sequence";
    case ErrorCode::level_overflow: return "level overflow";
    case ErrorCode::truncated_stream: return "truncated stream";
    case ErrorCode::length_overrun: return "declared length overrun";
    case ErrorCode::payload_mismatch: return "payload mismatch";
    case ErrorCode::bad_magic: return "bad magic";
    case ErrorCode::version_mismatch: return "version mismatch";
    case ErrorCode::checksum_failure: return "checksum failure";
    case ErrorCode::truncated_bitstream: return "truncated bitstream";
    case ErrorCode::empty_input: return "empty input";
    case ErrorCode::no_overlap: return "no quality overlap";
    case ErrorCode::non_monotonic: return "non-monotonic curve";
    case ErrorCode::io_error: return "i/o error";
  }
  return "unknown error";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    std::optional<std::size_t> frame_index) {
  std::string out{to_string(code)};
  if (frame_index) out += " at frame " + std::to_string(*frame_index);
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> frame_index)
    : std::runtime_error(compose(code, message, frame_index)),
      code_(code),
      detail_(message),
      frame_index_(frame_index) {}

Error Error::at_frame(std::size_t frame_index) const {
  if (frame_index_) return *this;
  return Error(code_, detail_, frame_index);
}

bool Error::is_bitstream_error() const noexcept {
  switch (code_) {
    case ErrorCode::malformed_tokens:
    case ErrorCode::truncated_stream:
    case ErrorCode::length_overrun:
    case ErrorCode::payload_mismatch:
    case ErrorCode::bad_magic:
    case ErrorCode::version_mismatch:
    case ErrorCode::checksum_failure:
    case ErrorCode::truncated_bitstream:
      return true;
    default:
      return false;
  }
}

}  // namespace rdac
