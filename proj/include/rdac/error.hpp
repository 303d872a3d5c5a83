#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rdac {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  image_too_small,
  // Y4M ingestion
  malformed_magic,
  unsupported_colorspace,
  truncated_frame,
  // residual tokens
  malformed_tokens,
  level_overflow,
  // PPM payloads
  truncated_stream,
  length_overrun,
  // keypoint payloads
  payload_mismatch,
  // container
  bad_magic,
  version_mismatch,
  checksum_failure,
  truncated_bitstream,
  // evaluation
  empty_input,
  no_overlap,
  non_monotonic,
  io_error,
};

std::string_view to_string(ErrorCode code);

/// Error raised by every module. `frame_index` names the offending frame when
/// the failure is attributable to one (Y4M truncation, container checksums).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> frame_index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> frame_index() const noexcept { return frame_index_; }

  const std::string& detail() const noexcept { return detail_; }
  bool is_bitstream_error() const noexcept;

  /// Same error, attributed to `frame_index` unless it already names a frame.
  Error at_frame(std::size_t frame_index) const;

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> frame_index_;
};

}  // namespace rdac
