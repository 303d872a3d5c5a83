#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rdac {

/// 32-bit range coder with byte-wise renormalization and carry propagation
/// (low is kept in 64 bits; a cached byte plus a run of pending 0xFF bytes
/// absorb the carry).
class RangeEncoder {
 public:
  static constexpr std::uint32_t kTop = 1u << 24;
  /// Largest total frequency the coder accepts.
  static constexpr std::uint32_t kMaxTotal = 1u << 16;

  explicit RangeEncoder(std::vector<std::uint8_t>& out) : out_(out) {}

  void encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total);
  void finish();

 private:
  void shift_low();

  std::vector<std::uint8_t>& out_;
  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
};

class RangeDecoder {
 public:
  /// Throws Error(truncated_stream) if fewer than the five initial bytes are present.
  explicit RangeDecoder(std::span<const std::uint8_t> in);

  /// Cumulative frequency the next symbol falls into; must be followed by decode().
  std::uint32_t decode_freq(std::uint32_t total);
  void decode(std::uint32_t cum, std::uint32_t freq);

  std::size_t consumed() const noexcept { return pos_; }

 private:
  std::uint8_t next_byte();

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  std::uint32_t code_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t step_ = 0;
};

}  // namespace rdac
