#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace rdac {

inline constexpr int kDefaultPpmOrder = 3;
inline constexpr int kMaxPpmOrder = 7;
/// A context's counts are halved once their sum exceeds this.
inline constexpr std::uint32_t kPpmRescaleThreshold = 1u << 14;

class RangeEncoder;
class RangeDecoder;

/// Adaptive PPM model over bytes: escape method C, increment 1, no exclusions.
/// Every context of order 0..max_order that matches the history is updated after
/// each symbol. Below order 0 symbols are coded uniformly over 256 values.
class PpmModel {
 public:
  explicit PpmModel(int max_order = kDefaultPpmOrder);

  void encode(RangeEncoder& enc, std::uint8_t symbol);
  std::uint8_t decode(RangeDecoder& dec);

  int max_order() const noexcept { return max_order_; }
  /// Order-independent digest of all context tables; equal digests after encode and
  /// decode of the same sequence witness mirrored model state.
  std::uint64_t fingerprint() const;
  std::size_t context_count() const noexcept { return contexts_.size(); }

 private:
  struct Context {
    // Sorted by symbol; counts are always >= 1.
    std::vector<std::pair<std::uint8_t, std::uint16_t>> symbols;
    std::uint32_t total = 0;

    std::uint32_t escape() const { return static_cast<std::uint32_t>(symbols.size()); }
    void increment(std::uint8_t s);
  };

  std::uint64_t key(int order) const;
  Context* find(int order);
  int available_order() const;
  void update(std::uint8_t symbol);

  int max_order_;
  std::vector<std::uint8_t> history_;  // last max_order_ bytes, oldest first
  std::unordered_map<std::uint64_t, Context> contexts_;
};

/// 4-byte big-endian length, then range-coder bytes (nothing further for empty input).
std::vector<std::uint8_t> ppm_encode(std::span<const std::uint8_t> bytes,
                                     int max_order = kDefaultPpmOrder);
std::vector<std::uint8_t> ppm_decode(std::span<const std::uint8_t> stream,
                                     int max_order = kDefaultPpmOrder);
/// Coded payload size in bits, excluding the 32-bit length header.
std::uint64_t estimate_bits(std::span<const std::uint8_t> bytes,
                            int max_order = kDefaultPpmOrder);

}  // namespace rdac
