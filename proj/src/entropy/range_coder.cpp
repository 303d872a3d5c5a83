#include "rdac/range_coder.hpp"

#include <algorithm>

#include "rdac/error.hpp"

namespace rdac {

void RangeEncoder::encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total) {
  const std::uint32_t r = range_ / total;
  low_ += static_cast<std::uint64_t>(r) * cum;
  range_ = r * freq;
  while (range_ < kTop) {
    range_ <<= 8;
    shift_low();
  }
}

void RangeEncoder::shift_low() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t pending = cache_;
    do {
      out_.push_back(static_cast<std::uint8_t>(pending + carry));
      pending = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<std::uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

void RangeEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> in) : in_(in) {
  if (in_.size() < 5) throw Error(ErrorCode::truncated_stream, "range coder needs 5 bytes");
  for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | next_byte();
}

std::uint8_t RangeDecoder::next_byte() {
  if (pos_ >= in_.size())
    throw Error(ErrorCode::truncated_stream,
                "range coder read past byte " + std::to_string(in_.size()));
  return in_[pos_++];
}

std::uint32_t RangeDecoder::decode_freq(std::uint32_t total) {
  step_ = range_ / total;
  return std::min(code_ / step_, total - 1);
}

void RangeDecoder::decode(std::uint32_t cum, std::uint32_t freq) {
  code_ -= step_ * cum;
  range_ = step_ * freq;
  while (range_ < RangeEncoder::kTop) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
}

}  // namespace rdac
