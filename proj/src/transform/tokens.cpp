#include <string>

#include "rdac/transform.hpp"

namespace rdac {

const std::array<int, kBlockArea> kZigzag = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

void append_tokens(std::span<const IndexBlock> blocks, std::vector<std::uint8_t>& out) {
  for (const auto& block : blocks) {
    int run = 0;
    for (int k = 0; k < kBlockArea; ++k) {
      const std::int32_t level = block[kZigzag[k]];
      if (level == 0) {
        ++run;
        continue;
      }
      if (level > kMaxLevel || level < -kMaxLevel)
        throw Error(ErrorCode::level_overflow, "level " + std::to_string(level));
      while (run > 0) {
        const int chunk = std::min<int>(run, token::kMaxRun);
        out.push_back(static_cast<std::uint8_t>(chunk));
        run -= chunk;
      }
      const int mag = level < 0 ? -level : level;
      if (mag <= token::kMaxShortLevel) {
        out.push_back(static_cast<std::uint8_t>(
            (level > 0 ? token::kPositiveBase : token::kNegativeBase) + mag));
      } else {
        const auto bits = static_cast<std::uint16_t>(static_cast<std::int16_t>(level));
        out.push_back(token::kEscape);
        out.push_back(static_cast<std::uint8_t>(bits >> 8));
        out.push_back(static_cast<std::uint8_t>(bits & 0xFF));
      }
    }
    out.push_back(token::kEob);
  }
}

TokenStream tokenize(std::span<const IndexBlock> blocks) {
  TokenStream ts;
  append_tokens(blocks, ts.bytes);
  ts.block_count = blocks.size();
  return ts;
}

std::vector<IndexBlock> detokenize(std::span<const std::uint8_t> bytes, std::size_t block_count,
                                   std::size_t& offset) {
  std::vector<IndexBlock> blocks;
  blocks.reserve(block_count);
  auto fail = [&](const std::string& what) {
    return Error(ErrorCode::malformed_tokens,
                 what + " in block " + std::to_string(blocks.size()) + " at byte " +
                     std::to_string(offset));
  };
  while (blocks.size() < block_count) {
    IndexBlock block{};
    int pos = 0;
    for (;;) {
      if (offset >= bytes.size()) throw fail("stream ends before EOB");
      const std::uint8_t t = bytes[offset++];
      if (t == token::kEob) break;
      if (t <= token::kMaxRun) {
        pos += t;
        if (pos >= kBlockArea) throw fail("zero run past coefficient 63");
        continue;
      }
      std::int32_t level = 0;
      if (t > token::kPositiveBase && t <= token::kPositiveBase + token::kMaxShortLevel) {
        level = t - token::kPositiveBase;
      } else if (t > token::kNegativeBase && t <= token::kNegativeBase + token::kMaxShortLevel) {
        level = -(t - token::kNegativeBase);
      } else if (t == token::kEscape) {
        if (offset + 2 > bytes.size()) throw fail("escape truncated");
        const auto bits = static_cast<std::uint16_t>((bytes[offset] << 8) | bytes[offset + 1]);
        offset += 2;
        level = static_cast<std::int16_t>(bits);
        if (level == 0 || level < -kMaxLevel) throw fail("escaped level out of range");
      } else {
        throw fail("unknown token " + std::to_string(t));
      }
      if (pos >= kBlockArea) throw fail("more than 64 coefficients");
      block[kZigzag[pos++]] = level;
    }
    blocks.push_back(block);
  }
  return blocks;
}

std::vector<IndexBlock> detokenize(std::span<const std::uint8_t> bytes, std::size_t block_count) {
  std::size_t offset = 0;
  auto blocks = detokenize(bytes, block_count, offset);
  if (offset != bytes.size())
    throw Error(ErrorCode::malformed_tokens,
                std::to_string(bytes.size() - offset) + " trailing bytes after last block");
  return blocks;
}

}  // namespace rdac
