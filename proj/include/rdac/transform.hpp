#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rdac/plane.hpp"

namespace rdac {

inline constexpr int kBlockSize = 8;
inline constexpr int kBlockArea = kBlockSize * kBlockSize;
inline constexpr std::array<int, 8> kQuantLadder = {8, 12, 16, 24, 32, 48, 64, 96};
inline constexpr int kMaxLevel = 32767;

/// Row-major 8x8 block of real samples or coefficients.
using RealBlock = std::array<double, kBlockArea>;
/// Row-major 8x8 quantization indices.
using IndexBlock = std::array<std::int32_t, kBlockArea>;

/// Standard JPEG zigzag: kZigzag[k] is the raster position of the k-th scanned coefficient.
extern const std::array<int, kBlockArea> kZigzag;

/// Orthonormal separable 2-D DCT-II and its inverse.
RealBlock dct8x8(const RealBlock& block);
RealBlock idct8x8(const RealBlock& coeffs);

struct QuantConfig {
  int q = 16;
  double deadzone_factor = 0.0;
};

bool is_ladder_step(int q);
/// Throws unless q is on the ladder and the deadzone is in [0, 1).
void validate(const QuantConfig& cfg);

/// index = sign(c) * max(0, floor(|c|/q - deadzone + 1/2)).
IndexBlock quantize(const RealBlock& coeffs, const QuantConfig& cfg);
RealBlock dequantize(const IndexBlock& indices, const QuantConfig& cfg);

/// Token bytes.
namespace token {
inline constexpr std::uint8_t kEob = 0x00;
inline constexpr std::uint8_t kMaxRun = 62;            // ZRUN(n) = n for n in 1..62
inline constexpr std::uint8_t kPositiveBase = 0x40;    // LEVEL(+v) = 0x40 + v
inline constexpr std::uint8_t kNegativeBase = 0x60;    // LEVEL(-v) = 0x60 + v
inline constexpr int kMaxShortLevel = 15;
inline constexpr std::uint8_t kEscape = 0x80;          // then int16 big-endian
}  // namespace token

/// Token bytes for a run of blocks, plus the geometry they cover.
struct TokenStream {
  std::vector<std::uint8_t> bytes;
  std::size_t block_count = 0;
};

/// Appends the tokens of `blocks` (raster order, zigzag scan per block) to `out`.
void append_tokens(std::span<const IndexBlock> blocks, std::vector<std::uint8_t>& out);
TokenStream tokenize(std::span<const IndexBlock> blocks);

/// Parses exactly `block_count` blocks starting at `offset`; advances `offset`.
std::vector<IndexBlock> detokenize(std::span<const std::uint8_t> bytes, std::size_t block_count,
                                   std::size_t& offset);
/// Parses a stream that must consist of exactly `block_count` blocks.
std::vector<IndexBlock> detokenize(std::span<const std::uint8_t> bytes, std::size_t block_count);

/// Plane geometry after padding each dimension up to a multiple of 8.
struct PaddedGeometry {
  int width = 0, height = 0;          // original
  int pad_right = 0, pad_bottom = 0;  // replicated samples added
  int blocks_x() const { return (width + pad_right) / kBlockSize; }
  int blocks_y() const { return (height + pad_bottom) / kBlockSize; }
  std::size_t block_count() const { return std::size_t(blocks_x()) * blocks_y(); }
};
PaddedGeometry padded_geometry(int width, int height);

struct CodedPlane {
  TokenStream tokens;
  ResidualPlane reconstruction;
  /// Exact PPM-coded size of the tokens alone under a fresh model.
  std::uint64_t bit_estimate = 0;
};

/// Quantized block indices of a padded residual plane, raster block order.
std::vector<IndexBlock> analyze_plane(const ResidualPlane& plane, const QuantConfig& cfg);
/// The single reconstruction path shared by encoder and decoder: dequantize, inverse DCT,
/// round half away from zero, clip to [-255, 255], crop the padding.
ResidualPlane reconstruct_plane(std::span<const IndexBlock> blocks, const PaddedGeometry& geom,
                                const QuantConfig& cfg);

/// pad -> dct -> quantize -> tokenize, with the decoder-identical reconstruction.
CodedPlane code_plane(const ResidualPlane& plane, const QuantConfig& cfg,
                      bool with_bit_estimate = true);
/// Inverse of code_plane's token output for one plane.
ResidualPlane decode_plane(std::span<const std::uint8_t> tokens, std::size_t& offset, int width,
                           int height, const QuantConfig& cfg);

}  // namespace rdac
