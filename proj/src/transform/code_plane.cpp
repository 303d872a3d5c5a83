#include <cmath>

#include "rdac/ppm.hpp"
#include "rdac/transform.hpp"

namespace rdac {

PaddedGeometry padded_geometry(int width, int height) {
  PaddedGeometry g;
  g.width = width;
  g.height = height;
  g.pad_right = (kBlockSize - width % kBlockSize) % kBlockSize;
  g.pad_bottom = (kBlockSize - height % kBlockSize) % kBlockSize;
  return g;
}

std::vector<IndexBlock> analyze_plane(const ResidualPlane& plane, const QuantConfig& cfg) {
  validate(cfg);
  const PaddedGeometry g = padded_geometry(plane.width(), plane.height());
  std::vector<IndexBlock> blocks;
  blocks.reserve(g.block_count());
  RealBlock samples{};
  for (int by = 0; by < g.blocks_y(); ++by)
    for (int bx = 0; bx < g.blocks_x(); ++bx) {
      for (int y = 0; y < kBlockSize; ++y)
        for (int x = 0; x < kBlockSize; ++x)
          samples[y * kBlockSize + x] =
              plane.clamped(bx * kBlockSize + x, by * kBlockSize + y);
      blocks.push_back(quantize(dct8x8(samples), cfg));
    }
  return blocks;
}

ResidualPlane reconstruct_plane(std::span<const IndexBlock> blocks, const PaddedGeometry& g,
                                const QuantConfig& cfg) {
  if (blocks.size() != g.block_count())
    throw Error(ErrorCode::malformed_tokens, "block count does not match plane geometry");
  ResidualPlane out(g.width, g.height);
  std::size_t b = 0;
  for (int by = 0; by < g.blocks_y(); ++by)
    for (int bx = 0; bx < g.blocks_x(); ++bx, ++b) {
      const RealBlock rec = idct8x8(dequantize(blocks[b], cfg));
      for (int y = 0; y < kBlockSize; ++y) {
        const int py = by * kBlockSize + y;
        if (py >= g.height) break;
        for (int x = 0; x < kBlockSize; ++x) {
          const int px = bx * kBlockSize + x;
          if (px >= g.width) break;
          // std::round rounds halves away from zero.
          out.at(px, py) = clip_residual(static_cast<int>(std::round(rec[y * kBlockSize + x])));
        }
      }
    }
  return out;
}

CodedPlane code_plane(const ResidualPlane& plane, const QuantConfig& cfg, bool with_bit_estimate) {
  const auto blocks = analyze_plane(plane, cfg);
  CodedPlane out;
  out.tokens = tokenize(blocks);
  out.reconstruction =
      reconstruct_plane(blocks, padded_geometry(plane.width(), plane.height()), cfg);
  if (with_bit_estimate) out.bit_estimate = estimate_bits(out.tokens.bytes);
  return out;
}

ResidualPlane decode_plane(std::span<const std::uint8_t> tokens, std::size_t& offset, int width,
                           int height, const QuantConfig& cfg) {
  validate(cfg);
  const PaddedGeometry g = padded_geometry(width, height);
  const auto blocks = detokenize(tokens, g.block_count(), offset);
  return reconstruct_plane(blocks, g, cfg);
}

}  // namespace rdac
