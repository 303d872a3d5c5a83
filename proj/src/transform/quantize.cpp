#include <algorithm>
#include <cmath>
#include <string>

#include "rdac/transform.hpp"

namespace rdac {

bool is_ladder_step(int q) {
  return std::find(kQuantLadder.begin(), kQuantLadder.end(), q) != kQuantLadder.end();
}

void validate(const QuantConfig& cfg) {
  if (!is_ladder_step(cfg.q))
    throw Error(ErrorCode::invalid_argument, "q=" + std::to_string(cfg.q) + " is not on the ladder");
  if (!(cfg.deadzone_factor >= 0.0 && cfg.deadzone_factor < 1.0))
    throw Error(ErrorCode::invalid_argument, "deadzone_factor must be in [0, 1)");
}

IndexBlock quantize(const RealBlock& coeffs, const QuantConfig& cfg) {
  IndexBlock out{};
  const double q = cfg.q;
  for (int i = 0; i < kBlockArea; ++i) {
    const double c = coeffs[i];
    const double mag = std::max(0.0, std::floor(std::abs(c) / q - cfg.deadzone_factor + 0.5));
    const auto level = static_cast<std::int32_t>(mag);
    out[i] = c < 0 ? -level : level;
  }
  return out;
}

RealBlock dequantize(const IndexBlock& indices, const QuantConfig& cfg) {
  RealBlock out{};
  for (int i = 0; i < kBlockArea; ++i) out[i] = static_cast<double>(indices[i]) * cfg.q;
  return out;
}

}  // namespace rdac
