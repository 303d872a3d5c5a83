#include <cmath>
#include <numbers>

#include "rdac/transform.hpp"

namespace rdac {

namespace {

struct Basis {
  // c[u][x] = alpha(u) * cos((2x + 1) u pi / 16)
  double c[kBlockSize][kBlockSize];
  Basis() {
    for (int u = 0; u < kBlockSize; ++u) {
      const double alpha = u == 0 ? std::sqrt(1.0 / kBlockSize) : std::sqrt(2.0 / kBlockSize);
      for (int x = 0; x < kBlockSize; ++x)
        c[u][x] = alpha * std::cos((2 * x + 1) * u * std::numbers::pi / (2.0 * kBlockSize));
    }
  }
};

const Basis& basis() {
  static const Basis b;
  return b;
}

}  // namespace

// Summation order is fixed (ascending index, rows then columns) so encoder and decoder
// builds of the same binary agree bit for bit.
RealBlock dct8x8(const RealBlock& block) {
  const auto& c = basis().c;
  RealBlock tmp{};
  for (int y = 0; y < kBlockSize; ++y)
    for (int u = 0; u < kBlockSize; ++u) {
      double s = 0.0;
      for (int x = 0; x < kBlockSize; ++x) s += c[u][x] * block[y * kBlockSize + x];
      tmp[y * kBlockSize + u] = s;
    }
  RealBlock out{};
  for (int u = 0; u < kBlockSize; ++u)
    for (int v = 0; v < kBlockSize; ++v) {
      double s = 0.0;
      for (int y = 0; y < kBlockSize; ++y) s += c[v][y] * tmp[y * kBlockSize + u];
      out[v * kBlockSize + u] = s;
    }
  return out;
}

RealBlock idct8x8(const RealBlock& coeffs) {
  const auto& c = basis().c;
  RealBlock tmp{};
  for (int v = 0; v < kBlockSize; ++v)
    for (int x = 0; x < kBlockSize; ++x) {
      double s = 0.0;
      for (int u = 0; u < kBlockSize; ++u) s += c[u][x] * coeffs[v * kBlockSize + u];
      tmp[v * kBlockSize + x] = s;
    }
  RealBlock out{};
  for (int x = 0; x < kBlockSize; ++x)
    for (int y = 0; y < kBlockSize; ++y) {
      double s = 0.0;
      for (int v = 0; v < kBlockSize; ++v) s += c[v][y] * tmp[v * kBlockSize + x];
      out[y * kBlockSize + x] = s;
    }
  return out;
}

}  // namespace rdac
