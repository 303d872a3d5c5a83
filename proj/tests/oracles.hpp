#pragma once

// Direct-from-formula reference implementations used to check the optimized code.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "rdac/plane.hpp"

namespace oracle {

inline double uniform(std::mt19937_64& rng) {
  return double(rng() >> 11) * (1.0 / 9007199254740992.0);
}

inline rdac::PicturePlane random_picture(std::mt19937_64& rng, int w, int h, int lo = 0,
                                         int hi = 255) {
  rdac::PicturePlane p(w, h);
  std::uniform_int_distribution<int> d(lo, hi);
  for (auto& s : p.samples()) s = static_cast<std::uint8_t>(d(rng));
  return p;
}

inline rdac::ResidualPlane random_residual(std::mt19937_64& rng, int w, int h, int amp) {
  rdac::ResidualPlane p(w, h);
  std::uniform_int_distribution<int> d(-amp, amp);
  for (auto& s : p.samples()) s = static_cast<std::int16_t>(d(rng));
  return p;
}

/// Smooth picture: a few random sinusoids plus mild noise.
inline rdac::PicturePlane smooth_picture(std::mt19937_64& rng, int w, int h) {
  rdac::PicturePlane p(w, h);
  double fx[3], fy[3], ph[3];
  for (int k = 0; k < 3; ++k) {
    fx[k] = 1 + int(uniform(rng) * 4);
    fy[k] = 1 + int(uniform(rng) * 4);
    ph[k] = uniform(rng) * 6.28;
  }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double v = 128;
      for (int k = 0; k < 3; ++k)
        v += 30 * std::sin(2 * std::numbers::pi * (fx[k] * x / w + fy[k] * y / h) + ph[k]);
      v += (uniform(rng) - 0.5) * 8;
      p.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  return p;
}

// O(N^4) orthonormal 2-D DCT-II straight from the definition.
inline std::array<double, 64> dct(const std::array<double, 64>& x) {
  std::array<double, 64> out{};
  for (int v = 0; v < 8; ++v)
    for (int u = 0; u < 8; ++u) {
      double acc = 0;
      for (int y = 0; y < 8; ++y)
        for (int xx = 0; xx < 8; ++xx)
          acc += x[y * 8 + xx] * std::cos((2 * xx + 1) * u * std::numbers::pi / 16) *
                 std::cos((2 * y + 1) * v * std::numbers::pi / 16);
      const double cu = u == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8);
      const double cv = v == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8);
      out[v * 8 + u] = cu * cv * acc;
    }
  return out;
}

inline double mse(const rdac::PicturePlane& a, const rdac::PicturePlane& b) {
  double acc = 0;
  for (int y = 0; y < a.height(); ++y)
    for (int x = 0; x < a.width(); ++x) {
      const double d = double(a.at(x, y)) - double(b.at(x, y));
      acc += d * d;
    }
  return acc / (double(a.width()) * a.height());
}

inline double psnr(const rdac::PicturePlane& a, const rdac::PicturePlane& b) {
  const double m = mse(a, b);
  return m == 0 ? 99.0 : 10 * std::log10(255.0 * 255.0 / m);
}

using Image = std::vector<std::vector<double>>;  // [y][x]

inline Image to_image(const rdac::PicturePlane& p) {
  Image img(p.height(), std::vector<double>(p.width()));
  for (int y = 0; y < p.height(); ++y)
    for (int x = 0; x < p.width(); ++x) img[y][x] = p.at(x, y);
  return img;
}

struct SsimParts {
  double ssim, cs;
};

inline SsimParts ssim_parts(const Image& a, const Image& b) {
  const double c1 = std::pow(0.01 * 255, 2), c2 = std::pow(0.03 * 255, 2);
  const int h = int(a.size()), w = int(a[0].size());
  const int n = std::min({8, w, h});
  double s = 0, cs = 0;
  int count = 0;
  for (int y0 = 0; y0 + n <= h; ++y0)
    for (int x0 = 0; x0 + n <= w; ++x0) {
      double ma = 0, mb = 0;
      for (int y = y0; y < y0 + n; ++y)
        for (int x = x0; x < x0 + n; ++x) ma += a[y][x], mb += b[y][x];
      ma /= n * n, mb /= n * n;
      double va = 0, vb = 0, cov = 0;
      for (int y = y0; y < y0 + n; ++y)
        for (int x = x0; x < x0 + n; ++x) {
          va += (a[y][x] - ma) * (a[y][x] - ma);
          vb += (b[y][x] - mb) * (b[y][x] - mb);
          cov += (a[y][x] - ma) * (b[y][x] - mb);
        }
      va /= n * n, vb /= n * n, cov /= n * n;
      const double l = (2 * ma * mb + c1) / (ma * ma + mb * mb + c1);
      const double c = (2 * cov + c2) / (va + vb + c2);
      s += l * c, cs += c;
      ++count;
    }
  return {s / count, cs / count};
}

inline double ssim(const rdac::PicturePlane& a, const rdac::PicturePlane& b) {
  return ssim_parts(to_image(a), to_image(b)).ssim;
}

inline Image half(const Image& in) {
  const int h = int(in.size()) / 2, w = int(in[0].size()) / 2;
  Image out(h, std::vector<double>(w));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out[y][x] = (in[2 * y][2 * x] + in[2 * y][2 * x + 1] + in[2 * y + 1][2 * x] +
                   in[2 * y + 1][2 * x + 1]) / 4;
  return out;
}

inline double ms_ssim(const rdac::PicturePlane& a, const rdac::PicturePlane& b) {
  const double weights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
  Image ia = to_image(a), ib = to_image(b);
  double result = 1;
  for (int s = 0; s < 5; ++s) {
    const SsimParts p = ssim_parts(ia, ib);
    result *= std::pow(std::max(s == 4 ? p.ssim : p.cs, 0.0), weights[s]);
    if (s < 4) ia = half(ia), ib = half(ib);
  }
  return result;
}

using Xy = std::pair<double, double>;  // (bpp, quality)

// Upper-left envelope by exhaustive checks: a point survives if nothing at no more bpp
// beats it and it is not strictly under a chord between two other survivors.
inline std::vector<Xy> hull(std::vector<Xy> pts) {
  std::vector<Xy> pareto;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
      if (i == j) continue;
      const bool no_worse = pts[j].first <= pts[i].first && pts[j].second >= pts[i].second;
      const bool better = pts[j].first < pts[i].first || pts[j].second > pts[i].second;
      dominated = no_worse && (better || j < i);
    }
    if (!dominated) pareto.push_back(pts[i]);
  }
  std::vector<Xy> out;
  for (const auto& b : pareto) {
    bool under = false;
    for (const auto& a : pareto)
      for (const auto& c : pareto) {
        if (!(a.first < b.first && b.first < c.first)) continue;
        const double chord = a.second + (c.second - a.second) * (b.first - a.first) /
                                            (c.first - a.first);
        if (b.second < chord) under = true;
      }
    if (!under) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Fritsch-Carlson monotone cubic through (xs, ys), evaluated directly.
struct Pchip {
  std::vector<double> x, y, d;

  Pchip(std::vector<double> xs, std::vector<double> ys) : x(std::move(xs)), y(std::move(ys)) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x[i + 1] - x[i];
      s[i] = (y[i + 1] - y[i]) / h[i];
    }
    d.assign(n, 0.0);
    if (n == 2) {
      d[0] = d[1] = s[0];
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i)
      if (s[i - 1] * s[i] > 0) {
        const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
        d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
      }
    auto end = [](double h0, double h1, double s0, double s1) {
      double m = ((2 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
      if (m * s0 <= 0) return 0.0;
      if (s0 * s1 < 0 && std::abs(m) > 3 * std::abs(s0)) return 3 * s0;
      return m;
    };
    d[0] = end(h[0], h[1], s[0], s[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
  }

  double operator()(double v) const {
    std::size_t i = 0;
    while (i + 2 < x.size() && v > x[i + 1]) ++i;
    const double h = x[i + 1] - x[i], t = (v - x[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
  }
};

// Bjontegaard delta rate with the log-rate difference integrated by the trapezoid rule.
inline double bd_rate(const std::vector<Xy>& anchor, const std::vector<Xy>& test,
                      int samples = 1000) {
  auto fit = [](const std::vector<Xy>& c) {
    std::vector<double> q, r;
    for (const auto& [bpp, quality] : c) {
      q.push_back(quality);
      r.push_back(std::log10(bpp));
    }
    return Pchip(q, r);
  };
  const Pchip a = fit(anchor), t = fit(test);
  const double lo = std::max(a.x.front(), t.x.front());
  const double hi = std::min(a.x.back(), t.x.back());
  double sum = 0;
  for (int i = 0; i <= samples; ++i) {
    const double q = lo + (hi - lo) * i / samples;
    const double w = (i == 0 || i == samples) ? 0.5 : 1.0;
    sum += w * (t(q) - a(q));
  }
  return (std::pow(10.0, sum / samples) - 1.0) * 100.0;
}

}  // namespace oracle
