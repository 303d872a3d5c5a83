#include "rdac/metrics.hpp"

#include <cmath>
#include <string>

namespace rdac {

namespace {

template <typename T>
void require_same(const Plane<T>& a, const Plane<T>& b) {
  if (!a.same_geometry(b))
    throw Error(ErrorCode::dimension_mismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()));
}

template <typename T>
double mse_impl(const Plane<T>& a, const Plane<T>& b) {
  require_same(a, b);
  auto sa = a.samples();
  auto sb = b.samples();
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const std::int64_t d = std::int64_t(sa[i]) - std::int64_t(sb[i]);
    acc += d * d;
  }
  return static_cast<double>(acc) / static_cast<double>(sa.size());
}

/// Real-valued image used across MS-SSIM scales.
struct Image {
  int width = 0, height = 0;
  std::vector<double> v;
  double at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
};

Image to_image(const PicturePlane& p) {
  Image img{p.width(), p.height(), {}};
  img.v.assign(p.samples().begin(), p.samples().end());
  return img;
}

Image downsample(const Image& in) {
  Image out{in.width / 2, in.height / 2, {}};
  out.v.resize(static_cast<std::size_t>(out.width) * out.height);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x)
      out.v[static_cast<std::size_t>(y) * out.width + x] =
          0.25 * (in.at(2 * x, 2 * y) + in.at(2 * x + 1, 2 * y) + in.at(2 * x, 2 * y + 1) +
                  in.at(2 * x + 1, 2 * y + 1));
  return out;
}

/// Summed-area table with a zero guard row and column.
class Integral {
 public:
  template <typename Fn>
  Integral(int w, int h, Fn&& value) : stride_(w + 1), s_((w + 1) * std::size_t(h + 1), 0.0) {
    for (int y = 0; y < h; ++y) {
      double row = 0.0;
      for (int x = 0; x < w; ++x) {
        row += value(x, y);
        s_[idx(x + 1, y + 1)] = s_[idx(x + 1, y)] + row;
      }
    }
  }
  double box(int x, int y, int n) const {
    return s_[idx(x + n, y + n)] - s_[idx(x, y + n)] - s_[idx(x + n, y)] + s_[idx(x, y)];
  }

 private:
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * stride_ + x; }
  int stride_;
  std::vector<double> s_;
};

struct WindowMeans {
  double ssim = 0.0;       // mean of l*cs
  double cs = 0.0;         // mean of cs
};

WindowMeans window_means(const Image& a, const Image& b) {
  const int w = a.width;
  const int h = a.height;
  const int n = std::min({kSsimWindow, w, h});
  const Integral sa(w, h, [&](int x, int y) { return a.at(x, y); });
  const Integral sb(w, h, [&](int x, int y) { return b.at(x, y); });
  const Integral saa(w, h, [&](int x, int y) { return a.at(x, y) * a.at(x, y); });
  const Integral sbb(w, h, [&](int x, int y) { return b.at(x, y) * b.at(x, y); });
  const Integral sab(w, h, [&](int x, int y) { return a.at(x, y) * b.at(x, y); });

  const double inv = 1.0 / (double(n) * n);
  double total_ssim = 0.0;
  double total_cs = 0.0;
  std::size_t count = 0;
  for (int y = 0; y + n <= h; ++y) {
    for (int x = 0; x + n <= w; ++x) {
      const double ma = sa.box(x, y, n) * inv;
      const double mb = sb.box(x, y, n) * inv;
      const double va = saa.box(x, y, n) * inv - ma * ma;
      const double vb = sbb.box(x, y, n) * inv - mb * mb;
      const double cov = sab.box(x, y, n) * inv - ma * mb;
      const double l = (2.0 * ma * mb + kSsimC1) / (ma * ma + mb * mb + kSsimC1);
      const double cs = (2.0 * cov + kSsimC2) / (va + vb + kSsimC2);
      total_ssim += l * cs;
      total_cs += cs;
      ++count;
    }
  }
  return {total_ssim / double(count), total_cs / double(count)};
}

}  // namespace

double mse(const PicturePlane& a, const PicturePlane& b) { return mse_impl(a, b); }
double mse(const ResidualPlane& a, const ResidualPlane& b) { return mse_impl(a, b); }

double psnr(const PicturePlane& a, const PicturePlane& b) {
  const double m = mse(a, b);
  if (m == 0.0) return kPsnrLosslessSentinel;
  return 10.0 * std::log10(255.0 * 255.0 / m);
}

double ssim(const PicturePlane& a, const PicturePlane& b) {
  require_same(a, b);
  return window_means(to_image(a), to_image(b)).ssim;
}

double ms_ssim(const PicturePlane& a, const PicturePlane& b) {
  require_same(a, b);
  if (a.width() < kMsSsimMinDimension || a.height() < kMsSsimMinDimension)
    throw Error(ErrorCode::image_too_small,
                "ms_ssim needs at least 32x32, got " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()));
  Image ia = to_image(a);
  Image ib = to_image(b);
  double result = 1.0;
  for (int s = 0; s < kMsSsimScales; ++s) {
    const WindowMeans m = window_means(ia, ib);
    const double term = (s + 1 == kMsSsimScales) ? m.ssim : m.cs;
    result *= std::pow(std::max(term, 0.0), kMsSsimWeights[s]);
    if (s + 1 < kMsSsimScales) {
      ia = downsample(ia);
      ib = downsample(ib);
    }
  }
  return result;
}

FrameQuality measure_frame(const Frame& original, const Frame& decoded) {
  FrameQuality q;
  q.mse = mse(original.luma(), decoded.luma());
  q.lossless = q.mse == 0.0;
  q.psnr = psnr(original.luma(), decoded.luma());
  q.ssim = ssim(original.luma(), decoded.luma());
  q.ms_ssim = ms_ssim(original.luma(), decoded.luma());
  return q;
}

QualityReport measure_sequence(const std::vector<Frame>& original,
                               const std::vector<Frame>& decoded) {
  if (original.size() != decoded.size())
    throw Error(ErrorCode::dimension_mismatch, "sequence lengths differ: " +
                                                   std::to_string(original.size()) + " vs " +
                                                   std::to_string(decoded.size()));
  QualityReport r;
  for (std::size_t i = 0; i < original.size(); ++i) {
    r.frames.push_back(measure_frame(original[i], decoded[i]));
    r.mean_psnr += r.frames.back().psnr;
    r.mean_ssim += r.frames.back().ssim;
    r.mean_ms_ssim += r.frames.back().ms_ssim;
    r.mean_mse += r.frames.back().mse;
  }
  if (!r.frames.empty()) {
    const double n = double(r.frames.size());
    r.mean_psnr /= n;
    r.mean_ssim /= n;
    r.mean_ms_ssim /= n;
    r.mean_mse /= n;
  }
  return r;
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::psnr: return "psnr";
    case Metric::ssim: return "ssim";
    case Metric::ms_ssim: return "msssim";
  }
  return "unknown";
}

double pick(const FrameQuality& q, Metric m) {
  switch (m) {
    case Metric::psnr: return q.psnr;
    case Metric::ssim: return q.ssim;
    case Metric::ms_ssim: return q.ms_ssim;
  }
  return 0.0;
}

}  // namespace rdac
