#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rdac/eval.hpp"

namespace rdac {

RdPoint RdPoint::with_metric(Metric m) const {
  RdPoint p = *this;
  p.metric = m;
  switch (m) {
    case Metric::psnr: p.quality = psnr; break;
    case Metric::ssim: p.quality = ssim; break;
    case Metric::ms_ssim: p.quality = ms_ssim; break;
  }
  return p;
}

RdPoint measure_point(const std::vector<Frame>& frames, const CodecConfig& cfg, Metric metric) {
  const EncodeResult enc = encode_sequence(frames, cfg);
  const DecodeResult dec = decode_sequence(enc.bytes);
  const QualityReport q = measure_sequence(frames, dec.frames);
  RdPoint p;
  p.bits = 8ull * enc.bytes.size();
  p.bpp = double(p.bits) /
          (double(frames.size()) * frames.front().width() * frames.front().height());
  p.gop = cfg.gop_size;
  p.lambda = cfg.lambda;
  p.mode = cfg.mode;
  p.psnr = q.mean_psnr;
  p.ssim = q.mean_ssim;
  p.ms_ssim = q.mean_ms_ssim;
  p.mse = q.mean_mse;
  return p.with_metric(metric);
}

std::vector<RdPoint> rd_sweep(const std::vector<Frame>& frames, std::span<const int> gops,
                              std::span<const double> lambdas, const CodecConfig& base,
                              const SweepOptions& options) {
  if (frames.empty() || gops.empty() || lambdas.empty())
    throw Error(ErrorCode::empty_input, "rd_sweep needs frames, GOP sizes and lambdas");
  std::vector<CodecConfig> cells;
  for (int g : gops)
    for (double l : lambdas) {
      CodecConfig c = base;
      c.gop_size = g;
      c.lambda = l;
      validate(c);
      cells.push_back(c);
    }

  std::vector<RdPoint> points(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        points[i] = measure_point(frames, cells[i], options.metric);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(options.jobs, 1, static_cast<int>(cells.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return points;
}

namespace {

std::vector<RdPoint> pareto(std::vector<RdPoint> points) {
  std::stable_sort(points.begin(), points.end(), [](const RdPoint& a, const RdPoint& b) {
    return a.bpp < b.bpp || (a.bpp == b.bpp && a.quality > b.quality);
  });
  std::vector<RdPoint> kept;
  for (const auto& p : points) {
    if (!kept.empty() && p.quality <= kept.back().quality) continue;  // dominated or same bpp
    kept.push_back(p);
  }
  return kept;
}

// Positive when b lies strictly below the chord from a to c.
double below_chord(const RdPoint& a, const RdPoint& b, const RdPoint& c) {
  return (b.bpp - a.bpp) * (c.quality - a.quality) - (b.quality - a.quality) * (c.bpp - a.bpp);
}

}  // namespace

RdCurve convex_hull(std::vector<RdPoint> points) {
  if (points.empty()) throw Error(ErrorCode::empty_input, "convex_hull of no points");
  RdCurve hull;
  for (const auto& p : pareto(std::move(points))) {
    while (hull.points.size() >= 2 &&
           below_chord(hull.points[hull.points.size() - 2], hull.points.back(), p) > 0.0)
      hull.points.pop_back();
    hull.points.push_back(p);
  }
  return hull;
}

std::vector<bool> hull_membership(const std::vector<RdPoint>& points) {
  std::vector<bool> member(points.size(), false);
  if (points.empty()) return member;
  const RdCurve hull = convex_hull(points);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (const auto& h : hull.points)
      if (h.bpp == points[i].bpp && h.quality == points[i].quality && h.gop == points[i].gop &&
          h.lambda == points[i].lambda) {
        member[i] = true;
        break;
      }
  return member;
}

RdCurve make_curve(std::vector<RdPoint> points) {
  std::sort(points.begin(), points.end(),
            [](const RdPoint& a, const RdPoint& b) { return a.bpp < b.bpp; });
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].bpp > points[i - 1].bpp))
      throw Error(ErrorCode::non_monotonic, "bpp values repeat");
    if (!(points[i].quality > points[i - 1].quality))
      throw Error(ErrorCode::non_monotonic, "quality does not increase with bpp");
  }
  return RdCurve{std::move(points)};
}

MonotoneCubic::MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
  const std::size_t n = xs_.size();
  if (n < 2 || ys_.size() != n)
    throw Error(ErrorCode::invalid_argument, "interpolation needs two or more points");
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = xs_[k + 1] - xs_[k];
    if (!(h[k] > 0.0)) throw Error(ErrorCode::non_monotonic, "abscissae must increase");
    delta[k] = (ys_[k + 1] - ys_[k]) / h[k];
  }
  slopes_.assign(n, 0.0);
  if (n == 2) {
    slopes_[0] = slopes_[1] = delta[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slopes_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  // Three-point end slopes, limited to keep the ends shape-preserving.
  auto edge = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (std::signbit(m) != std::signbit(d0) || d0 == 0.0)
      m = 0.0;
    else if (std::signbit(d0) != std::signbit(d1) && std::abs(m) > 3.0 * std::abs(d0))
      m = 3.0 * d0;
    return m;
  };
  slopes_[0] = edge(h[0], h[1], delta[0], delta[1]);
  slopes_[n - 1] = edge(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t n = xs_.size();
  std::size_t k = std::upper_bound(xs_.begin(), xs_.end(), x) - xs_.begin();
  k = std::clamp<std::size_t>(k, 1, n - 1) - 1;
  const double h = xs_[k + 1] - xs_[k];
  const double t = (x - xs_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * ys_[k] + (t3 - 2 * t2 + t) * h * slopes_[k] +
         (-2 * t3 + 3 * t2) * ys_[k + 1] + (t3 - t2) * h * slopes_[k + 1];
}

double MonotoneCubic::integral(double lo, double hi) const {
  // Antiderivative of the Hermite basis in the local coordinate t.
  auto primitive = [&](std::size_t k, double t) {
    const double h = xs_[k + 1] - xs_[k];
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    return h * ((t4 / 2 - t3 + t) * ys_[k] + (t4 / 4 - 2 * t3 / 3 + t2 / 2) * h * slopes_[k] +
                (-t4 / 2 + t3) * ys_[k + 1] + (t4 / 4 - t3 / 3) * h * slopes_[k + 1]);
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xs_.size(); ++k) {
    const double a = std::max(lo, xs_[k]);
    const double b = std::min(hi, xs_[k + 1]);
    if (b <= a) continue;
    const double h = xs_[k + 1] - xs_[k];
    total += primitive(k, (b - xs_[k]) / h) - primitive(k, (a - xs_[k]) / h);
  }
  return total;
}

double bd_rate(const RdCurve& anchor, const RdCurve& test) {
  constexpr std::size_t kMinPoints = 4;
  if (anchor.points.size() < kMinPoints || test.points.size() < kMinPoints)
    throw Error(ErrorCode::invalid_argument, "bd_rate needs at least 4 points per curve");
  auto interpolant = [](const RdCurve& c) {
    std::vector<double> q, r;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      if (i > 0 && !(c.points[i].quality > c.points[i - 1].quality &&
                     c.points[i].bpp > c.points[i - 1].bpp))
        throw Error(ErrorCode::non_monotonic, "curve quality must increase with bpp");
      if (!(c.points[i].bpp > 0.0)) throw Error(ErrorCode::invalid_argument, "bpp must be positive");
      q.push_back(c.points[i].quality);
      r.push_back(std::log10(c.points[i].bpp));
    }
    return MonotoneCubic(std::move(q), std::move(r));
  };
  const MonotoneCubic a = interpolant(anchor);
  const MonotoneCubic t = interpolant(test);
  const double lo = std::max(a.min_x(), t.min_x());
  const double hi = std::min(a.max_x(), t.max_x());
  if (!(hi > lo)) throw Error(ErrorCode::no_overlap, "curves share no quality interval");
  const double mean_diff = (t.integral(lo, hi) - a.integral(lo, hi)) / (hi - lo);
  return (std::pow(10.0, mean_diff) - 1.0) * 100.0;
}

double interpolate_quality(const RdCurve& curve, double bpp) {
  const auto& p = curve.points;
  if (p.empty()) throw Error(ErrorCode::empty_input, "empty curve");
  if (bpp <= p.front().bpp) return p.front().quality;
  if (bpp >= p.back().bpp) return p.back().quality;
  auto it = std::upper_bound(p.begin(), p.end(), bpp,
                             [](double v, const RdPoint& q) { return v < q.bpp; });
  const RdPoint& b = *it;
  const RdPoint& a = *(it - 1);
  return a.quality + (b.quality - a.quality) * (bpp - a.bpp) / (b.bpp - a.bpp);
}

double interpolate_bpp(const RdCurve& curve, double quality) {
  const auto& p = curve.points;
  if (p.empty()) throw Error(ErrorCode::empty_input, "empty curve");
  if (quality <= p.front().quality) return p.front().bpp;
  for (std::size_t i = 1; i < p.size(); ++i)
    if (quality <= p[i].quality) {
      const RdPoint& a = p[i - 1];
      const RdPoint& b = p[i];
      return a.bpp + (b.bpp - a.bpp) * (quality - a.quality) / (b.quality - a.quality);
    }
  return p.back().bpp;
}

}  // namespace rdac
