#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rdac/codec.hpp"
#include "rdac/metrics.hpp"

namespace rdac {

struct RdPoint {
  double bpp = 0.0;
  double quality = 0.0;
  Metric metric = Metric::ms_ssim;
  int gop = 0;
  double lambda = 0.0;
  CodecMode mode = CodecMode::temporal;
  /// Sequence means of every metric, so one sweep can be re-hulled on any axis.
  double psnr = 0.0, ssim = 0.0, ms_ssim = 0.0, mse = 0.0;
  std::uint64_t bits = 0;

  RdPoint with_metric(Metric m) const;
};

/// Ordered by strictly increasing bpp.
struct RdCurve {
  std::vector<RdPoint> points;
};

struct SweepOptions {
  Metric metric = Metric::ms_ssim;
  /// Worker threads; cells are independent and results come back in (gop, lambda) order.
  int jobs = 1;
};

/// One encode/decode/measure per (gop, lambda) cell, in gop-major order.
std::vector<RdPoint> rd_sweep(const std::vector<Frame>& frames, std::span<const int> gops,
                              std::span<const double> lambdas, const CodecConfig& base,
                              const SweepOptions& options = {});

/// Measures one already-encoded configuration.
RdPoint measure_point(const std::vector<Frame>& frames, const CodecConfig& cfg, Metric metric);

/// Upper-left Pareto envelope: ties in bpp keep the best quality, dominated points are
/// dropped, then points strictly below the chord of their neighbours.
RdCurve convex_hull(std::vector<RdPoint> points);
/// Per-point membership of the hull (same order as the input).
std::vector<bool> hull_membership(const std::vector<RdPoint>& points);

/// Sorts by bpp and checks the curve is usable for Bjontegaard integration.
RdCurve make_curve(std::vector<RdPoint> points);

/// Shape-preserving (Fritsch-Carlson) cubic Hermite interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys);
  double operator()(double x) const;
  double integral(double lo, double hi) const;
  double min_x() const { return xs_.front(); }
  double max_x() const { return xs_.back(); }

 private:
  std::vector<double> xs_, ys_, slopes_;
};

/// Bjontegaard delta bitrate in percent: log10(bpp) interpolated over quality on both
/// curves, averaged over the common quality interval. Needs 4+ points per curve.
double bd_rate(const RdCurve& anchor, const RdCurve& test);

/// Quality in `metric` units at bpp `x` along the piecewise-linear curve (clamped ends).
double interpolate_quality(const RdCurve& curve, double bpp);
/// bpp needed to reach `quality` along the piecewise-linear curve.
double interpolate_bpp(const RdCurve& curve, double quality);

struct DriftSeries {
  std::vector<double> values;
  /// One least-squares slope per GOP, in quality units per frame.
  std::vector<double> gop_slopes;
  Metric metric = Metric::ms_ssim;
};

double least_squares_slope(std::span<const double> values);

DriftSeries drift_analysis(const std::vector<Frame>& original, const std::vector<Frame>& decoded,
                           int gop_size, Metric metric = Metric::ms_ssim);

struct BenchStat {
  FrameType type = FrameType::intra;
  bool encode = true;
  std::size_t samples = 0;
  double mean_seconds = 0.0;
  double median_seconds = 0.0;
};

struct BenchReport {
  std::vector<BenchStat> stats;
  int repetitions = 0;
};

/// Wall-clock seconds per frame for encode and decode, split by frame type. Each
/// repetition contributes one sample: its mean time per frame of that type.
BenchReport bench(const std::vector<Frame>& frames, const CodecConfig& cfg, int repetitions);

// CSV / SVG emitters. Comment lines start with '#'.
void write_rd_csv(std::ostream& out, const std::vector<RdPoint>& points,
                  const std::vector<std::string>& comments);
std::vector<RdPoint> read_rd_csv(std::istream& in);
void write_drift_csv(std::ostream& out, const DriftSeries& series,
                     const std::vector<std::string>& comments);
void write_quality_csv(std::ostream& out, const QualityReport& report,
                       const std::vector<std::string>& comments);
void write_bench_csv(std::ostream& out, const BenchReport& report,
                     const std::vector<std::string>& comments);
std::string bd_line(double percent);

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};
void write_svg_chart(std::ostream& out, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<SvgSeries>& series);

}  // namespace rdac
