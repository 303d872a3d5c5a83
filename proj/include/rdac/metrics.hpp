#pragma once

#include <vector>

#include "rdac/plane.hpp"

namespace rdac {

/// Reported in place of +inf when two planes are identical.
inline constexpr double kPsnrLosslessSentinel = 99.0;

inline constexpr int kSsimWindow = 8;
inline constexpr double kSsimC1 = (0.01 * 255) * (0.01 * 255);
inline constexpr double kSsimC2 = (0.03 * 255) * (0.03 * 255);
inline constexpr int kMsSsimScales = 5;
inline constexpr double kMsSsimWeights[kMsSsimScales] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
/// Smallest input (per dimension) for which all MS-SSIM scales are at least 2x2.
inline constexpr int kMsSsimMinDimension = 32;

double mse(const PicturePlane& a, const PicturePlane& b);
double mse(const ResidualPlane& a, const ResidualPlane& b);

/// 10*log10(255^2 / MSE); kPsnrLosslessSentinel when the planes are identical.
double psnr(const PicturePlane& a, const PicturePlane& b);

/// Mean SSIM over all 8x8 windows at stride 1 (the window shrinks to the plane size
/// for planes smaller than 8 in either dimension).
double ssim(const PicturePlane& a, const PicturePlane& b);

/// Five-scale MS-SSIM with 2x2 mean downsampling. Negative per-scale terms clamp to 0.
double ms_ssim(const PicturePlane& a, const PicturePlane& b);

struct FrameQuality {
  double psnr = 0.0;
  bool lossless = false;
  double ssim = 0.0;
  double ms_ssim = 0.0;
  double mse = 0.0;
};

struct QualityReport {
  std::vector<FrameQuality> frames;
  double mean_psnr = 0.0;
  double mean_ssim = 0.0;
  double mean_ms_ssim = 0.0;
  double mean_mse = 0.0;
};

/// Luma-plane metrics for each frame pair.
FrameQuality measure_frame(const Frame& original, const Frame& decoded);
QualityReport measure_sequence(const std::vector<Frame>& original,
                               const std::vector<Frame>& decoded);

enum class Metric { psnr, ssim, ms_ssim };
std::string_view to_string(Metric m);
double pick(const FrameQuality& q, Metric m);

}  // namespace rdac
