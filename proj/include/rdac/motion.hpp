#pragma once

#include <optional>
#include <vector>

#include "rdac/plane.hpp"

namespace rdac {

struct Point {
  int x = 0, y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Integer-pel displacement from the reference frame to the target frame.
struct Displacement {
  int dx = 0, dy = 0;
  friend bool operator==(const Displacement&, const Displacement&) = default;
};

/// Sparse motion landmarks: positions on the reference, displacements towards the target.
struct KeypointSet {
  std::vector<Point> positions;
  std::vector<Displacement> displacements;

  std::size_t size() const noexcept { return positions.size(); }
  friend bool operator==(const KeypointSet&, const KeypointSet&) = default;
};

struct MotionConfig {
  int keypoints = 10;
  /// Gaussian bandwidth in pixels; 0 selects max(width, height) / 8.
  double sigma = 0.0;
  int block = 16;
  int search_radius = 16;

  double resolved_sigma(int width, int height) const;
};

void validate(const MotionConfig& cfg);

/// Dense per-pixel displacement in pixels (row-major).
struct MotionField {
  int width = 0, height = 0;
  std::vector<double> ux, uy;

  MotionField() = default;
  MotionField(int w, int h) : width(w), height(h), ux(std::size_t(w) * h), uy(std::size_t(w) * h) {}
  double x_at(int x, int y) const { return ux[std::size_t(y) * width + x]; }
  double y_at(int x, int y) const { return uy[std::size_t(y) * width + x]; }
};

/// Minimum-eigenvalue corner response of the 3x3-summed Sobel structure tensor,
/// edge-replicated at the borders.
std::vector<double> corner_response(const PicturePlane& plane);

/// Top-K corner maxima (8-neighbour non-max suppression, descending response, ties in
/// raster order). A maximum is skipped when it lies inside the block x block patch
/// centred on an already selected keypoint (Chebyshev distance below block/2). When fewer than K maxima have
/// positive response, the remainder comes from a ceil(sqrt K) x ceil(sqrt K) grid.
/// Displacements are zero-filled.
KeypointSet detect_keypoints(const PicturePlane& reference, const MotionConfig& cfg);

/// Exhaustive integer SAD block matching around each keypoint.
KeypointSet track_keypoints(const PicturePlane& reference, const PicturePlane& target,
                            const KeypointSet& keypoints, const MotionConfig& cfg);

/// Nadaraya-Watson interpolation of the keypoint displacements with Gaussian weights,
/// falling back to the nearest keypoint where the total weight underflows 1e-12.
MotionField dense_motion(const KeypointSet& keypoints, int width, int height, double sigma);

/// Backward bilinear warp: out(p) = reference(p + u(p)), source clamped to the plane,
/// rounded half away from zero.
PicturePlane warp(const PicturePlane& reference, const MotionField& field);

/// Backward field that maps target pixels onto the reference (negated displacements).
MotionField prediction_field(const KeypointSet& keypoints, int width, int height, double sigma);

/// Decoder-side prediction: everything the target contributes is in `keypoints`.
/// Chroma planes, when present, are warped with the luma field scaled by 1/2.
Frame synthesize_prediction(const Frame& reference, const KeypointSet& keypoints, double sigma);

struct Prediction {
  Frame frame;
  KeypointSet keypoints;
};

/// detect (unless `cached_positions` is given) -> track -> dense motion -> warp.
Prediction predict_frame(const Frame& reference, const Frame& target, const MotionConfig& cfg,
                         const std::vector<Point>* cached_positions = nullptr);

}  // namespace rdac
