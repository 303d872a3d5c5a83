#include <algorithm>
#include <cmath>
#include <limits>

#include "rdac/motion.hpp"

namespace rdac {

MotionField dense_motion(const KeypointSet& keypoints, int width, int height, double sigma) {
  const std::size_t k = keypoints.size();
  if (k == 0) throw Error(ErrorCode::invalid_argument, "dense_motion needs at least one keypoint");
  if (keypoints.displacements.size() != k)
    throw Error(ErrorCode::invalid_argument, "keypoints lack displacements");
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_argument, "sigma must be positive");

  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  // Weighted mean taken as an offset from the first displacement, so a field of equal
  // displacements comes out exact.
  const double base_x = keypoints.displacements[0].dx;
  const double base_y = keypoints.displacements[0].dy;
  MotionField field(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double wsum = 0.0, sx = 0.0, sy = 0.0;
      double nearest_d2 = std::numeric_limits<double>::infinity();
      std::size_t nearest = 0;
      for (std::size_t i = 0; i < k; ++i) {
        const double dx = x - keypoints.positions[i].x;
        const double dy = y - keypoints.positions[i].y;
        const double d2 = dx * dx + dy * dy;
        const double wgt = std::exp(-d2 * inv_two_sigma2);
        wsum += wgt;
        sx += wgt * (keypoints.displacements[i].dx - base_x);
        sy += wgt * (keypoints.displacements[i].dy - base_y);
        if (d2 < nearest_d2) {
          nearest_d2 = d2;
          nearest = i;
        }
      }
      const std::size_t idx = std::size_t(y) * width + x;
      if (wsum < 1e-12) {
        field.ux[idx] = keypoints.displacements[nearest].dx;
        field.uy[idx] = keypoints.displacements[nearest].dy;
      } else {
        field.ux[idx] = base_x + sx / wsum;
        field.uy[idx] = base_y + sy / wsum;
      }
    }
  return field;
}

PicturePlane warp(const PicturePlane& reference, const MotionField& field) {
  const int w = reference.width();
  const int h = reference.height();
  if (field.width != w || field.height != h)
    throw Error(ErrorCode::dimension_mismatch, "warp: field does not match plane");
  PicturePlane out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double sx = std::clamp(x + field.x_at(x, y), 0.0, double(w - 1));
      const double sy = std::clamp(y + field.y_at(x, y), 0.0, double(h - 1));
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double fx = sx - x0;
      const double fy = sy - y0;
      const double top = (1.0 - fx) * reference.at(x0, y0) + fx * reference.at(x1, y0);
      const double bottom = (1.0 - fx) * reference.at(x0, y1) + fx * reference.at(x1, y1);
      const double v = (1.0 - fy) * top + fy * bottom;
      out.at(x, y) = clip_pixel(static_cast<int>(std::floor(v + 0.5)));
    }
  return out;
}

MotionField prediction_field(const KeypointSet& keypoints, int width, int height, double sigma) {
  KeypointSet backward = keypoints;
  for (auto& d : backward.displacements) d = {-d.dx, -d.dy};
  return dense_motion(backward, width, height, sigma);
}

namespace {

MotionField chroma_field(const MotionField& luma, int cw, int ch) {
  MotionField f(cw, ch);
  for (int y = 0; y < ch; ++y)
    for (int x = 0; x < cw; ++x) {
      const int lx = std::min(2 * x, luma.width - 1);
      const int ly = std::min(2 * y, luma.height - 1);
      f.ux[std::size_t(y) * cw + x] = 0.5 * luma.x_at(lx, ly);
      f.uy[std::size_t(y) * cw + x] = 0.5 * luma.y_at(lx, ly);
    }
  return f;
}

}  // namespace

Frame synthesize_prediction(const Frame& reference, const KeypointSet& keypoints, double sigma) {
  const MotionField field =
      prediction_field(keypoints, reference.width(), reference.height(), sigma);
  Frame out;
  out.index = reference.index;
  out.planes.push_back(warp(reference.luma(), field));
  if (reference.planes.size() == 3) {
    const MotionField cf =
        chroma_field(field, reference.planes[1].width(), reference.planes[1].height());
    out.planes.push_back(warp(reference.planes[1], cf));
    out.planes.push_back(warp(reference.planes[2], cf));
  }
  return out;
}

Prediction predict_frame(const Frame& reference, const Frame& target, const MotionConfig& cfg,
                         const std::vector<Point>* cached_positions) {
  validate(cfg);
  if (!reference.same_geometry(target))
    throw Error(ErrorCode::dimension_mismatch, "predict_frame: reference and target differ");
  KeypointSet detected;
  if (cached_positions) {
    detected.positions = *cached_positions;
    detected.displacements.assign(detected.positions.size(), Displacement{});
  } else {
    detected = detect_keypoints(reference.luma(), cfg);
  }
  Prediction p;
  p.keypoints = track_keypoints(reference.luma(), target.luma(), detected, cfg);
  p.frame = synthesize_prediction(reference, p.keypoints,
                                  cfg.resolved_sigma(reference.width(), reference.height()));
  p.frame.index = target.index;
  return p;
}

}  // namespace rdac
