#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "rdac/motion.hpp"

namespace rdac {

double MotionConfig::resolved_sigma(int width, int height) const {
  return sigma > 0.0 ? sigma : std::max(width, height) / 8.0;
}

void validate(const MotionConfig& cfg) {
  if (cfg.keypoints < 1 || cfg.keypoints > 255)
    throw Error(ErrorCode::invalid_argument, "keypoint count must be in 1..255");
  if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma))
    throw Error(ErrorCode::invalid_argument, "sigma must be positive (or 0 for the default)");
  if (cfg.block < 8 || cfg.block % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "block must be even and at least 8");
  if (cfg.search_radius < 1)
    throw Error(ErrorCode::invalid_argument, "search_radius must be at least 1");
}

std::vector<double> corner_response(const PicturePlane& p) {
  const int w = p.width();
  const int h = p.height();
  const std::size_t n = std::size_t(w) * h;
  std::vector<std::int64_t> gxx(n), gyy(n), gxy(n);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      auto s = [&](int dx, int dy) { return std::int64_t(p.clamped(x + dx, y + dy)); };
      const std::int64_t gx = (s(1, -1) + 2 * s(1, 0) + s(1, 1)) - (s(-1, -1) + 2 * s(-1, 0) + s(-1, 1));
      const std::int64_t gy = (s(-1, 1) + 2 * s(0, 1) + s(1, 1)) - (s(-1, -1) + 2 * s(0, -1) + s(1, -1));
      const std::size_t i = std::size_t(y) * w + x;
      gxx[i] = gx * gx;
      gyy[i] = gy * gy;
      gxy[i] = gx * gy;
    }
  std::vector<double> response(n);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      std::int64_t a = 0, b = 0, c = 0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const std::size_t j =
              std::size_t(std::clamp(y + dy, 0, h - 1)) * w + std::clamp(x + dx, 0, w - 1);
          a += gxx[j];
          b += gxy[j];
          c += gyy[j];
        }
      const double half_trace = 0.5 * double(a + c);
      const double half_diff = 0.5 * double(a - c);
      const double lambda_min = half_trace - std::sqrt(half_diff * half_diff + double(b) * double(b));
      response[std::size_t(y) * w + x] = std::max(0.0, lambda_min);
    }
  return response;
}

KeypointSet detect_keypoints(const PicturePlane& reference, const MotionConfig& cfg) {
  validate(cfg);
  const int w = reference.width();
  const int h = reference.height();
  if (w < 2 * cfg.block || h < 2 * cfg.block)
    throw Error(ErrorCode::image_too_small,
                "keypoint detection needs a plane of at least " + std::to_string(2 * cfg.block) +
                    " pixels per side");
  const auto response = corner_response(reference);
  auto r = [&](int x, int y) { return response[std::size_t(y) * w + x]; };

  struct Candidate {
    double response;
    int x, y;
  };
  std::vector<Candidate> maxima;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const double v = r(x, y);
      if (v <= 0.0) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if ((dx == 0 && dy == 0) || x + dx < 0 || y + dy < 0 || x + dx >= w || y + dy >= h)
            continue;
          if (r(x + dx, y + dy) > v) {
            is_max = false;
            break;
          }
        }
      if (is_max) maxima.push_back({v, x, y});
    }
  // Raster order is the scan order, so a stable sort keeps it among equal responses.
  std::stable_sort(maxima.begin(), maxima.end(),
                   [](const Candidate& a, const Candidate& b) { return a.response > b.response; });

  const auto k = static_cast<std::size_t>(cfg.keypoints);
  // A keypoint may not sit inside the matching patch of one already chosen.
  const int half = cfg.block / 2;
  KeypointSet out;
  for (const auto& c : maxima) {
    if (out.positions.size() == k) break;
    const bool spaced = std::all_of(out.positions.begin(), out.positions.end(), [&](Point p) {
      return std::max(std::abs(p.x - c.x), std::abs(p.y - c.y)) >= half;
    });
    if (spaced) out.positions.push_back({c.x, c.y});
  }

  if (out.positions.size() < k) {
    const int g = static_cast<int>(std::ceil(std::sqrt(double(k))));
    for (int j = 0; j < g && out.positions.size() < k; ++j)
      for (int i = 0; i < g && out.positions.size() < k; ++i) {
        const Point p{(2 * i + 1) * w / (2 * g), (2 * j + 1) * h / (2 * g)};
        if (std::find(out.positions.begin(), out.positions.end(), p) == out.positions.end())
          out.positions.push_back(p);
      }
  }
  out.displacements.assign(out.positions.size(), Displacement{});
  return out;
}

KeypointSet track_keypoints(const PicturePlane& reference, const PicturePlane& target,
                            const KeypointSet& keypoints, const MotionConfig& cfg) {
  validate(cfg);
  if (!reference.same_geometry(target))
    throw Error(ErrorCode::dimension_mismatch, "track_keypoints: planes differ in size");
  const int w = reference.width();
  const int h = reference.height();
  const int n = cfg.block;
  if (w < n || h < n) throw Error(ErrorCode::image_too_small, "plane smaller than one block");
  const int radius = cfg.search_radius;

  KeypointSet out;
  out.positions = keypoints.positions;
  out.displacements.reserve(keypoints.size());
  for (const Point& kp : keypoints.positions) {
    const int ox = std::clamp(kp.x - n / 2, 0, w - n);
    const int oy = std::clamp(kp.y - n / 2, 0, h - n);
    std::int64_t best_sad = std::numeric_limits<std::int64_t>::max();
    int best_norm = 0;
    Displacement best{};
    for (int dy = -radius; dy <= radius; ++dy)
      for (int dx = -radius; dx <= radius; ++dx) {
        const bool inside = ox + dx >= 0 && oy + dy >= 0 && ox + dx + n <= w && oy + dy + n <= h;
        std::int64_t sad = 0;
        for (int y = 0; y < n && sad <= best_sad; ++y) {
          const auto ref_row = reference.row(oy + y).subspan(ox, n);
          if (inside) {
            const auto tgt_row = target.row(oy + dy + y).subspan(ox + dx, n);
            for (int x = 0; x < n; ++x) sad += std::abs(int(ref_row[x]) - int(tgt_row[x]));
          } else {
            for (int x = 0; x < n; ++x)
              sad += std::abs(int(ref_row[x]) - int(target.clamped(ox + dx + x, oy + dy + y)));
          }
        }
        const int norm = dx * dx + dy * dy;
        if (sad < best_sad || (sad == best_sad && norm < best_norm)) {
          best_sad = sad;
          best_norm = norm;
          best = {dx, dy};
        }
      }
    out.displacements.push_back(best);
  }
  return out;
}

}  // namespace rdac
