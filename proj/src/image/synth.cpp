#include "rdac/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace rdac {

std::string_view to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::translating_texture: return "translating_texture";
    case SynthKind::deforming_blob: return "deforming_blob";
    case SynthKind::static_noise: return "static_noise";
    case SynthKind::zoom_pan: return "zoom_pan";
  }
  return "unknown";
}

std::optional<SynthKind> parse_synth_kind(std::string_view name) {
  for (auto k : {SynthKind::translating_texture, SynthKind::deforming_blob,
                 SynthKind::static_noise, SynthKind::zoom_pan})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// mt19937_64 output is fully specified; the mapping to [0,1) is done here so the
// generated content does not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

struct Wave {
  int kx, ky;
  double amplitude, phase;
};

/// Sum of sinusoids with integer spatial frequencies: periodic in (width, height).
class PeriodicTexture {
 public:
  PeriodicTexture(Rng& rng, int width, int height, int components, double amplitude)
      : width_(width), height_(height) {
    // One fundamental along x keeps the pattern free of short horizontal periods.
    waves_.push_back({1, rng.integer(-1, 1), amplitude * rng.uniform(0.8, 1.2),
                      rng.uniform(0.0, kTwoPi)});
    for (int i = 1; i < components; ++i) {
      Wave w{rng.integer(1, 4), rng.integer(-4, 4), amplitude * rng.uniform(0.3, 0.9),
             rng.uniform(0.0, kTwoPi)};
      waves_.push_back(w);
    }
  }

  double operator()(double x, double y) const {
    double v = 0.0;
    for (const auto& w : waves_)
      v += w.amplitude * std::sin(kTwoPi * (w.kx * x / width_ + w.ky * y / height_) + w.phase);
    return v;
  }

 private:
  int width_, height_;
  std::vector<Wave> waves_;
};

std::uint8_t to_pixel(double v) {
  return clip_pixel(static_cast<int>(std::floor(v + 0.5)));
}

template <typename Fn>
Frame render(int width, int height, std::int64_t index, Fn&& value) {
  PicturePlane p(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) p.at(x, y) = to_pixel(value(double(x), double(y)));
  return Frame({std::move(p)}, index);
}

std::vector<Frame> translating_texture(int w, int h, int n, Rng& rng) {
  PeriodicTexture texture(rng, w, h, 6, 22.0);
  const PicturePlane base = render(w, h, 0, [&](double x, double y) {
                              return 128.0 + texture(x, y);
                            }).luma();
  std::vector<Frame> frames;
  for (int t = 0; t < n; ++t) {
    PicturePlane p(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) p.at(x, y) = base.at(((x - t) % w + w) % w, y);
    frames.emplace_back(std::vector<PicturePlane>{std::move(p)}, t);
  }
  return frames;
}

std::vector<Frame> deforming_blob(int w, int h, int n, Rng& rng) {
  PeriodicTexture texture(rng, w, h, 5, 14.0);
  const double cx = w * rng.uniform(0.4, 0.6);
  const double cy = h * rng.uniform(0.4, 0.6);
  const double rx = w * rng.uniform(0.15, 0.22);
  const double ry = h * rng.uniform(0.15, 0.22);
  const double phase_x = rng.uniform(0.0, kTwoPi);
  const double phase_y = rng.uniform(0.0, kTwoPi);
  // Peak warp amplitude in pixels, reached at the final frame.
  const double max_amplitude = 0.05 * std::min(w, h) * rng.uniform(1.6, 2.0);
  const double growth = n > 1 ? max_amplitude / (n - 1) : 0.0;

  auto scene = [&](double x, double y) {
    const double dx = (x - cx) / rx;
    const double dy = (y - cy) / ry;
    const double blob = 90.0 * std::exp(-0.5 * (dx * dx + dy * dy));
    return 100.0 + texture(x, y) + blob;
  };

  std::vector<Frame> frames;
  for (int t = 0; t < n; ++t) {
    const double a = growth * t;
    frames.push_back(render(w, h, t, [&](double x, double y) {
      const double ux = a * std::sin(kTwoPi * y / h + phase_x);
      const double uy = a * std::sin(kTwoPi * x / w + phase_y);
      return scene(x + ux, y + uy);
    }));
  }
  return frames;
}

std::vector<Frame> static_noise(int w, int h, int n, Rng& rng) {
  PicturePlane p(w, h);
  for (auto& s : p.samples()) s = static_cast<std::uint8_t>(rng.integer(0, 255));
  std::vector<Frame> frames;
  for (int t = 0; t < n; ++t) frames.emplace_back(std::vector<PicturePlane>{p}, t);
  return frames;
}

std::vector<Frame> zoom_pan(int w, int h, int n, Rng& rng) {
  PeriodicTexture texture(rng, w, h, 6, 20.0);
  const double cx = 0.5 * w;
  const double cy = 0.5 * h;
  std::vector<Frame> frames;
  for (int t = 0; t < n; ++t) {
    const double scale = 1.0 + 0.004 * t;
    const double px = 0.5 * t;
    const double py = 0.25 * t;
    frames.push_back(render(w, h, t, [&](double x, double y) {
      return 128.0 + texture(cx + (x - cx) / scale + px, cy + (y - cy) / scale + py);
    }));
  }
  return frames;
}

}  // namespace

std::vector<Frame> synth_sequence(SynthKind kind, int width, int height, int n_frames,
                                  std::uint64_t seed) {
  if (width <= 0 || height <= 0)
    throw Error(ErrorCode::invalid_argument, "synth_sequence: zero dimensions");
  if (n_frames < 1) throw Error(ErrorCode::invalid_argument, "synth_sequence: n_frames < 1");
  if (width < kMinFrameDimension || height < kMinFrameDimension)
    throw Error(ErrorCode::image_too_small, "synth_sequence: minimum size is 16x16");
  Rng rng(seed ^ (0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(kind) + 1)));
  switch (kind) {
    case SynthKind::translating_texture: return translating_texture(width, height, n_frames, rng);
    case SynthKind::deforming_blob: return deforming_blob(width, height, n_frames, rng);
    case SynthKind::static_noise: return static_noise(width, height, n_frames, rng);
    case SynthKind::zoom_pan: return zoom_pan(width, height, n_frames, rng);
  }
  throw Error(ErrorCode::invalid_argument, "unknown synth kind");
}

}  // namespace rdac
