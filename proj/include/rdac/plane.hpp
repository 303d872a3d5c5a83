#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "rdac/error.hpp"

namespace rdac {

/// Row-major single-component sample array.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
      throw Error(ErrorCode::invalid_argument, "plane dimensions must be positive");
    samples_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  Plane(int width, int height, std::vector<T> samples)
      : width_(width), height_(height), samples_(std::move(samples)) {
    if (width <= 0 || height <= 0)
      throw Error(ErrorCode::invalid_argument, "plane dimensions must be positive");
    if (samples_.size() != static_cast<std::size_t>(width) * height)
      throw Error(ErrorCode::dimension_mismatch, "sample count does not match geometry");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  T& at(int x, int y) noexcept { return samples_[static_cast<std::size_t>(y) * width_ + x]; }
  const T& at(int x, int y) const noexcept {
    return samples_[static_cast<std::size_t>(y) * width_ + x];
  }
  /// Edge-replicating access.
  const T& clamped(int x, int y) const noexcept {
    return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
  }

  std::span<T> row(int y) noexcept {
    return {samples_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int y) const noexcept {
    return {samples_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  std::span<T> samples() noexcept { return samples_; }
  std::span<const T> samples() const noexcept { return samples_; }

  bool same_geometry(const Plane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }
  template <typename U>
  bool same_geometry(const Plane<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> samples_;
};

using PicturePlane = Plane<std::uint8_t>;
using ResidualPlane = Plane<std::int16_t>;

inline constexpr int kMinFrameDimension = 16;
inline constexpr int kResidualLimit = 255;

enum class ChromaFormat { luma_only, yuv420 };

int chroma_width(int luma_width) noexcept;
int chroma_height(int luma_height) noexcept;

/// One picture: a luma plane plus, in 4:2:0 mode, two half-resolution chroma planes.
struct Frame {
  std::vector<PicturePlane> planes;
  std::int64_t index = 0;

  Frame() = default;
  Frame(std::vector<PicturePlane> p, std::int64_t idx);

  static Frame blank(int width, int height, ChromaFormat format, std::uint8_t fill = 128,
                     std::int64_t idx = 0);

  const PicturePlane& luma() const { return planes.front(); }
  PicturePlane& luma() { return planes.front(); }
  int width() const { return luma().width(); }
  int height() const { return luma().height(); }
  ChromaFormat format() const {
    return planes.size() == 3 ? ChromaFormat::yuv420 : ChromaFormat::luma_only;
  }
  bool same_geometry(const Frame& other) const;

  friend bool operator==(const Frame& a, const Frame& b) { return a.planes == b.planes; }
};

/// Signed per-component residual with the geometry of a Frame.
struct Residual {
  std::vector<ResidualPlane> planes;

  static Residual zero_like(const Frame& frame);
  bool is_zero() const;
  friend bool operator==(const Residual&, const Residual&) = default;
};

/// Throws unless the luma plane meets the minimum size and chroma planes match 4:2:0.
void validate_frame(const Frame& frame);

/// Drops chroma planes; the frame index is kept.
Frame luma_only(const Frame& frame);

/// a - b per sample, each plane.
Residual subtract(const Frame& a, const Frame& b);
/// a - b, clipped to the residual range.
Residual subtract(const Residual& a, const Residual& b);
/// a + b, clipped to the residual range.
Residual add(const Residual& a, const Residual& b);
/// clip(picture + residual) into [0, 255].
Frame add_clipped(const Frame& picture, const Residual& residual);

inline std::int16_t clip_residual(int v) noexcept {
  return static_cast<std::int16_t>(std::clamp(v, -kResidualLimit, kResidualLimit));
}
inline std::uint8_t clip_pixel(int v) noexcept {
  return static_cast<std::uint8_t>(std::clamp(v, 0, 255));
}

}  // namespace rdac
