#include "rdac/plane.hpp"

#include <string>

namespace rdac {

int chroma_width(int luma_width) noexcept { return (luma_width + 1) / 2; }
int chroma_height(int luma_height) noexcept { return (luma_height + 1) / 2; }

Frame::Frame(std::vector<PicturePlane> p, std::int64_t idx) : planes(std::move(p)), index(idx) {
  validate_frame(*this);
}

Frame Frame::blank(int width, int height, ChromaFormat format, std::uint8_t fill,
                   std::int64_t idx) {
  std::vector<PicturePlane> planes;
  planes.emplace_back(width, height, fill);
  if (format == ChromaFormat::yuv420) {
    planes.emplace_back(chroma_width(width), chroma_height(height), fill);
    planes.emplace_back(chroma_width(width), chroma_height(height), fill);
  }
  return Frame(std::move(planes), idx);
}

bool Frame::same_geometry(const Frame& other) const {
  if (planes.size() != other.planes.size()) return false;
  for (std::size_t c = 0; c < planes.size(); ++c)
    if (!planes[c].same_geometry(other.planes[c])) return false;
  return true;
}

void validate_frame(const Frame& frame) {
  if (frame.planes.size() != 1 && frame.planes.size() != 3)
    throw Error(ErrorCode::invalid_argument, "frame must have 1 or 3 planes");
  const auto& y = frame.planes.front();
  if (y.width() < kMinFrameDimension || y.height() < kMinFrameDimension)
    throw Error(ErrorCode::image_too_small,
                "frame is " + std::to_string(y.width()) + "x" + std::to_string(y.height()) +
                    ", minimum is 16x16");
  for (std::size_t c = 1; c < frame.planes.size(); ++c) {
    const auto& p = frame.planes[c];
    if (p.width() != chroma_width(y.width()) || p.height() != chroma_height(y.height()))
      throw Error(ErrorCode::dimension_mismatch, "chroma plane is not 4:2:0 sized");
  }
  if (frame.index < 0) throw Error(ErrorCode::invalid_argument, "negative frame index");
}

Frame luma_only(const Frame& frame) {
  Frame out;
  out.planes.push_back(frame.luma());
  out.index = frame.index;
  return out;
}

Residual Residual::zero_like(const Frame& frame) {
  Residual r;
  for (const auto& p : frame.planes) r.planes.emplace_back(p.width(), p.height(), 0);
  return r;
}

bool Residual::is_zero() const {
  for (const auto& p : planes)
    for (auto v : p.samples())
      if (v != 0) return false;
  return true;
}

Residual subtract(const Frame& a, const Frame& b) {
  if (!a.same_geometry(b)) throw Error(ErrorCode::dimension_mismatch, "subtract: frames differ");
  Residual r;
  for (std::size_t c = 0; c < a.planes.size(); ++c) {
    const auto& pa = a.planes[c];
    const auto& pb = b.planes[c];
    ResidualPlane out(pa.width(), pa.height());
    auto dst = out.samples();
    auto sa = pa.samples();
    auto sb = pb.samples();
    for (std::size_t i = 0; i < dst.size(); ++i)
      dst[i] = static_cast<std::int16_t>(int(sa[i]) - int(sb[i]));
    r.planes.push_back(std::move(out));
  }
  return r;
}

namespace {

template <typename Op>
Residual combine(const Residual& a, const Residual& b, Op op) {
  if (a.planes.size() != b.planes.size())
    throw Error(ErrorCode::dimension_mismatch, "residual plane count differs");
  Residual r;
  for (std::size_t c = 0; c < a.planes.size(); ++c) {
    const auto& pa = a.planes[c];
    const auto& pb = b.planes[c];
    if (!pa.same_geometry(pb)) throw Error(ErrorCode::dimension_mismatch, "residual geometry");
    ResidualPlane out(pa.width(), pa.height());
    auto dst = out.samples();
    auto sa = pa.samples();
    auto sb = pb.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = clip_residual(op(int(sa[i]), int(sb[i])));
    r.planes.push_back(std::move(out));
  }
  return r;
}

}  // namespace

Residual subtract(const Residual& a, const Residual& b) {
  return combine(a, b, [](int x, int y) { return x - y; });
}

Residual add(const Residual& a, const Residual& b) {
  return combine(a, b, [](int x, int y) { return x + y; });
}

Frame add_clipped(const Frame& picture, const Residual& residual) {
  if (picture.planes.size() != residual.planes.size())
    throw Error(ErrorCode::dimension_mismatch, "add_clipped: plane count differs");
  Frame out = picture;
  for (std::size_t c = 0; c < out.planes.size(); ++c) {
    auto& p = out.planes[c];
    const auto& r = residual.planes[c];
    if (!p.same_geometry(r)) throw Error(ErrorCode::dimension_mismatch, "add_clipped geometry");
    auto dst = p.samples();
    auto src = r.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = clip_pixel(int(dst[i]) + int(src[i]));
  }
  return out;
}

}  // namespace rdac
