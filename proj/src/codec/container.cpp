#include <zlib.h>

#include <algorithm>
#include <string>

#include "rdac/codec.hpp"
#include "rdac/ppm.hpp"

namespace rdac {

std::string_view to_string(CodecMode m) {
  switch (m) {
    case CodecMode::temporal: return "temporal";
    case CodecMode::intra_residual: return "intra-residual";
    case CodecMode::animation_only: return "animation-only";
    case CodecMode::adaptive: return "adaptive";
  }
  return "unknown";
}

std::optional<CodecMode> parse_codec_mode(std::string_view name) {
  std::string s(name);
  std::replace(s.begin(), s.end(), '_', '-');
  for (auto m : {CodecMode::temporal, CodecMode::intra_residual, CodecMode::animation_only,
                 CodecMode::adaptive})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

std::string_view to_string(ResidualMode m) {
  switch (m) {
    case ResidualMode::temporal: return "TEMPORAL";
    case ResidualMode::intra_res: return "INTRA_RES";
    case ResidualMode::none: return "NONE";
  }
  return "unknown";
}

namespace {

class Writer {
 public:
  explicit Writer(std::vector<std::uint8_t>& out) : out_(out) {}
  void u8(unsigned v) { out_.push_back(static_cast<std::uint8_t>(v)); }
  void u16(unsigned v) {
    u8(v >> 8);
    u8(v);
  }
  void u32(std::uint32_t v) {
    u16(v >> 16);
    u16(v & 0xFFFF);
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

 private:
  std::vector<std::uint8_t>& out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> in, ErrorCode on_short) : in_(in), on_short_(on_short) {}

  void frame(std::optional<std::size_t> index) { frame_ = index; }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return in_.size() - pos_; }

  std::uint8_t u8() {
    need(1);
    return in_[pos_++];
  }
  std::uint16_t u16() {
    const std::uint16_t hi = u8();
    return static_cast<std::uint16_t>(hi << 8 | u8());
  }
  std::uint32_t u32() {
    const std::uint32_t hi = u16();
    return hi << 16 | u16();
  }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  void need(std::size_t n) {
    if (remaining() < n)
      throw Error(on_short_,
                  "needed " + std::to_string(n) + " bytes, " + std::to_string(remaining()) +
                      " left",
                  frame_);
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
  ErrorCode on_short_;
  std::optional<std::size_t> frame_;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(::crc32(0L, Z_NULL, 0), bytes.data(), static_cast<uInt>(bytes.size())));
}

std::size_t section_count(FrameType t) { return t == FrameType::intra ? 1 : 2; }

}  // namespace

std::vector<std::uint8_t> write_container(const ContainerHeader& h,
                                          std::span<const FrameRecord> records) {
  std::vector<std::uint8_t> out;
  Writer w(out);
  w.bytes(kContainerMagic);
  w.u8(h.version);
  w.u8((h.luma_only ? 1u : 0u) | (static_cast<unsigned>(h.mode) << 1));
  w.u16(static_cast<unsigned>(h.width));
  w.u16(static_cast<unsigned>(h.height));
  w.u32(h.frame_count);
  w.u16(static_cast<unsigned>(h.gop_size));
  w.u8(static_cast<unsigned>(h.keypoints));
  w.u8(static_cast<unsigned>(h.q_ref));
  w.u16(static_cast<unsigned>(h.sigma_x16));

  for (const auto& r : records) {
    if (r.sections.size() != section_count(r.type))
      throw Error(ErrorCode::invalid_argument, "frame record has the wrong number of sections");
    const std::size_t start = out.size();
    w.u8(static_cast<unsigned>(r.type));
    w.u8(static_cast<unsigned>(r.residual_mode));
    w.u8(r.q);
    for (const auto& s : r.sections) {
      w.u32(static_cast<std::uint32_t>(s.size()));
      w.bytes(s);
    }
    w.u32(crc32_of(std::span(out).subspan(start)));
  }
  return out;
}

ContainerHeader read_container_header(std::span<const std::uint8_t> bytes) {
  Reader r(bytes, ErrorCode::truncated_bitstream);
  if (bytes.size() < kContainerMagic.size() ||
      !std::equal(kContainerMagic.begin(), kContainerMagic.end(), bytes.begin()))
    throw Error(ErrorCode::bad_magic, "container does not start with RDAC");
  r.bytes(kContainerMagic.size());
  ContainerHeader h;
  h.version = r.u8();
  if (h.version != kContainerVersion)
    throw Error(ErrorCode::version_mismatch, "version " + std::to_string(h.version) +
                                                 ", expected " +
                                                 std::to_string(kContainerVersion));
  const std::uint8_t flags = r.u8();
  h.luma_only = (flags & 1u) != 0;
  h.mode = static_cast<CodecMode>((flags >> 1) & 3u);
  h.width = r.u16();
  h.height = r.u16();
  h.frame_count = r.u32();
  h.gop_size = r.u16();
  h.keypoints = r.u8();
  h.q_ref = r.u8();
  h.sigma_x16 = r.u16();
  if (h.width < kMinFrameDimension || h.height < kMinFrameDimension || h.gop_size < 1 ||
      h.keypoints < 1 || !is_ladder_step(h.q_ref) || h.sigma_x16 < 1)
    throw Error(ErrorCode::bad_magic, "container header holds invalid parameters");
  return h;
}

Container read_container(std::span<const std::uint8_t> bytes) {
  Container c;
  c.header = read_container_header(bytes);
  Reader r(bytes, ErrorCode::truncated_bitstream);
  r.bytes(kContainerHeaderBytes);
  for (std::size_t i = 0; i < c.header.frame_count; ++i) {
    r.frame(i);
    const std::size_t start = r.pos();
    FrameRecord rec;
    const std::uint8_t type = r.u8();
    const std::uint8_t mode = r.u8();
    rec.q = r.u8();
    if (type > 1 || mode > 2)
      throw Error(ErrorCode::checksum_failure, "corrupt frame record header", i);
    rec.type = static_cast<FrameType>(type);
    rec.residual_mode = static_cast<ResidualMode>(mode);
    for (std::size_t s = 0; s < section_count(rec.type); ++s) {
      const std::uint32_t len = r.u32();
      auto payload = r.bytes(len);
      rec.sections.emplace_back(payload.begin(), payload.end());
    }
    const std::uint32_t expected = crc32_of(bytes.subspan(start, r.pos() - start));
    const std::uint32_t stored = r.u32();
    if (stored != expected) throw Error(ErrorCode::checksum_failure, "CRC-32 mismatch", i);
    c.records.push_back(std::move(rec));
  }
  if (r.remaining() != 0)
    throw Error(ErrorCode::truncated_bitstream,
                std::to_string(r.remaining()) + " unexpected bytes after the last frame");
  return c;
}

namespace {

constexpr std::uint8_t kFoldEscape = 0xFF;

std::uint32_t fold(int v) {
  return v >= 0 ? static_cast<std::uint32_t>(v) << 1 : (static_cast<std::uint32_t>(-v) << 1) - 1;
}
int unfold(std::uint32_t u) {
  return (u & 1u) ? -static_cast<int>((u + 1) >> 1) : static_cast<int>(u >> 1);
}

}  // namespace

std::vector<std::uint8_t> keypoint_payload(const KeypointSet& kp,
                                           const std::vector<Displacement>* previous) {
  if (kp.displacements.size() != kp.size() || (previous && previous->size() != kp.size()))
    throw Error(ErrorCode::payload_mismatch, "keypoint count differs from previous frame");
  std::vector<std::uint8_t> raw;
  Writer w(raw);
  if (!previous)
    for (const auto& p : kp.positions) {
      w.u16(static_cast<unsigned>(p.x));
      w.u16(static_cast<unsigned>(p.y));
    }
  auto put = [&](int delta) {
    const std::uint32_t f = fold(delta);
    if (f > 0xFFFF) throw Error(ErrorCode::level_overflow, "displacement delta too large");
    if (f < kFoldEscape) {
      w.u8(f);
    } else {
      w.u8(kFoldEscape);
      w.u16(f);
    }
  };
  for (std::size_t i = 0; i < kp.size(); ++i) {
    const Displacement base = previous ? (*previous)[i] : Displacement{};
    put(kp.displacements[i].dx - base.dx);
    put(kp.displacements[i].dy - base.dy);
  }
  return ppm_encode(raw);
}

KeypointSet parse_keypoint_payload(std::span<const std::uint8_t> payload, std::size_t k,
                                   const std::vector<Displacement>* previous,
                                   const std::vector<Point>* positions) {
  const auto raw = ppm_decode(payload);
  Reader r(raw, ErrorCode::payload_mismatch);
  KeypointSet kp;
  if (previous) {
    if (!positions || positions->size() != k || previous->size() != k)
      throw Error(ErrorCode::payload_mismatch, "keypoint positions unavailable");
    kp.positions = *positions;
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      const int x = r.u16();
      const int y = r.u16();
      kp.positions.push_back({x, y});
    }
  }
  auto get = [&]() {
    const std::uint8_t b = r.u8();
    return unfold(b == kFoldEscape ? r.u16() : b);
  };
  for (std::size_t i = 0; i < k; ++i) {
    const Displacement base = previous ? (*previous)[i] : Displacement{};
    const int dx = base.dx + get();
    const int dy = base.dy + get();
    kp.displacements.push_back({dx, dy});
  }
  if (r.remaining() != 0)
    throw Error(ErrorCode::payload_mismatch,
                "keypoint payload holds more than " + std::to_string(k) + " keypoints");
  return kp;
}

}  // namespace rdac
