#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rdac/motion.hpp"
#include "rdac/plane.hpp"
#include "rdac/transform.hpp"

namespace rdac {

/// Which residual signal an encoder may code for animated frames.
enum class CodecMode : std::uint8_t {
  temporal = 0,        // always D_t = R_t - previous decoded residual
  intra_residual = 1,  // always R_t
  animation_only = 2,  // no residual layer
  adaptive = 3,        // per-frame Lagrangian choice between the two
};

enum class FrameType : std::uint8_t { intra = 0, animated = 1 };
enum class ResidualMode : std::uint8_t { temporal = 0, intra_res = 1, none = 2 };

std::string_view to_string(CodecMode m);
std::optional<CodecMode> parse_codec_mode(std::string_view name);  // accepts '-' or '_'
std::string_view to_string(ResidualMode m);

struct CodecConfig {
  int gop_size = 32;
  /// Weight of MSE against bits per pixel in the per-frame cost.
  double lambda = 0.02;
  CodecMode mode = CodecMode::temporal;
  MotionConfig motion;
  int q_ref = 8;
  std::vector<int> q_ladder{kQuantLadder.begin(), kQuantLadder.end()};
  ChromaFormat chroma = ChromaFormat::luma_only;
};

void validate(const CodecConfig& cfg);

inline constexpr std::array<std::uint8_t, 4> kContainerMagic = {'R', 'D', 'A', 'C'};
inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kContainerHeaderBytes = 20;

struct ContainerHeader {
  std::uint8_t version = kContainerVersion;
  bool luma_only = true;
  CodecMode mode = CodecMode::temporal;
  int width = 0;
  int height = 0;
  std::uint32_t frame_count = 0;
  int gop_size = 0;
  int keypoints = 0;
  int q_ref = 0;
  /// Dense-motion bandwidth in 1/16 pixel.
  int sigma_x16 = 0;

  double sigma() const { return sigma_x16 / 16.0; }
  ChromaFormat chroma() const {
    return luma_only ? ChromaFormat::luma_only : ChromaFormat::yuv420;
  }
  friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;
};

struct FrameRecord {
  FrameType type = FrameType::intra;
  ResidualMode residual_mode = ResidualMode::none;
  std::uint8_t q = 0;
  /// INTRA: {picture tokens}. ANIMATED: {keypoints, residual tokens (empty for NONE)}.
  std::vector<std::vector<std::uint8_t>> sections;

  friend bool operator==(const FrameRecord&, const FrameRecord&) = default;
};

std::vector<std::uint8_t> write_container(const ContainerHeader& header,
                                          std::span<const FrameRecord> records);

struct Container {
  ContainerHeader header;
  std::vector<FrameRecord> records;
};

/// Parses and CRC-checks every record. Errors name the failing frame index.
Container read_container(std::span<const std::uint8_t> bytes);
ContainerHeader read_container_header(std::span<const std::uint8_t> bytes);

/// Keypoint section. Without `previous` (first animated frame of a GOP) the positions
/// lead the payload as 16-bit big-endian pairs; displacements are always delta-coded
/// against `previous` (zero when absent), zigzag-folded to bytes with a 0xFF escape
/// followed by 16 bits, and the result is PPM-coded.
std::vector<std::uint8_t> keypoint_payload(const KeypointSet& keypoints,
                                           const std::vector<Displacement>* previous);
/// Inverse; with `previous` set, `positions` supplies the GOP's keypoint positions.
KeypointSet parse_keypoint_payload(std::span<const std::uint8_t> payload, std::size_t k,
                                   const std::vector<Displacement>* previous,
                                   const std::vector<Point>* positions);

struct CandidateCost {
  ResidualMode signal = ResidualMode::temporal;
  int q = 0;
  double mse = 0.0;
  std::uint64_t bits = 0;
  double bpp = 0.0;
  double cost = 0.0;
};

struct EncodedFrame {
  FrameRecord record;
  Frame reconstruction;
  Frame prediction;  // animated frames only
  KeypointSet keypoints;
  /// Every (signal, q) pair evaluated for this frame.
  std::vector<CandidateCost> candidates;
};

/// Closed-loop encoder. INTRA frames start every GOP; all other frames are animated
/// from the GOP's decoded reference and carry a residual layer per the mode.
class Encoder {
 public:
  Encoder(const CodecConfig& cfg, int width, int height);

  const ContainerHeader& header() const noexcept { return header_; }
  EncodedFrame encode(const Frame& frame);

 private:
  EncodedFrame encode_intra(const Frame& frame);
  EncodedFrame encode_animated(const Frame& frame);

  CodecConfig cfg_;
  ContainerHeader header_;
  std::size_t position_ = 0;
  Frame reference_;
  Residual previous_residual_;
  std::vector<Point> positions_;
  std::optional<std::vector<Displacement>> previous_displacements_;
};

class Decoder {
 public:
  explicit Decoder(const ContainerHeader& header);

  Frame decode(const FrameRecord& record);

 private:
  Frame decode_intra(const FrameRecord& record);
  Frame decode_animated(const FrameRecord& record);

  ContainerHeader header_;
  std::size_t position_ = 0;
  Frame reference_;
  Residual previous_residual_;
  std::vector<Point> positions_;
  std::optional<std::vector<Displacement>> previous_displacements_;
};

struct EncodeResult {
  std::vector<std::uint8_t> bytes;
  std::vector<EncodedFrame> frames;

  std::vector<Frame> reconstructions() const;
};

/// Frames are reduced to luma when the config says luma-only.
EncodeResult encode_sequence(const std::vector<Frame>& frames, const CodecConfig& cfg);

struct DecodeResult {
  ContainerHeader header;
  std::vector<Frame> frames;
};

DecodeResult decode_sequence(std::span<const std::uint8_t> bitstream);

/// Intra coding of one picture at step q_ref (signed shift by -128). Returns the tokens
/// payload (PPM-coded) and the decoder-identical reconstruction.
std::pair<std::vector<std::uint8_t>, Frame> encode_intra_picture(const Frame& frame, int q_ref);
Frame decode_intra_picture(std::span<const std::uint8_t> payload, int width, int height,
                           ChromaFormat chroma, int q_ref);

}  // namespace rdac
