#include <algorithm>
#include <cmath>
#include <string>

#include "rdac/codec.hpp"
#include "rdac/ppm.hpp"

namespace rdac {

void validate(const CodecConfig& cfg) {
  if (cfg.gop_size < 1 || cfg.gop_size > 0xFFFF)
    throw Error(ErrorCode::invalid_argument, "gop_size must be in 1..65535");
  if (!std::isfinite(cfg.lambda) || cfg.lambda < 0.0)
    throw Error(ErrorCode::invalid_argument, "lambda must be finite and non-negative");
  validate(cfg.motion);
  if (!is_ladder_step(cfg.q_ref))
    throw Error(ErrorCode::invalid_argument, "q_ref must be on the quantizer ladder");
  if (cfg.q_ladder.empty())
    throw Error(ErrorCode::invalid_argument, "q_ladder is empty");
  for (int q : cfg.q_ladder)
    if (!is_ladder_step(q))
      throw Error(ErrorCode::invalid_argument, "q=" + std::to_string(q) + " is not on the ladder");
}

namespace {

Residual picture_to_signed(const Frame& frame) {
  Residual r;
  for (const auto& p : frame.planes) {
    ResidualPlane s(p.width(), p.height());
    auto dst = s.samples();
    auto src = p.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<std::int16_t>(int(src[i]) - 128);
    r.planes.push_back(std::move(s));
  }
  return r;
}

Frame signed_to_picture(const Residual& r, std::int64_t index) {
  Frame f;
  f.index = index;
  for (const auto& s : r.planes) {
    PicturePlane p(s.width(), s.height());
    auto dst = p.samples();
    auto src = s.samples();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = clip_pixel(int(src[i]) + 128);
    f.planes.push_back(std::move(p));
  }
  return f;
}

struct CodedResidual {
  std::vector<std::uint8_t> tokens;
  Residual reconstruction;
};

CodedResidual code_residual(const Residual& signal, int q) {
  CodedResidual out;
  const QuantConfig qc{q, 0.0};
  for (const auto& plane : signal.planes) {
    const auto blocks = analyze_plane(plane, qc);
    append_tokens(blocks, out.tokens);
    out.reconstruction.planes.push_back(
        reconstruct_plane(blocks, padded_geometry(plane.width(), plane.height()), qc));
  }
  return out;
}

Residual decode_residual(std::span<const std::uint8_t> payload, const Frame& geometry, int q,
                         std::size_t frame_index) {
  const auto tokens = ppm_decode(payload);
  std::size_t offset = 0;
  Residual r;
  for (const auto& p : geometry.planes)
    r.planes.push_back(decode_plane(tokens, offset, p.width(), p.height(), QuantConfig{q, 0.0}));
  if (offset != tokens.size())
    throw Error(ErrorCode::malformed_tokens, "trailing residual tokens", frame_index);
  return r;
}

double residual_mse(const Residual& a, const Residual& b) {
  std::int64_t acc = 0;
  std::size_t n = 0;
  for (std::size_t c = 0; c < a.planes.size(); ++c) {
    auto sa = a.planes[c].samples();
    auto sb = b.planes[c].samples();
    for (std::size_t i = 0; i < sa.size(); ++i) {
      const std::int64_t d = std::int64_t(sa[i]) - sb[i];
      acc += d * d;
    }
    n += sa.size();
  }
  return static_cast<double>(acc) / static_cast<double>(n);
}

Frame conform(const Frame& frame, ChromaFormat chroma) {
  if (chroma == ChromaFormat::luma_only) return luma_only(frame);
  if (frame.planes.size() != 3)
    throw Error(ErrorCode::invalid_argument, "4:2:0 coding needs three planes");
  return frame;
}

}  // namespace

std::pair<std::vector<std::uint8_t>, Frame> encode_intra_picture(const Frame& frame, int q_ref) {
  const CodedResidual coded = code_residual(picture_to_signed(frame), q_ref);
  return {ppm_encode(coded.tokens), signed_to_picture(coded.reconstruction, frame.index)};
}

Frame decode_intra_picture(std::span<const std::uint8_t> payload, int width, int height,
                           ChromaFormat chroma, int q_ref) {
  const Frame geometry = Frame::blank(width, height, chroma);
  return signed_to_picture(decode_residual(payload, geometry, q_ref, 0), 0);
}

// ---------------------------------------------------------------------------------------
// Encoder

Encoder::Encoder(const CodecConfig& cfg, int width, int height) : cfg_(cfg) {
  validate(cfg_);
  if (width < kMinFrameDimension || height < kMinFrameDimension || width > 0xFFFF ||
      height > 0xFFFF)
    throw Error(ErrorCode::image_too_small, "frame dimensions must be in 16..65535");
  const double sigma = cfg_.motion.resolved_sigma(width, height);
  header_.luma_only = cfg_.chroma == ChromaFormat::luma_only;
  header_.mode = cfg_.mode;
  header_.width = width;
  header_.height = height;
  header_.gop_size = cfg_.gop_size;
  header_.keypoints = cfg_.motion.keypoints;
  header_.q_ref = cfg_.q_ref;
  header_.sigma_x16 = std::clamp(static_cast<int>(std::lround(sigma * 16.0)), 1, 0xFFFF);
  // The encoder predicts with the same quantized bandwidth the decoder will read.
  cfg_.motion.sigma = header_.sigma();
}

EncodedFrame Encoder::encode(const Frame& input) {
  const Frame frame = conform(input, cfg_.chroma);
  if (frame.width() != header_.width || frame.height() != header_.height)
    throw Error(ErrorCode::dimension_mismatch, "frame does not match the sequence geometry",
                position_);
  EncodedFrame out = (position_ % static_cast<std::size_t>(cfg_.gop_size) == 0)
                         ? encode_intra(frame)
                         : encode_animated(frame);
  ++position_;
  ++header_.frame_count;
  return out;
}

EncodedFrame Encoder::encode_intra(const Frame& frame) {
  EncodedFrame out;
  auto [payload, decoded] = encode_intra_picture(frame, cfg_.q_ref);
  out.record.type = FrameType::intra;
  out.record.residual_mode = ResidualMode::none;
  out.record.q = static_cast<std::uint8_t>(cfg_.q_ref);
  out.record.sections.push_back(std::move(payload));
  out.reconstruction = decoded;

  reference_ = std::move(decoded);
  previous_residual_ = Residual::zero_like(reference_);
  positions_ = detect_keypoints(reference_.luma(), cfg_.motion).positions;
  previous_displacements_.reset();
  return out;
}

EncodedFrame Encoder::encode_animated(const Frame& frame) {
  EncodedFrame out;
  Prediction pred = predict_frame(reference_, frame, cfg_.motion, &positions_);
  out.record.type = FrameType::animated;
  out.record.sections.push_back(keypoint_payload(
      pred.keypoints, previous_displacements_ ? &*previous_displacements_ : nullptr));
  previous_displacements_ = pred.keypoints.displacements;

  Residual decoded_residual = Residual::zero_like(frame);
  if (cfg_.mode == CodecMode::animation_only) {
    out.record.residual_mode = ResidualMode::none;
    out.record.q = 0;
    out.record.sections.emplace_back();
  } else {
    const Residual residual = subtract(frame, pred.frame);
    std::vector<ResidualMode> signals;
    if (cfg_.mode != CodecMode::intra_residual) signals.push_back(ResidualMode::temporal);
    if (cfg_.mode != CodecMode::temporal) signals.push_back(ResidualMode::intra_res);

    std::vector<int> ladder = cfg_.q_ladder;
    std::sort(ladder.begin(), ladder.end());
    ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());
    const double pixels = double(frame.width()) * frame.height();

    bool have_best = false;
    double best_cost = 0.0;
    std::vector<std::uint8_t> best_payload;
    for (const ResidualMode signal_mode : signals) {
      const Residual signal = signal_mode == ResidualMode::temporal
                                  ? subtract(residual, previous_residual_)
                                  : residual;
      for (const int q : ladder) {
        CodedResidual coded = code_residual(signal, q);
        Residual reconstructed = signal_mode == ResidualMode::temporal
                                     ? add(coded.reconstruction, previous_residual_)
                                     : std::move(coded.reconstruction);
        auto payload = ppm_encode(coded.tokens);
        CandidateCost c;
        c.signal = signal_mode;
        c.q = q;
        c.mse = residual_mse(residual, reconstructed);
        c.bits = 8ull * (payload.size() - 4);
        c.bpp = double(c.bits) / pixels;
        c.cost = cfg_.lambda * c.mse + c.bpp;
        out.candidates.push_back(c);
        // Strict improvement only: ties keep TEMPORAL, then the smaller q.
        if (!have_best || c.cost < best_cost) {
          have_best = true;
          best_cost = c.cost;
          best_payload = std::move(payload);
          decoded_residual = std::move(reconstructed);
          out.record.residual_mode = signal_mode;
          out.record.q = static_cast<std::uint8_t>(q);
        }
      }
    }
    out.record.sections.push_back(std::move(best_payload));
  }

  out.reconstruction = add_clipped(pred.frame, decoded_residual);
  out.reconstruction.index = frame.index;
  out.prediction = std::move(pred.frame);
  out.keypoints = std::move(pred.keypoints);
  previous_residual_ = std::move(decoded_residual);
  return out;
}

// ---------------------------------------------------------------------------------------
// Decoder

Decoder::Decoder(const ContainerHeader& header) : header_(header) {}

Frame Decoder::decode(const FrameRecord& record) {
  const bool gop_start = position_ % static_cast<std::size_t>(header_.gop_size) == 0;
  const FrameType expected = gop_start ? FrameType::intra : FrameType::animated;
  if (record.type != expected)
    throw Error(ErrorCode::payload_mismatch,
                gop_start ? "GOP does not start with an INTRA frame" : "unexpected INTRA frame",
                position_);
  Frame out = record.type == FrameType::intra ? decode_intra(record) : decode_animated(record);
  out.index = static_cast<std::int64_t>(position_);
  ++position_;
  return out;
}

Frame Decoder::decode_intra(const FrameRecord& record) {
  if (record.q != header_.q_ref || record.sections.size() != 1)
    throw Error(ErrorCode::payload_mismatch, "INTRA record disagrees with the header", position_);
  try {
    reference_ = decode_intra_picture(record.sections[0], header_.width, header_.height,
                                      header_.chroma(), header_.q_ref);
  } catch (const Error& e) {
    throw e.at_frame(position_);
  }
  previous_residual_ = Residual::zero_like(reference_);
  positions_.clear();
  previous_displacements_.reset();
  return reference_;
}

Frame Decoder::decode_animated(const FrameRecord& record) {
  if (record.sections.size() != 2)
    throw Error(ErrorCode::payload_mismatch, "ANIMATED record needs two sections", position_);
  try {
    const std::size_t k = static_cast<std::size_t>(header_.keypoints);
    KeypointSet kp = parse_keypoint_payload(
        record.sections[0], k, previous_displacements_ ? &*previous_displacements_ : nullptr,
        previous_displacements_ ? &positions_ : nullptr);
    if (!previous_displacements_) positions_ = kp.positions;
    previous_displacements_ = kp.displacements;

    const Frame prediction = synthesize_prediction(reference_, kp, header_.sigma());
    Residual decoded = Residual::zero_like(reference_);
    switch (record.residual_mode) {
      case ResidualMode::none:
        if (header_.mode != CodecMode::animation_only || !record.sections[1].empty())
          throw Error(ErrorCode::payload_mismatch, "residual layer missing");
        break;
      case ResidualMode::temporal:
      case ResidualMode::intra_res: {
        if (header_.mode == CodecMode::animation_only || !is_ladder_step(record.q))
          throw Error(ErrorCode::payload_mismatch, "unexpected residual layer");
        const Residual coded = decode_residual(record.sections[1], reference_, record.q, position_);
        decoded = record.residual_mode == ResidualMode::temporal ? add(coded, previous_residual_)
                                                                 : coded;
        break;
      }
    }
    Frame out = add_clipped(prediction, decoded);
    previous_residual_ = std::move(decoded);
    return out;
  } catch (const Error& e) {
    throw e.at_frame(position_);
  }
}

// ---------------------------------------------------------------------------------------
// Sequences

std::vector<Frame> EncodeResult::reconstructions() const {
  std::vector<Frame> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.reconstruction);
  return out;
}

EncodeResult encode_sequence(const std::vector<Frame>& frames, const CodecConfig& cfg) {
  if (frames.empty()) throw Error(ErrorCode::empty_input, "no frames to encode");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    validate_frame(frames[i]);
    if (!frames[i].same_geometry(frames.front()))
      throw Error(ErrorCode::dimension_mismatch, "sequence is not homogeneous", i);
    if (i > 0 && frames[i].index <= frames[i - 1].index)
      throw Error(ErrorCode::invalid_argument, "frame indices must increase", i);
  }
  Encoder enc(cfg, frames.front().width(), frames.front().height());
  EncodeResult result;
  std::vector<FrameRecord> records;
  for (const auto& f : frames) {
    result.frames.push_back(enc.encode(f));
    records.push_back(result.frames.back().record);
  }
  result.bytes = write_container(enc.header(), records);
  return result;
}

DecodeResult decode_sequence(std::span<const std::uint8_t> bitstream) {
  const Container c = read_container(bitstream);
  DecodeResult out;
  out.header = c.header;
  Decoder dec(c.header);
  for (const auto& r : c.records) out.frames.push_back(dec.decode(r));
  return out;
}

}  // namespace rdac
