#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rdac/plane.hpp"

namespace rdac {

enum class SynthKind { translating_texture, deforming_blob, static_noise, zoom_pan };

std::string_view to_string(SynthKind kind);
std::optional<SynthKind> parse_synth_kind(std::string_view name);

/// Deterministic luma-only test content.
///
/// - translating_texture: a periodic random texture moved right by one pixel per frame,
///   wrapping at the border.
/// - deforming_blob: a bright blob over a textured background, resampled through a smooth
///   non-rigid warp whose amplitude grows linearly with the frame index.
/// - static_noise: one uniform noise picture repeated.
/// - zoom_pan: a texture under slow magnification and diagonal pan.
std::vector<Frame> synth_sequence(SynthKind kind, int width, int height, int n_frames,
                                  std::uint64_t seed);

}  // namespace rdac
