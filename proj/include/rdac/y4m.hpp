#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rdac/plane.hpp"

namespace rdac {

struct SequenceInfo {
  int width = 0;
  int height = 0;
  int fps_num = 30;
  int fps_den = 1;
  std::size_t frame_count = 0;
};

struct Sequence {
  SequenceInfo info;
  std::vector<Frame> frames;
};

/// Parses a YUV4MPEG2 stream (4:2:0, 8-bit). Frames come back with three planes.
Sequence read_y4m(std::istream& in);
Sequence read_y4m_file(const std::string& path);

/// Writes `frames` as 4:2:0 Y4M. Luma-only frames are written with neutral (128) chroma.
/// Returns the number of bytes written.
std::size_t write_y4m(const std::vector<Frame>& frames, const SequenceInfo& info,
                      std::ostream& out);

/// Binary PGM (P5) dump of a single plane.
void write_pgm(const PicturePlane& plane, std::ostream& out);

}  // namespace rdac
