#include "rdac/y4m.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace rdac {

namespace {

constexpr std::string_view kMagic = "YUV4MPEG2";
constexpr std::string_view kFrameTag = "FRAME";

std::string read_line(std::istream& in, bool& terminated) {
  std::string line;
  terminated = static_cast<bool>(std::getline(in, line));
  terminated = terminated && !in.eof();
  return line;
}

void parse_ratio(const std::string& value, int& num, int& den) {
  auto colon = value.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::malformed_magic, "bad frame rate '" + value + "'");
  try {
    num = std::stoi(value.substr(0, colon));
    den = std::stoi(value.substr(colon + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::malformed_magic, "bad frame rate '" + value + "'");
  }
  if (num <= 0 || den <= 0) throw Error(ErrorCode::malformed_magic, "non-positive frame rate");
}

int parse_dimension(const std::string& value) {
  try {
    std::size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size() || v <= 0) throw std::invalid_argument("dim");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::malformed_magic, "bad dimension '" + value + "'");
  }
}

SequenceInfo parse_header(const std::string& line) {
  std::istringstream tokens(line);
  std::string tok;
  tokens >> tok;
  if (tok != kMagic) throw Error(ErrorCode::malformed_magic, "stream does not start with YUV4MPEG2");
  SequenceInfo info;
  while (tokens >> tok) {
    const char tag = tok[0];
    const std::string value = tok.substr(1);
    switch (tag) {
      case 'W': info.width = parse_dimension(value); break;
      case 'H': info.height = parse_dimension(value); break;
      case 'F': parse_ratio(value, info.fps_num, info.fps_den); break;
      case 'C':
        if (value != "420" && value != "420jpeg" && value != "420paldv" && value != "420mpeg2")
          throw Error(ErrorCode::unsupported_colorspace, "colorspace C" + value);
        break;
      default: break;  // interlacing, aspect, comments: ignored
    }
  }
  if (info.width == 0 || info.height == 0)
    throw Error(ErrorCode::malformed_magic, "header lacks W or H");
  return info;
}

}  // namespace

Sequence read_y4m(std::istream& in) {
  bool terminated = false;
  const std::string header = read_line(in, terminated);
  if (!terminated) {
    if (header.rfind(kMagic, 0) != 0)
      throw Error(ErrorCode::malformed_magic, "stream does not start with YUV4MPEG2");
    throw Error(ErrorCode::malformed_magic, "unterminated header");
  }
  Sequence seq;
  seq.info = parse_header(header);

  const int w = seq.info.width;
  const int h = seq.info.height;
  const int cw = chroma_width(w);
  const int ch = chroma_height(h);

  for (std::size_t index = 0;; ++index) {
    if (in.peek() == std::char_traits<char>::eof()) break;
    const std::string tag = read_line(in, terminated);
    if (tag.rfind(kFrameTag, 0) != 0)
      throw Error(ErrorCode::malformed_magic, "expected FRAME marker", index);
    if (!terminated) throw Error(ErrorCode::truncated_frame, "missing frame payload", index);

    std::vector<PicturePlane> planes;
    for (int c = 0; c < 3; ++c) {
      const int pw = c == 0 ? w : cw;
      const int ph = c == 0 ? h : ch;
      std::vector<std::uint8_t> samples(static_cast<std::size_t>(pw) * ph);
      in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(samples.size()));
      if (static_cast<std::size_t>(in.gcount()) != samples.size())
        throw Error(ErrorCode::truncated_frame, "payload ends early", index);
      planes.emplace_back(pw, ph, std::move(samples));
    }
    Frame frame;
    frame.planes = std::move(planes);
    frame.index = static_cast<std::int64_t>(index);
    seq.frames.push_back(std::move(frame));
  }
  seq.info.frame_count = seq.frames.size();
  return seq;
}

Sequence read_y4m_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  return read_y4m(in);
}

std::size_t write_y4m(const std::vector<Frame>& frames, const SequenceInfo& info,
                      std::ostream& out) {
  for (const auto& f : frames) {
    if (f.width() != info.width || f.height() != info.height)
      throw Error(ErrorCode::dimension_mismatch,
                  "frame " + std::to_string(f.index) + " does not match sequence geometry");
  }
  std::ostringstream header;
  header << kMagic << " W" << info.width << " H" << info.height << " F" << info.fps_num << ':'
         << info.fps_den << " Ip A1:1 C420jpeg\n";
  const std::string hs = header.str();
  out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  std::size_t written = hs.size();

  const PicturePlane neutral(chroma_width(info.width), chroma_height(info.height), 128);
  for (const auto& f : frames) {
    out.write("FRAME\n", 6);
    written += 6;
    for (int c = 0; c < 3; ++c) {
      const PicturePlane& p = f.planes.size() == 3 ? f.planes[c] : (c == 0 ? f.luma() : neutral);
      auto s = p.samples();
      out.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size()));
      written += s.size();
    }
  }
  if (!out) throw Error(ErrorCode::io_error, "write failed");
  return written;
}

void write_pgm(const PicturePlane& plane, std::ostream& out) {
  out << "P5\n" << plane.width() << ' ' << plane.height() << "\n255\n";
  auto s = plane.samples();
  out.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size()));
  if (!out) throw Error(ErrorCode::io_error, "pgm write failed");
}

}  // namespace rdac
