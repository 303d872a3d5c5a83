#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "rdac/eval.hpp"

namespace rdac {

namespace {

void put_comments(std::ostream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
}

std::string num(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(10) << v;
  return s.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double v = 0.0;
  if (!(in >> v)) throw Error(ErrorCode::io_error, "not a number: '" + s + "'");
  return v;
}

std::string_view frame_type_name(FrameType t) { return t == FrameType::intra ? "INTRA" : "ANIMATED"; }

}  // namespace

void write_rd_csv(std::ostream& out, const std::vector<RdPoint>& points,
                  const std::vector<std::string>& comments) {
  put_comments(out, comments);
  out << "mode,gop,lambda,bpp,metric,quality,on_hull\n";
  // Hulls are per mode and per metric.
  std::map<CodecMode, std::vector<std::size_t>> by_mode;
  for (std::size_t i = 0; i < points.size(); ++i) by_mode[points[i].mode].push_back(i);
  std::vector<bool> on_hull(points.size(), false);
  for (const auto& [mode, idx] : by_mode) {
    std::vector<RdPoint> subset;
    for (auto i : idx) subset.push_back(points[i]);
    const auto member = hull_membership(subset);
    for (std::size_t j = 0; j < idx.size(); ++j) on_hull[idx[j]] = member[j];
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    out << to_string(p.mode) << ',' << p.gop << ',' << num(p.lambda) << ',' << num(p.bpp) << ','
        << to_string(p.metric) << ',' << num(p.quality) << ',' << (on_hull[i] ? 1 : 0) << '\n';
  }
}

std::vector<RdPoint> read_rd_csv(std::istream& in) {
  std::vector<RdPoint> points;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "mode,gop,lambda,bpp,metric,quality,on_hull")
        throw Error(ErrorCode::io_error, "unexpected rd.csv header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 7) throw Error(ErrorCode::io_error, "rd.csv row needs 7 fields: '" + line + "'");
    RdPoint p;
    const auto mode = parse_codec_mode(f[0]);
    if (!mode) throw Error(ErrorCode::io_error, "unknown mode '" + f[0] + "'");
    p.mode = *mode;
    p.gop = static_cast<int>(parse_double(f[1]));
    p.lambda = parse_double(f[2]);
    p.bpp = parse_double(f[3]);
    if (f[4] == "psnr") p.metric = Metric::psnr;
    else if (f[4] == "ssim") p.metric = Metric::ssim;
    else if (f[4] == "msssim") p.metric = Metric::ms_ssim;
    else throw Error(ErrorCode::io_error, "unknown metric '" + f[4] + "'");
    p.quality = parse_double(f[5]);
    switch (p.metric) {
      case Metric::psnr: p.psnr = p.quality; break;
      case Metric::ssim: p.ssim = p.quality; break;
      case Metric::ms_ssim: p.ms_ssim = p.quality; break;
    }
    points.push_back(p);
  }
  if (!header_seen) throw Error(ErrorCode::io_error, "rd.csv has no header row");
  return points;
}

void write_drift_csv(std::ostream& out, const DriftSeries& s,
                     const std::vector<std::string>& comments) {
  put_comments(out, comments);
  for (std::size_t g = 0; g < s.gop_slopes.size(); ++g)
    out << "# gop_slope," << g << ',' << num(s.gop_slopes[g]) << '\n';
  out << "frame,metric,value\n";
  for (std::size_t i = 0; i < s.values.size(); ++i)
    out << i << ',' << to_string(s.metric) << ',' << num(s.values[i]) << '\n';
}

void write_quality_csv(std::ostream& out, const QualityReport& r,
                       const std::vector<std::string>& comments) {
  put_comments(out, comments);
  out << "frame,psnr,ssim,ms_ssim\n";
  for (std::size_t i = 0; i < r.frames.size(); ++i) {
    const auto& f = r.frames[i];
    out << i << ',' << num(f.psnr) << ',' << num(f.ssim) << ',' << num(f.ms_ssim) << '\n';
  }
  out << "# mean_psnr," << num(r.mean_psnr) << '\n'
      << "# mean_ssim," << num(r.mean_ssim) << '\n'
      << "# mean_ms_ssim," << num(r.mean_ms_ssim) << '\n';
  std::size_t lossless = 0;
  for (const auto& f : r.frames) lossless += f.lossless ? 1 : 0;
  out << "# lossless_frames," << lossless << '\n';
}

void write_bench_csv(std::ostream& out, const BenchReport& r,
                     const std::vector<std::string>& comments) {
  put_comments(out, comments);
  out << "frame_type,direction,samples,mean_seconds,median_seconds\n";
  for (const auto& s : r.stats)
    out << frame_type_name(s.type) << ',' << (s.encode ? "encode" : "decode") << ',' << s.samples
        << ',' << num(s.mean_seconds) << ',' << num(s.median_seconds) << '\n';
}

std::string bd_line(double percent) { return "bd_br_percent," + num(percent); }

void write_svg_chart(std::ostream& out, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<SvgSeries>& series) {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 40, B = 50;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
      << "</text>\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n"
      << "<text x=\"16\" y=\"" << H / 2 << "\" transform=\"rotate(-90 16 " << H / 2
      << ")\" text-anchor=\"middle\">" << y_label << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    out << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" font-size=\"10\" text-anchor=\"middle\">"
        << num(xv) << "</text>\n"
        << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 3 << "\" font-size=\"10\" text-anchor=\"end\">"
        << num(yv) << "</text>\n";
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % std::size(colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[i].points) out << px(x) << ',' << py(y) << ' ';
    out << "\"/>\n<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (i + 1)
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << series[i].label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace rdac
