#include "rdac/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "rdac/codec.hpp"
#include "rdac/eval.hpp"
#include "rdac/synth.hpp"
#include "rdac/y4m.hpp"

namespace rdac::cli {

namespace fs = std::filesystem;

namespace {

/// Failure tied to a file path; message already carries the diagnostic.
struct PathError {
  int exit_code;
  std::string message;
};

void require_input(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec))
    throw PathError{kIo, path + ": input file does not exist or is not a regular file"};
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw PathError{kIo, path + ": cannot open input for reading"};
}

void require_output(const std::string& path) {
  if (path.empty()) throw PathError{kUsage, "output path is empty"};
  const fs::path parent = fs::absolute(fs::path(path)).parent_path();
  std::error_code ec;
  if (!fs::is_directory(parent, ec))
    throw PathError{kIo, path + ": output directory " + parent.string() + " does not exist"};
  if (fs::is_directory(path, ec)) throw PathError{kIo, path + ": output path is a directory"};
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PathError{kIo, path + ": cannot open input for reading"};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Writes through a sibling temp file and renames it over `path`.
template <typename Fn>
void write_atomically(const std::string& path, Fn&& fill) {
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PathError{kIo, path + ": cannot create output file"};
    fill(out);
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw PathError{kIo, path + ": write failed"};
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw PathError{kIo, path + ": cannot move temp file into place"};
  }
}

std::string join(const auto& values) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  bool first = true;
  for (const auto& v : values) {
    if (!first) s << ',';
    s << v;
    first = false;
  }
  return s.str();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << v;
  return s.str();
}

Metric parse_metric(const std::string& name) {
  if (name == "psnr") return Metric::psnr;
  if (name == "ssim") return Metric::ssim;
  return Metric::ms_ssim;
}

const std::map<std::string, std::string> kMetricChoices{
    {"psnr", "psnr"}, {"ssim", "ssim"}, {"msssim", "msssim"}};

// Codec flags shared by encode, rd-sweep, drift and bench.
struct CodecFlags {
  int gop = 32;
  double lambda = 0.02;
  std::string mode = "temporal";
  int keypoints = 10;
  double sigma = 0.0;
  int q_ref = 8;
  bool yuv420 = false;

  void attach(CLI::App& cmd, bool with_gop_lambda) {
    if (with_gop_lambda) {
      cmd.add_option("--gop", gop, "GOP size (INTRA period)")->check(CLI::Range(1, 65535));
      cmd.add_option("--lambda", lambda, "Lagrangian weight of MSE against bpp")
          ->check(CLI::NonNegativeNumber);
    }
    cmd.add_option("--mode", mode, "temporal | intra-residual | animation-only | adaptive")
        ->check(CLI::IsMember({"temporal", "intra-residual", "animation-only", "adaptive"}));
    cmd.add_option("--keypoints", keypoints, "keypoints per frame")->check(CLI::Range(1, 255));
    cmd.add_option("--sigma", sigma, "dense-motion bandwidth in pixels (0 = auto)")
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--q-ref", q_ref, "quantizer step for INTRA frames")->check(CLI::Range(1, 255));
    cmd.add_flag("--yuv420", yuv420, "code chroma planes too (default luma only)");
  }

  CodecConfig config() const {
    CodecConfig cfg;
    cfg.gop_size = gop;
    cfg.lambda = lambda;
    cfg.mode = *parse_codec_mode(mode);
    cfg.motion.keypoints = keypoints;
    cfg.motion.sigma = sigma;
    cfg.q_ref = q_ref;
    cfg.chroma = yuv420 ? ChromaFormat::yuv420 : ChromaFormat::luma_only;
    validate(cfg);
    return cfg;
  }

  std::vector<std::string> comments() const {
    return {"mode=" + mode, "keypoints=" + std::to_string(keypoints),
            "sigma=" + (sigma > 0 ? fmt(sigma) : std::string("auto")),
            "q_ref=" + std::to_string(q_ref), std::string("chroma=") + (yuv420 ? "yuv420" : "luma-only")};
  }
};

std::vector<Frame> load_frames(const std::string& path) {
  return read_y4m_file(path).frames;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rdac: residual animation codec and evaluation harness", "rdac"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "show help for every subcommand");

  std::string input, output, out_csv, plot, decoded, test_csv, kind = "translating_texture";
  std::string metric_name = "msssim";
  std::vector<int> gops{16, 32, 64, 128};
  std::vector<double> lambdas{0.005, 0.02, 0.08, 0.32};
  int jobs = 1, repetitions = 3, width = 64, height = 64, frames = 64;
  std::uint64_t seed = 1;
  CodecFlags codec;

  auto* synth = app.add_subcommand("synth", "write a synthetic test sequence as Y4M");
  synth->add_option("--kind", kind, "translating_texture | deforming_blob | static_noise | zoom_pan")
      ->check(CLI::IsMember({"translating_texture", "deforming_blob", "static_noise", "zoom_pan"}));
  synth->add_option("--width", width)->check(CLI::Range(kMinFrameDimension, 65535));
  synth->add_option("--height", height)->check(CLI::Range(kMinFrameDimension, 65535));
  synth->add_option("--frames", frames)->check(CLI::Range(1, 1 << 20));
  synth->add_option("--seed", seed, "generator seed");
  synth->add_option("--output", output, "output .y4m")->required();

  auto* encode = app.add_subcommand("encode", "encode a Y4M sequence into an RDAC container");
  encode->add_option("--input", input, "input .y4m")->required();
  encode->add_option("--output", output, "output container")->required();
  codec.attach(*encode, true);

  auto* decode = app.add_subcommand("decode", "decode an RDAC container to Y4M");
  decode->add_option("--input", input, "input container")->required();
  decode->add_option("--output", output, "output .y4m")->required();

  auto* metrics = app.add_subcommand("metrics", "per-frame PSNR/SSIM/MS-SSIM of two sequences");
  metrics->add_option("--input", input, "reference .y4m")->required();
  metrics->add_option("--decoded", decoded, "distorted .y4m")->required();
  metrics->add_option("--out", out_csv, "CSV output (default stdout)");

  auto* sweep = app.add_subcommand("rd-sweep", "encode/decode/measure every (gop, lambda) cell");
  sweep->add_option("--input", input, "input .y4m")->required();
  sweep->add_option("--gops", gops, "comma-separated GOP sizes")->delimiter(',');
  sweep->add_option("--lambdas", lambdas, "comma-separated lambdas")->delimiter(',');
  sweep->add_option("--metric", metric_name, "psnr | ssim | msssim")
      ->transform(CLI::IsMember(kMetricChoices));
  sweep->add_option("--jobs", jobs, "parallel sweep cells")->check(CLI::Range(1, 256));
  sweep->add_option("--out", out_csv, "rd.csv output")->required();
  sweep->add_option("--plot", plot, "optional SVG chart of the hull");
  codec.attach(*sweep, false);

  auto* bd = app.add_subcommand("bd-rate", "BD-BR of a test rd.csv against an anchor rd.csv");
  bd->add_option("--input", input, "anchor rd.csv")->required();
  bd->add_option("--test", test_csv, "test rd.csv")->required();
  bd->add_option("--metric", metric_name, "psnr | ssim | msssim")
      ->transform(CLI::IsMember(kMetricChoices));
  bd->add_option("--out", out_csv, "write the result line here instead of stdout");

  auto* drift = app.add_subcommand("drift", "per-frame quality and per-GOP slopes");
  drift->add_option("--input", input, "original .y4m")->required();
  drift->add_option("--decoded", decoded, "decoded .y4m (default: encode and decode --input)");
  drift->add_option("--metric", metric_name, "psnr | ssim | msssim")
      ->transform(CLI::IsMember(kMetricChoices));
  drift->add_option("--out", out_csv, "drift.csv output")->required();
  drift->add_option("--plot", plot, "optional SVG chart of the series");
  codec.attach(*drift, true);

  auto* bench_cmd = app.add_subcommand("bench", "per-frame encode/decode timings");
  bench_cmd->add_option("--input", input, "input .y4m")->required();
  bench_cmd->add_option("--repetitions", repetitions)->check(CLI::Range(3, 1000));
  bench_cmd->add_option("--out", out_csv, "CSV output (default stdout)");
  codec.attach(*bench_cmd, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    const CLI::App* active = &app;
    for (auto* sub : app.get_subcommands()) active = sub;
    // Requirement checks run before extras are reported; an unknown flag is the likelier cause.
    const auto extras = active->remaining();
    if (!extras.empty() && !dynamic_cast<const CLI::ExtrasError*>(&e)) {
      err << "rdac: unexpected arguments:";
      for (const auto& x : extras) err << ' ' << x;
      err << "\n";
    } else {
      err << "rdac: " << e.what() << "\n";
    }
    err << active->help();
    return kUsage;
  }

  const Metric metric = parse_metric(metric_name);
  std::string current = input;  // names the offending input in diagnostics
  try {
    if (synth->parsed()) {
      require_output(output);
      const auto seq = synth_sequence(*parse_synth_kind(kind), width, height, frames, seed);
      SequenceInfo info{width, height, 30, 1, seq.size()};
      write_atomically(output, [&](std::ostream& o) { write_y4m(seq, info, o); });
    } else if (encode->parsed()) {
      require_input(input);
      require_output(output);
      const CodecConfig cfg = codec.config();
      const auto result = encode_sequence(load_frames(input), cfg);
      write_atomically(output, [&](std::ostream& o) {
        o.write(reinterpret_cast<const char*>(result.bytes.data()),
                static_cast<std::streamsize>(result.bytes.size()));
      });
      out << "frames," << result.frames.size() << "\nbytes," << result.bytes.size() << '\n';
    } else if (decode->parsed()) {
      require_input(input);
      require_output(output);
      const auto bytes = read_bytes(input);
      const auto result = decode_sequence(bytes);
      SequenceInfo info{result.header.width, result.header.height, 30, 1, result.frames.size()};
      write_atomically(output, [&](std::ostream& o) { write_y4m(result.frames, info, o); });
    } else if (metrics->parsed()) {
      require_input(input);
      require_input(decoded);
      if (!out_csv.empty()) require_output(out_csv);
      const auto a = load_frames(input);
      current = decoded;
      const auto b = load_frames(decoded);
      const auto report = measure_sequence(a, b);
      const std::vector<std::string> comments{"reference=" + input, "decoded=" + decoded,
                                              "plane=luma"};
      if (out_csv.empty()) {
        write_quality_csv(out, report, comments);
      } else {
        write_atomically(out_csv, [&](std::ostream& o) { write_quality_csv(o, report, comments); });
      }
    } else if (sweep->parsed()) {
      require_input(input);
      require_output(out_csv);
      if (!plot.empty()) require_output(plot);
      if (gops.empty() || lambdas.empty()) throw Error(ErrorCode::invalid_argument, "empty sweep list");
      const CodecConfig base = codec.config();
      const auto seq = load_frames(input);
      const auto points = rd_sweep(seq, gops, lambdas, base, {metric, jobs});
      auto comments = codec.comments();
      comments.insert(comments.begin(), "input=" + input);
      comments.push_back("gops=" + join(gops));
      comments.push_back("lambdas=" + join(lambdas));
      comments.push_back("metric=" + metric_name + " (luma plane)");
      write_atomically(out_csv, [&](std::ostream& o) { write_rd_csv(o, points, comments); });
      if (!plot.empty()) {
        std::vector<SvgSeries> series;
        for (int g : gops) {
          SvgSeries s{"gop " + std::to_string(g), {}};
          std::vector<RdPoint> subset;
          for (const auto& p : points)
            if (p.gop == g) subset.push_back(p);
          std::sort(subset.begin(), subset.end(),
                    [](const RdPoint& a, const RdPoint& b) { return a.bpp < b.bpp; });
          for (const auto& p : subset) s.points.emplace_back(p.bpp, p.quality);
          series.push_back(std::move(s));
        }
        SvgSeries hull{"hull", {}};
        for (const auto& p : convex_hull(points).points) hull.points.emplace_back(p.bpp, p.quality);
        series.push_back(std::move(hull));
        write_atomically(plot, [&](std::ostream& o) {
          write_svg_chart(o, "rate-distortion", "bpp", std::string(to_string(metric)), series);
        });
      }
    } else if (bd->parsed()) {
      require_input(input);
      require_input(test_csv);
      if (!out_csv.empty()) require_output(out_csv);
      auto load_curve = [&](const std::string& path) {
        current = path;
        std::ifstream in(path);
        std::vector<RdPoint> pts;
        for (const auto& p : read_rd_csv(in))
          if (p.metric == metric) pts.push_back(p);
        if (pts.empty())
          throw Error(ErrorCode::empty_input, "no rows with metric " + metric_name);
        return convex_hull(std::move(pts));
      };
      const RdCurve anchor = load_curve(input);
      const RdCurve test = load_curve(test_csv);
      current = input + " vs " + test_csv;
      const std::string line = bd_line(bd_rate(anchor, test));
      if (out_csv.empty()) {
        out << line << '\n';
      } else {
        write_atomically(out_csv, [&](std::ostream& o) {
          o << "# anchor=" << input << "\n# test=" << test_csv << "\n# metric=" << metric_name
            << '\n' << line << '\n';
        });
      }
    } else if (drift->parsed()) {
      require_input(input);
      if (!decoded.empty()) require_input(decoded);
      require_output(out_csv);
      if (!plot.empty()) require_output(plot);
      const auto original = load_frames(input);
      std::vector<Frame> reconstructed;
      std::vector<std::string> comments{"input=" + input, "gop=" + std::to_string(codec.gop),
                                        "metric=" + metric_name + " (luma plane)"};
      if (decoded.empty()) {
        const CodecConfig cfg = codec.config();
        reconstructed = decode_sequence(encode_sequence(original, cfg).bytes).frames;
        comments.push_back("lambda=" + fmt(codec.lambda));
        for (auto& c : codec.comments()) comments.push_back(std::move(c));
      } else {
        current = decoded;
        reconstructed = load_frames(decoded);
        comments.push_back("decoded=" + decoded);
      }
      const auto series = drift_analysis(original, reconstructed, codec.gop, metric);
      write_atomically(out_csv, [&](std::ostream& o) { write_drift_csv(o, series, comments); });
      if (!plot.empty()) {
        SvgSeries s{std::string(to_string(metric)), {}};
        for (std::size_t i = 0; i < series.values.size(); ++i)
          s.points.emplace_back(double(i), series.values[i]);
        write_atomically(plot, [&](std::ostream& o) {
          write_svg_chart(o, "quality over time", "frame", std::string(to_string(metric)), {s});
        });
      }
    } else if (bench_cmd->parsed()) {
      require_input(input);
      if (!out_csv.empty()) require_output(out_csv);
      const CodecConfig cfg = codec.config();
      auto seq = load_frames(input);
      if (cfg.chroma == ChromaFormat::luma_only)
        for (auto& f : seq) f = luma_only(f);
      const auto report = bench(seq, cfg, repetitions);
      auto comments = codec.comments();
      comments.insert(comments.begin(), "input=" + input);
      comments.push_back("gop=" + std::to_string(codec.gop));
      comments.push_back("lambda=" + fmt(codec.lambda));
      comments.push_back("repetitions=" + std::to_string(repetitions));
      comments.push_back("seconds are wall-clock per frame, file I/O excluded");
      if (out_csv.empty()) {
        write_bench_csv(out, report, comments);
      } else {
        write_atomically(out_csv, [&](std::ostream& o) { write_bench_csv(o, report, comments); });
      }
    }
  } catch (const PathError& e) {
    err << "rdac: error: " << e.message << '\n';
    return e.exit_code;
  } catch (const Error& e) {
    err << "rdac: error: " << (current.empty() ? std::string("<args>") : current) << ": "
        << e.what() << '\n';
    if (e.is_bitstream_error()) return kBitstream;
    switch (e.code()) {
      case ErrorCode::io_error:
      case ErrorCode::malformed_magic:
      case ErrorCode::unsupported_colorspace:
      case ErrorCode::truncated_frame:
        return kIo;
      default:
        return kUsage;
    }
  } catch (const std::exception& e) {
    err << "rdac: error: " << current << ": " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace rdac::cli
