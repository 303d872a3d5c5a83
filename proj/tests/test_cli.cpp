#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "rdac/cli.hpp"
#include "rdac/codec.hpp"
#include "rdac/eval.hpp"
#include "rdac/y4m.hpp"

using namespace rdac;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome rdac_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Fresh directory per test case, removed afterwards.
struct Scratch {
  fs::path dir;
  Scratch() {
    std::random_device rd;
    dir = fs::temp_directory_path() / ("rdac_cli_" + std::to_string(rd()));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> out;
  for (auto& l : lines_of(text))
    if (!l.empty() && l[0] != '#') out.push_back(l);
  return out;
}

void synth(const Scratch& s, const std::string& name, const std::string& kind, int frames,
           int seed = 1) {
  const Outcome r = rdac_cli({"synth", "--kind", kind, "--width", "32", "--height", "32",
                              "--frames", std::to_string(frames), "--seed", std::to_string(seed),
                              "--output", s / name});
  REQUIRE(r.code == 0);
}

bool leftover_temp_files(const Scratch& s) {
  for (const auto& e : fs::directory_iterator(s.dir))
    if (e.path().filename().string().find(".tmp") != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("encode then decode reproduces the encoder's reconstructions") {
  Scratch s;
  synth(s, "a.y4m", "deforming_blob", 10);
  const std::string before = slurp(s / "a.y4m");
  const Outcome enc = rdac_cli({"encode", "--input", s / "a.y4m", "--output", s / "a.rdac",
                                "--gop", "32", "--lambda", "0.02", "--mode", "temporal"});
  REQUIRE(enc.code == 0);
  CHECK(enc.out.find("frames,10") != std::string::npos);
  REQUIRE(rdac_cli({"decode", "--input", s / "a.rdac", "--output", s / "rec.y4m"}).code == 0);
  CHECK(slurp(s / "a.y4m") == before);

  std::ifstream in(s / "a.y4m", std::ios::binary);
  const auto original = read_y4m(in).frames;
  CodecConfig cfg;
  cfg.gop_size = 32;
  cfg.lambda = 0.02;
  cfg.mode = CodecMode::temporal;
  const EncodeResult expected = encode_sequence(original, cfg);
  const std::string bytes = slurp(s / "a.rdac");
  CHECK(std::vector<std::uint8_t>(bytes.begin(), bytes.end()) == expected.bytes);

  std::ifstream rec(s / "rec.y4m", std::ios::binary);
  const auto decoded = read_y4m(rec).frames;
  REQUIRE(decoded.size() == expected.frames.size());
  for (std::size_t i = 0; i < decoded.size(); ++i)
    CHECK(decoded[i].luma() == expected.frames[i].reconstruction.luma());
  CHECK_FALSE(leftover_temp_files(s));
}

TEST_CASE("unknown flag is a usage error with help on the diagnostic stream") {
  const Outcome r = rdac_cli({"encode", "--bogus", "1"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.out.empty());
  CHECK(r.err.find("--bogus") != std::string::npos);
  CHECK(r.err.find("--input") != std::string::npos);

  CHECK(rdac_cli({}).code == cli::kUsage);
  CHECK(rdac_cli({"transcode"}).code == cli::kUsage);
  CHECK(rdac_cli({"encode", "--input", "x.y4m"}).code == cli::kUsage);
  CHECK(rdac_cli({"rd-sweep", "--input", "x", "--out", "y", "--metric", "lpips"}).code ==
        cli::kUsage);
}

TEST_CASE("bad codec parameters are usage errors") {
  Scratch s;
  synth(s, "a.y4m", "static_noise", 3);
  const Outcome r = rdac_cli({"encode", "--input", s / "a.y4m", "--output", s / "a.rdac",
                              "--mode", "turbo"});
  CHECK(r.code == cli::kUsage);
  const Outcome q = rdac_cli({"encode", "--input", s / "a.y4m", "--output", s / "a.rdac",
                              "--q-ref", "10"});
  CHECK(q.code == cli::kUsage);
  CHECK_FALSE(fs::exists(s / "a.rdac"));
}

TEST_CASE("missing or unreadable paths are I/O errors named in the diagnostic") {
  Scratch s;
  const Outcome r = rdac_cli({"encode", "--input", s / "none.y4m", "--output", s / "a.rdac"});
  CHECK(r.code == cli::kIo);
  CHECK(r.err.find("none.y4m") != std::string::npos);
  CHECK(lines_of(r.err).size() == 1);

  synth(s, "a.y4m", "static_noise", 2);
  const Outcome d = rdac_cli({"encode", "--input", s / "a.y4m", "--output", s / "no/dir/a.rdac"});
  CHECK(d.code == cli::kIo);

  std::ofstream(s / "junk.y4m") << "not a y4m file\n";
  const Outcome j = rdac_cli({"encode", "--input", s / "junk.y4m", "--output", s / "a.rdac"});
  CHECK(j.code == cli::kIo);
  CHECK(j.err.find("junk.y4m") != std::string::npos);
}

TEST_CASE("decode of a corrupted container exits 3 and names the frame") {
  Scratch s;
  synth(s, "a.y4m", "translating_texture", 6);
  REQUIRE(rdac_cli({"encode", "--input", s / "a.y4m", "--output", s / "a.rdac", "--gop", "4"})
              .code == 0);
  const std::string good = slurp(s / "a.rdac");
  const auto c = read_container(std::span(reinterpret_cast<const std::uint8_t*>(good.data()),
                                          good.size()));
  // Byte offset of record 3: header, then records 0..2.
  std::size_t offset = kContainerHeaderBytes;
  for (std::size_t i = 0; i < 3; ++i) {
    offset += 3 + 4;
    for (const auto& sec : c.records[i].sections) offset += 4 + sec.size();
  }
  std::string bad = good;
  bad[offset + 3 + 4 + 2] ^= 0x10;
  std::ofstream(s / "bad.rdac", std::ios::binary) << bad;
  const Outcome r = rdac_cli({"decode", "--input", s / "bad.rdac", "--output", s / "rec.y4m"});
  CHECK(r.code == cli::kBitstream);
  CHECK(r.err.find("frame 3") != std::string::npos);
  CHECK_FALSE(fs::exists(s / "rec.y4m"));
  CHECK_FALSE(leftover_temp_files(s));

  std::ofstream(s / "short.rdac", std::ios::binary) << good.substr(0, good.size() - 5);
  CHECK(rdac_cli({"decode", "--input", s / "short.rdac", "--output", s / "rec.y4m"}).code ==
        cli::kBitstream);
}

TEST_CASE("rd-sweep writes one row per cell with hull flags, re-parseable by bd-rate") {
  Scratch s;
  synth(s, "a.y4m", "translating_texture", 8, 3);
  const Outcome r = rdac_cli({"rd-sweep", "--input", s / "a.y4m", "--gops", "16,32,64,128",
                              "--lambdas", "0.005,0.02,0.08,0.32", "--mode", "temporal",
                              "--jobs", "2", "--out", s / "rd.csv", "--plot", s / "rd.svg"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(s / "rd.csv");
  const auto lines = lines_of(csv);
  REQUIRE(!lines.empty());
  CHECK(lines[0].rfind("# input=", 0) == 0);
  CHECK(csv.find("# gops=16,32,64,128\n") != std::string::npos);
  CHECK(csv.find("# lambdas=0.005,0.02,0.08,0.32\n") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);
  const auto rows = data_lines(csv);
  REQUIRE(rows.size() == 17);
  CHECK(rows[0] == "mode,gop,lambda,bpp,metric,quality,on_hull");
  int hull = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].rfind("temporal,", 0) == 0);
    hull += rows[i].back() == '1' ? 1 : 0;
  }
  CHECK(hull >= 1);
  CHECK(slurp(s / "rd.svg").rfind("<svg", 0) == 0);

  std::ifstream in(s / "rd.csv");
  CHECK(read_rd_csv(in).size() == 16);

  // Same file as anchor and test: zero BD rate.
  REQUIRE(rdac_cli({"rd-sweep", "--input", s / "a.y4m", "--gops", "16", "--lambdas",
                    "0.001,0.005,0.02,0.08,0.32,1.5", "--out", s / "one.csv"})
              .code == 0);
  const Outcome bd = rdac_cli({"bd-rate", "--input", s / "one.csv", "--test", s / "one.csv"});
  CHECK(bd.code == 0);
  CHECK(bd.out.rfind("bd_br_percent,", 0) == 0);
  CHECK(std::abs(std::stod(bd.out.substr(14))) < 1e-9);
  CHECK(rdac_cli({"bd-rate", "--input", s / "one.csv", "--test", s / "one.csv", "--metric",
                  "psnr"})
            .code == cli::kUsage);
}

TEST_CASE("metrics, drift and bench write their CSV layouts") {
  Scratch s;
  synth(s, "a.y4m", "zoom_pan", 6, 2);
  REQUIRE(rdac_cli({"encode", "--input", s / "a.y4m", "--output", s / "a.rdac", "--gop", "3",
                    "--mode", "adaptive"})
              .code == 0);
  REQUIRE(rdac_cli({"decode", "--input", s / "a.rdac", "--output", s / "rec.y4m"}).code == 0);

  const Outcome m = rdac_cli({"metrics", "--input", s / "a.y4m", "--decoded", s / "rec.y4m"});
  REQUIRE(m.code == 0);
  const auto mrows = data_lines(m.out);
  REQUIRE(mrows.size() == 7);
  CHECK(mrows[0] == "frame,psnr,ssim,ms_ssim");
  CHECK(m.out.find("# mean_ms_ssim,") != std::string::npos);

  REQUIRE(rdac_cli({"drift", "--input", s / "a.y4m", "--decoded", s / "rec.y4m", "--gop", "3",
                    "--out", s / "drift.csv"})
              .code == 0);
  const std::string drift = slurp(s / "drift.csv");
  const auto drows = data_lines(drift);
  REQUIRE(drows.size() == 7);
  CHECK(drows[0] == "frame,metric,value");
  CHECK(drows[1].rfind("0,msssim,", 0) == 0);
  CHECK(drift.find("# gop_slope,1,") != std::string::npos);

  REQUIRE(rdac_cli({"drift", "--input", s / "a.y4m", "--gop", "6", "--mode", "animation-only",
                    "--metric", "psnr", "--out", s / "drift2.csv"})
              .code == 0);
  CHECK(data_lines(slurp(s / "drift2.csv"))[1].rfind("0,psnr,", 0) == 0);

  const Outcome b = rdac_cli({"bench", "--input", s / "a.y4m", "--gop", "3", "--repetitions", "3"});
  REQUIRE(b.code == 0);
  const auto brows = data_lines(b.out);
  REQUIRE(brows.size() == 5);
  CHECK(brows[0] == "frame_type,direction,samples,mean_seconds,median_seconds");
  CHECK(brows[1].rfind("INTRA,encode,3,", 0) == 0);
  CHECK(b.out.find("# repetitions=3") != std::string::npos);
  CHECK(rdac_cli({"bench", "--input", s / "a.y4m", "--repetitions", "2"}).code == cli::kUsage);

  CHECK(rdac_cli({"metrics", "--input", s / "a.y4m", "--decoded", s / "nope.y4m"}).code ==
        cli::kIo);
}

TEST_CASE("outputs are deterministic and replace existing files whole") {
  Scratch s;
  synth(s, "a.y4m", "deforming_blob", 5, 9);
  std::ofstream(s / "a.rdac") << "stale contents that are longer than nothing";
  REQUIRE(rdac_cli({"encode", "--input", s / "a.y4m", "--output", s / "a.rdac"}).code == 0);
  const std::string first = slurp(s / "a.rdac");
  REQUIRE(rdac_cli({"encode", "--input", s / "a.y4m", "--output", s / "b.rdac"}).code == 0);
  CHECK(slurp(s / "b.rdac") == first);
  CHECK(first.rfind("RDAC", 0) == 0);
  CHECK_FALSE(leftover_temp_files(s));
}
