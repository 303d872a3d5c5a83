#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rdac/eval.hpp"
#include "rdac/synth.hpp"

using namespace rdac;

namespace {

RdPoint pt(double bpp, double quality, int gop = 16) {
  RdPoint p;
  p.bpp = bpp;
  p.quality = quality;
  p.gop = gop;
  return p;
}

std::vector<oracle::Xy> xy(const std::vector<RdPoint>& pts) {
  std::vector<oracle::Xy> out;
  for (const auto& p : pts) out.emplace_back(p.bpp, p.quality);
  return out;
}

RdCurve curve_of(const std::vector<oracle::Xy>& pts) {
  std::vector<RdPoint> v;
  for (auto [b, q] : pts) v.push_back(pt(b, q));
  return make_curve(std::move(v));
}

// Strictly increasing in both coordinates, uneven steps.
std::vector<oracle::Xy> random_monotone(std::mt19937_64& rng, double q0, int n) {
  std::vector<oracle::Xy> c;
  double bpp = 0.02 + 0.1 * oracle::uniform(rng);
  double q = q0;
  for (int i = 0; i < n; ++i) {
    c.emplace_back(bpp, q);
    bpp *= 1.3 + oracle::uniform(rng);
    q += 0.5 + 3.0 * oracle::uniform(rng);
  }
  return c;
}

CodecConfig config(CodecMode mode, int gop, double lambda) {
  CodecConfig cfg;
  cfg.mode = mode;
  cfg.gop_size = gop;
  cfg.lambda = lambda;
  return cfg;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("hull drops the point under its neighbours' chord") {
  const RdCurve h = convex_hull({pt(1, 30), pt(2, 35), pt(3, 36), pt(4, 40)});
  REQUIRE(h.points.size() == 3);
  CHECK(h.points[0].bpp == 1);
  CHECK(h.points[1].bpp == 2);
  CHECK(h.points[2].bpp == 4);
  CHECK(interpolate_quality(h, 3.0) == doctest::Approx(37.5).epsilon(1e-12));
  CHECK(oracle::hull({{1, 30}, {2, 35}, {3, 36}, {4, 40}}) == xy(h.points));
}

TEST_CASE("hull degenerate and fixed-point cases") {
  const RdCurve one = convex_hull({pt(0.5, 33)});
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0].quality == 33);

  const std::vector<RdPoint> concave = {pt(0.1, 30), pt(0.2, 34), pt(0.4, 37), pt(0.8, 39)};
  CHECK(xy(convex_hull(concave).points) == xy(concave));

  // Same bpp keeps the better quality; a costlier but worse point goes.
  const RdCurve h = convex_hull({pt(1, 30), pt(1, 32), pt(2, 31), pt(3, 36)});
  CHECK(xy(h.points) == std::vector<oracle::Xy>{{1, 32}, {3, 36}});

  CHECK_THROWS_AS(convex_hull({}), Error);
}

TEST_CASE("hull matches the exhaustive oracle on random point clouds") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<RdPoint> pts;
    const int n = 1 + int(rng() % 14);
    // Small integer grid so ties, duplicates and collinear triples all occur.
    for (int i = 0; i < n; ++i) pts.push_back(pt(1 + double(rng() % 8), 20 + double(rng() % 10)));
    CAPTURE(trial);
    CHECK(xy(convex_hull(pts).points) == oracle::hull(xy(pts)));
  }
}

TEST_CASE("every input point is weakly dominated by the hull") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<RdPoint> pts;
    for (int i = 0; i < 12; ++i)
      pts.push_back(pt(0.01 + oracle::uniform(rng), 25 + 15 * oracle::uniform(rng)));
    const RdCurve h = convex_hull(pts);
    for (const auto& p : pts) CHECK(interpolate_quality(h, p.bpp) >= p.quality - 1e-12);
    for (std::size_t i = 1; i < h.points.size(); ++i) {
      CHECK(h.points[i].bpp > h.points[i - 1].bpp);
      CHECK(h.points[i].quality > h.points[i - 1].quality);
    }
    const auto member = hull_membership(pts);
    std::size_t on = 0;
    for (bool m : member) on += m ? 1 : 0;
    CHECK(on == h.points.size());
  }
}

TEST_CASE("monotone cubic interpolates, stays monotone and integrates lines exactly") {
  const MonotoneCubic f({0, 1, 2, 4, 5}, {0, 0.2, 3, 3.1, 7});
  const double xs[] = {0, 1, 2, 4, 5};
  const double ys[] = {0, 0.2, 3, 3.1, 7};
  for (int i = 0; i < 5; ++i) CHECK(f(xs[i]) == doctest::Approx(ys[i]).epsilon(1e-12));
  double prev = f(0);
  for (int i = 1; i <= 500; ++i) {
    const double v = f(5.0 * i / 500);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  const MonotoneCubic line({0, 1, 3, 4}, {1, 3, 7, 9});
  CHECK(line.integral(0, 4) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(line.integral(0.5, 2) == doctest::Approx(5.25).epsilon(1e-12));
  CHECK_THROWS_AS(MonotoneCubic({0, 0}, {1, 2}), Error);
}

TEST_CASE("bd rate closed forms") {
  const std::vector<oracle::Xy> anchor = {{0.1, 30}, {0.2, 33.5}, {0.45, 36}, {0.9, 39}};
  std::vector<oracle::Xy> half = anchor, twice = anchor;
  for (auto& p : half) p.first /= 2;
  for (auto& p : twice) p.first *= 2;
  CHECK(std::abs(bd_rate(curve_of(anchor), curve_of(anchor))) < 1e-9);
  CHECK(std::abs(bd_rate(curve_of(anchor), curve_of(half)) + 50.0) < 1e-9);
  CHECK(std::abs(bd_rate(curve_of(anchor), curve_of(twice)) - 100.0) < 1e-9);
}

TEST_CASE("bd rate agrees with the trapezoid oracle") {
  std::mt19937_64 rng(7);
  for (int pair = 0; pair < 20; ++pair) {
    const auto a = random_monotone(rng, 28 + 2 * oracle::uniform(rng), 4 + int(rng() % 3));
    const auto t = random_monotone(rng, 28 + 2 * oracle::uniform(rng), 4 + int(rng() % 3));
    CAPTURE(pair);
    CHECK(std::abs(bd_rate(curve_of(a), curve_of(t)) - oracle::bd_rate(a, t)) < 0.1);
  }
}

TEST_CASE("bd rate is nearly inverse when the curves swap") {
  std::mt19937_64 rng(8);
  for (int pair = 0; pair < 20; ++pair) {
    auto smooth = [&](double a, double b) {
      std::vector<oracle::Xy> c;
      for (double bpp : {0.05, 0.1, 0.2, 0.4, 0.8}) c.emplace_back(bpp, a + b * std::log(bpp));
      return c;
    };
    const auto x = smooth(40 + 3 * oracle::uniform(rng), 3 + 2 * oracle::uniform(rng));
    const auto y = smooth(40 + 3 * oracle::uniform(rng), 3 + 2 * oracle::uniform(rng));
    const double ab = bd_rate(curve_of(x), curve_of(y));
    const double ba = bd_rate(curve_of(y), curve_of(x));
    const double product = (1 + ab / 100) * (1 + ba / 100);
    CHECK(product >= 0.98);
    CHECK(product <= 1.02);
  }
}

TEST_CASE("bd rate rejects unusable curves") {
  const std::vector<oracle::Xy> four = {{0.1, 30}, {0.2, 31}, {0.3, 32}, {0.4, 33}};
  const std::vector<oracle::Xy> three = {{0.1, 30}, {0.2, 31}, {0.3, 32}};
  const std::vector<oracle::Xy> apart = {{0.1, 40}, {0.2, 41}, {0.3, 42}, {0.4, 43}};
  CHECK_THROWS_AS(bd_rate(curve_of(four), curve_of(three)), Error);
  try {
    bd_rate(curve_of(four), curve_of(apart));
    FAIL("expected no_overlap");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::no_overlap);
  }
  CHECK_THROWS_AS(make_curve({pt(0.1, 30), pt(0.2, 29)}), Error);
}

TEST_CASE("piecewise-linear lookups") {
  const RdCurve c = curve_of({{1, 30}, {2, 34}, {4, 36}});
  CHECK(interpolate_quality(c, 1.5) == doctest::Approx(32));
  CHECK(interpolate_quality(c, 0.5) == 30);
  CHECK(interpolate_quality(c, 9) == 36);
  CHECK(interpolate_bpp(c, 35) == doctest::Approx(3));
  CHECK(interpolate_bpp(c, 20) == 1);
}

TEST_CASE("least squares slope on an exact line") {
  std::vector<double> v;
  for (int t = 0; t < 50; ++t) v.push_back(40.0 - 0.1 * t);
  CHECK(std::abs(least_squares_slope(v) + 0.1) < 1e-12);
  CHECK(least_squares_slope(std::vector<double>{3.0}) == 0.0);
}

TEST_CASE("drift of an identical sequence is flat at 1") {
  const auto frames = synth_sequence(SynthKind::zoom_pan, 48, 48, 10, 1);
  const DriftSeries s = drift_analysis(frames, frames, 4);
  REQUIRE(s.values.size() == 10);
  for (double v : s.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(s.gop_slopes.size() == 3);
  for (double g : s.gop_slopes) CHECK(std::abs(g) < 1e-12);

  auto shorter = frames;
  shorter.pop_back();
  CHECK_THROWS_AS(drift_analysis(frames, shorter, 4), Error);
}

TEST_CASE("temporal residuals hold quality where animation alone drifts") {
  const auto frames = synth_sequence(SynthKind::deforming_blob, 64, 64, 32, 2);
  auto run = [&](CodecMode mode) {
    const EncodeResult enc = encode_sequence(frames, config(mode, 32, 0.08));
    return drift_analysis(frames, decode_sequence(enc.bytes).frames, 32);
  };
  const DriftSeries anim = run(CodecMode::animation_only);
  const DriftSeries temp = run(CodecMode::temporal);
  REQUIRE(anim.gop_slopes.size() == 1);
  CHECK(anim.gop_slopes[0] < 0.0);
  CHECK(std::abs(temp.gop_slopes[0]) < std::abs(anim.gop_slopes[0]));
  CHECK(*std::min_element(temp.values.begin(), temp.values.end()) >
        *std::min_element(anim.values.begin(), anim.values.end()));
}

TEST_CASE("bench aggregates one sample per repetition") {
  const auto frames = synth_sequence(SynthKind::translating_texture, 32, 32, 6, 3);
  const BenchReport r = bench(frames, config(CodecMode::temporal, 4, 0.02), 3);
  REQUIRE(r.stats.size() == 4);
  CHECK(r.repetitions == 3);
  int encode_rows = 0;
  for (const auto& s : r.stats) {
    CHECK(s.samples == 3);
    CHECK(s.mean_seconds >= 0.0);
    CHECK(s.median_seconds >= 0.0);
    encode_rows += s.encode ? 1 : 0;
  }
  CHECK(encode_rows == 2);
  CHECK_THROWS_AS(bench(frames, config(CodecMode::temporal, 4, 0.02), 2), Error);

  std::ostringstream csv;
  write_bench_csv(csv, r, {"frames=6"});
  const auto lines = lines_of(csv.str());
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "# frames=6");
  CHECK(lines[1] == "frame_type,direction,samples,mean_seconds,median_seconds");
  for (std::size_t i = 2; i < lines.size(); ++i) {
    CAPTURE(lines[i]);
    CHECK((lines[i].rfind("INTRA,", 0) == 0 || lines[i].rfind("ANIMATED,", 0) == 0));
    CHECK((lines[i].find(",encode,3,") != std::string::npos ||
           lines[i].find(",decode,3,") != std::string::npos));
  }
}

TEST_CASE("rd sweep covers every cell and is deterministic") {
  const auto frames = synth_sequence(SynthKind::translating_texture, 32, 32, 8, 4);
  const std::vector<int> gops = {2, 4, 8, 16};
  const std::vector<double> lambdas = {0.005, 0.02, 0.08, 0.32};
  const CodecConfig base = config(CodecMode::temporal, 16, 0.02);
  const auto a = rd_sweep(frames, gops, lambdas, base);
  SweepOptions threaded;
  threaded.jobs = 4;
  const auto b = rd_sweep(frames, gops, lambdas, base, threaded);
  REQUIRE(a.size() == 16);
  REQUIRE(b.size() == 16);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].gop == gops[i / 4]);
    CHECK(a[i].lambda == lambdas[i % 4]);
    CHECK(a[i].mode == CodecMode::temporal);
    CHECK(a[i].metric == Metric::ms_ssim);
    CHECK(a[i].bpp > 0.0);
    CHECK(a[i].bits == b[i].bits);
    CHECK(a[i].quality == b[i].quality);
  }
  CHECK_THROWS_AS(rd_sweep(frames, std::vector<int>{}, lambdas, base), Error);
}

TEST_CASE("bpp is bitstream bits over samples") {
  const auto frames = synth_sequence(SynthKind::zoom_pan, 48, 32, 5, 5);
  const CodecConfig cfg = config(CodecMode::adaptive, 4, 0.02);
  const RdPoint p = measure_point(frames, cfg, Metric::psnr);
  const EncodeResult enc = encode_sequence(frames, cfg);
  CHECK(p.bits == 8 * enc.bytes.size());
  CHECK(p.bpp == double(8 * enc.bytes.size()) / (5.0 * 48 * 32));
  const QualityReport q = measure_sequence(frames, decode_sequence(enc.bytes).frames);
  CHECK(p.quality == q.mean_psnr);
  CHECK(p.with_metric(Metric::ssim).quality == q.mean_ssim);
}

TEST_CASE("hull over all GOP sizes dominates each single-GOP curve") {
  const auto frames = synth_sequence(SynthKind::deforming_blob, 32, 32, 16, 6);
  const std::vector<int> gops = {2, 4, 8, 16};
  const std::vector<double> lambdas = {0.005, 0.02, 0.08, 0.32};
  const auto pts = rd_sweep(frames, gops, lambdas, config(CodecMode::temporal, 16, 0.02));
  const RdCurve all = convex_hull(pts);
  for (int g : gops) {
    std::vector<RdPoint> one;
    for (const auto& p : pts)
      if (p.gop == g) one.push_back(p);
    const RdCurve single = convex_hull(one);
    const double lo = std::max(all.points.front().quality, single.points.front().quality);
    const double hi = std::min(all.points.back().quality, single.points.back().quality);
    for (int i = 0; i <= 50 && hi >= lo; ++i) {
      const double q = lo + (hi - lo) * i / 50;
      CAPTURE(g);
      CAPTURE(q);
      CHECK(interpolate_bpp(all, q) <= interpolate_bpp(single, q) * (1 + 1e-12));
    }
  }
}

TEST_CASE("rd csv round trip keeps values and hull flags") {
  std::vector<RdPoint> pts = {pt(0.1, 0.9, 16), pt(0.2, 0.95, 16), pt(0.3, 0.94, 32),
                              pt(0.4, 0.99, 32)};
  pts[2].mode = pts[3].mode = CodecMode::intra_residual;
  pts[0].lambda = 0.005;
  std::ostringstream out;
  write_rd_csv(out, pts, {"input=a.y4m", "lambdas=0.005"});
  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 7);
  CHECK(lines[2] == "mode,gop,lambda,bpp,metric,quality,on_hull");
  CHECK(lines[3] == "temporal,16,0.005,0.1,msssim,0.9,1");
  CHECK(lines[5].substr(0, 15) == "intra-residual,");

  std::istringstream in(out.str());
  const auto back = read_rd_csv(in);
  REQUIRE(back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(back[i].mode == pts[i].mode);
    CHECK(back[i].gop == pts[i].gop);
    CHECK(back[i].lambda == pts[i].lambda);
    CHECK(back[i].bpp == pts[i].bpp);
    CHECK(back[i].quality == pts[i].quality);
    CHECK(back[i].metric == Metric::ms_ssim);
  }
  std::istringstream bad("mode,gop\n");
  CHECK_THROWS_AS(read_rd_csv(bad), Error);
}

TEST_CASE("drift and bd outputs") {
  DriftSeries s;
  s.values = {1.0, 0.5};
  s.gop_slopes = {-0.5};
  std::ostringstream out;
  write_drift_csv(out, s, {});
  CHECK(out.str() == "# gop_slope,0,-0.5\nframe,metric,value\n0,msssim,1\n1,msssim,0.5\n");
  CHECK(bd_line(-12.5) == "bd_br_percent,-12.5");
}
