// Copyright 2026 The vqtif Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every expected value comes from the oracles in this directory or
// from closed forms written out below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "test_support.h"
#include "vqtif/error.h"
#include "vqtif/eval.h"
#include "vqtif/fusion.h"
#include "vqtif/metrics.h"
#include "vqtif/pipeline.h"
#include "vqtif/report.h"
#include "vqtif/texture.h"

namespace vqtif {
namespace {

using testing::ConstantFrame;
using testing::Distort;
using testing::MovingGradient;
using testing::NoiseFrame;
using testing::NoisyFrame;

struct Outcome {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string Fmt(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), fmt, a, b);
  return buf;
}

Outcome DctParity() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  double worst_rel = 0.0, worst_parseval = 0.0;
  for (int n = 0; n < 1000; ++n) {
    BlockSamples block;
    for (double& v : block) v = u(rng);
    const auto fast = Dct2d32(block);
    const auto slow = oracle::NaiveDct32(block);
    double scale = 0.0, diff = 0.0, e_in = 0.0, e_out = 0.0;
    for (int k = 0; k < kBlockArea; ++k) {
      scale = std::max(scale, std::abs(slow[k]));
      diff = std::max(diff, std::abs(fast[k] - slow[k]));
      e_in += block[k] * block[k];
      e_out += fast[k] * fast[k];
    }
    worst_rel = std::max(worst_rel, diff / scale);
    worst_parseval = std::max(worst_parseval, std::abs(e_out - e_in) / e_in);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.Check(worst_rel <= 1e-9, Fmt("max relative deviation %.3g > 1e-9", worst_rel));
  o.Check(worst_parseval <= 1e-6, Fmt("Parseval deviation %.3g > 1e-6", worst_parseval));
  o.Check(seconds < 5.0, Fmt("runtime %.2f s >= 5 s", seconds));
  if (o.pass) {
    o.detail = Fmt("1000 blocks, max rel dev %.2g, ", worst_rel) +
               Fmt("Parseval %.2g, ", worst_parseval) + Fmt("%.2f s", seconds);
  }
  return o;
}

Outcome TextureCorrectness() {
  Outcome o;
  for (int v : {0, 77, 255}) {
    const std::vector<Frame> frames = {ConstantFrame(96, 64, v, 0),
                                       ConstantFrame(96, 64, v, 1)};
    for (const auto& f : ExtractSegmentFeatures(frames, 2)) {
      o.Check(f.texture_energy == 0.0 && f.temporal_gradient == 0.0 &&
                  f.luminance == static_cast<double>(v),
              Fmt("constant %g frame: features not (0, 0, v)", v));
    }
  }

  double worst = 0.0;
  for (uint64_t seed = 1; seed <= 4; ++seed) {
    std::vector<Frame> frames = {NoiseFrame(100, 70, seed, 0), NoiseFrame(100, 70, seed + 50, 1)};
    const auto got = ExtractSegmentFeatures(frames, 3);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto want = oracle::NaiveFrameFeatures(frames[i], i ? &frames[0] : nullptr);
      auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
      worst = std::max({worst, rel(got[i].texture_energy, want.energy),
                        rel(got[i].temporal_gradient, want.gradient),
                        rel(got[i].luminance, want.luminance)});
    }
  }
  o.Check(worst <= 1e-9, Fmt("oracle deviation %.3g > 1e-9", worst));

  const Frame base = ConstantFrame(128, 128, 128);
  double last = -1.0;
  std::string energies;
  for (double amp : {0.0, 8.0, 32.0, 64.0}) {
    const Frame f = NoisyFrame(base, amp, 5);
    const double e = AnalyzeFrame(f, nullptr).features.texture_energy;
    o.Check(e > last || (amp == 0.0 && e == 0.0), Fmt("E not increasing at amplitude %g", amp));
    energies += Fmt(amp == 0.0 ? "%.3g" : " < %.3g", e);
    last = e;
  }
  if (o.pass) o.detail = "constant exact, oracle dev " + Fmt("%.2g, E: ", worst) + energies;
  return o;
}

Outcome SsimCorrectness() {
  Outcome o;
  const Frame a = NoiseFrame(96, 80, 3);
  const Frame b = NoisyFrame(a, 20, 4);
  o.Check(std::abs(FrameSsim(a, a) - 1.0) <= 1e-9, "SSIM(x,x) != 1");
  const double closed =
      (2.0 * 100 * 110 + kSsimC1) / (100.0 * 100 + 110.0 * 110 + kSsimC1);
  const double c = FrameSsim(ConstantFrame(64, 64, 100), ConstantFrame(64, 64, 110));
  o.Check(std::abs(c - 0.995477) <= 1e-6 && std::abs(c - closed) <= 1e-12,
          Fmt("constant 100 vs 110 gave %.9f", c));
  o.Check(FrameSsim(a, b) == FrameSsim(b, a), "SSIM not exactly symmetric");
  const double oracle_dev = std::abs(FrameSsim(a, b) - oracle::NaiveSsim(a, b));
  o.Check(oracle_dev <= 1e-9, Fmt("windowed oracle deviation %.3g", oracle_dev));
  const Frame base = MovingGradient(96, 96, 1)[0];
  double last = 2.0;
  std::string series;
  for (double amp : {0.0, 4.0, 16.0, 48.0}) {
    const double s = FrameSsim(base, NoisyFrame(base, amp, 77));
    o.Check(s <= last, Fmt("SSIM increased at amplitude %g", amp));
    series += Fmt(amp == 0.0 ? "%.4f" : " >= %.4f", s);
    last = s;
  }
  if (o.pass) o.detail = Fmt("closed form %.7f, ", c) + "noise: " + series;
  return o;
}

Outcome LstmParity() {
  Outcome o;
  const int hidden[] = {1, 3, 8};
  const int chunk[] = {1, 2, 8};
  std::mt19937_64 rng(609);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ModelBundle b = testing::RandomModel(hidden[i % 3], chunk[(i / 3) % 3], 5000 + i);
    std::vector<FeatureRow> raw(b.chunk_size);
    for (auto& r : raw)
      for (std::size_t k = 0; k < kFeatureCount; ++k)
        r[k] = b.norm_mean[k] + 2.0 * b.norm_std[k] * n(rng);
    const ChunkMatrix x = NormalizeInputs(ChunkMatrix(raw), b);
    const auto fast = LstmForward(x, b);
    const auto slow =
        oracle::ScalarLstm(std::vector<std::array<double, 4>>(x.rows().begin(), x.rows().end()), b);
    for (std::size_t j = 0; j < fast.size(); ++j) worst = std::max(worst, std::abs(fast[j] - slow[j]));
    worst = std::max(worst, std::abs(PredictChunkScore(ChunkMatrix(raw), b) -
                                     oracle::ScalarPredict(ChunkMatrix(raw), b)));
  }
  o.Check(worst <= 1e-12, Fmt("max deviation %.3g > 1e-12", worst));
  if (o.pass) o.detail = Fmt("100 bundles, max deviation %.2g", worst);
  return o;
}

Outcome IdentityPipeline() {
  Outcome o;
  testing::TempDir dir;
  const auto frames = MovingGradient(96, 64, 24);
  WriteY4mFile(dir / "a.y4m", frames);
  const ModelBundle model = ConstantModel(kReferenceHiddenDim, 8, 42.0);
  std::string first;
  for (int threads : {1, 2, 3, 4, 8}) {
    PipelineOptions opts;
    opts.threads = threads;
    const PairScore s = ScorePair(dir / "a.y4m", dir / "a.y4m", model, opts);
    bool all = s.report.chunk_scores.size() == 3;
    for (double c : s.report.chunk_scores) all = all && c == 42.0;
    o.Check(all && s.report.segment_score == 42.0,
            Fmt("threads %g: chunk or segment score != 42", threads));
    const std::string json = ScoreReportToJson(s.report, false).dump();
    if (first.empty()) first = json;
    o.Check(json == first, Fmt("threads %g: report differs", threads));
  }
  if (o.pass) o.detail = "3 chunks at 42, segment 42, threads {1,2,3,4,8} byte-identical";
  return o;
}

Outcome Determinism() {
  Outcome o;
  testing::TempDir dir;
  const auto ref = MovingGradient(128, 96, 16);
  WriteY4mFile(dir / "r.y4m", ref);
  WriteY4mFile(dir / "d.y4m", Distort(ref, 14, 21));
  const ModelBundle model = testing::RandomModel(8, 8, 31);
  std::string first_json, first_csv;
  for (int threads : {1, 2, 4, 8}) {
    PipelineOptions opts;
    opts.threads = threads;
    const PairScore s = ScorePair(dir / "r.y4m", dir / "d.y4m", model, opts);
    const std::string json = ScoreReportToJson(s.report, false).dump();
    std::ostringstream csv;
    WriteAssembledCsv(csv, "pair", s.analysis);
    if (threads == 1) {
      first_json = json;
      first_csv = csv.str();
    }
    o.Check(json == first_json && csv.str() == first_csv,
            Fmt("threads %g differ from threads 1", threads));
  }
  if (o.pass) o.detail = "scores and assembled features bit-identical at {1,2,4,8}";
  return o;
}

Outcome EvalStatistics() {
  Outcome o;
  const std::vector<double> pred = {80, 90, 70}, truth = {84, 87, 69};
  o.Check(Pcc(pred, truth) == 180.0 / std::sqrt(37200.0), "pcc != 180/sqrt(37200)");
  o.Check(Mae(pred, truth) == 8.0 / 3.0, "mae != 8/3");
  o.Check(MaxAbsDev(pred, truth) == 4.0, "max_abs_dev != 4");
  o.Check(Pcc(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}) == 1.0, "pcc != 1");
  o.Check(Pcc(std::vector<double>{1, 2, 3}, std::vector<double>{6, 4, 2}) == -1.0, "pcc != -1");

  const std::vector<double> a = {3.2, 9.1, 4.4, 7.7, 1.0}, b = {2.0, 8.5, 5.1, 6.0, 0.3};
  const double base = Pcc(a, b);
  double worst = 0.0;
  for (auto [s, t] : {std::pair{2.5, 10.0}, {0.001, -40.0}, {1e3, 7.0}}) {
    std::vector<double> x;
    for (double v : a) x.push_back(s * v + t);
    worst = std::max(worst, std::abs(Pcc(x, b) - base));
  }
  o.Check(worst <= 1e-12, Fmt("affine deviation %.3g", worst));

  std::mt19937_64 rng(44);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<ImportanceSample> data(5);
  for (auto& s : data) {
    for (int c = 0; c < 2; ++c) {
      std::vector<FeatureRow> rows(4);
      for (auto& r : rows) r = {n(rng), std::abs(n(rng)), 3 * n(rng), 0.9 + 0.05 * n(rng)};
      s.chunks.emplace_back(rows);
    }
    s.ground_truth = 60 + 10 * n(rng);
  }
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    ModelBundle m = testing::RandomModel(4, 4, 90 + k);
    for (auto& g : m.gates)
      for (int u = 0; u < m.hidden_dim; ++u) g.input[u * m.input_dim + k] = 0.0;
    const auto report = FeatureImportance(m, data);
    o.Check(report.raw[k] == 0.0, Fmt("zero-weighted feature %g has importance %g", k,
                                      report.raw[k]));
  }
  if (o.pass) o.detail = Fmt("hand values exact, affine dev %.2g, zeroed feature 0", worst);
  return o;
}

Outcome BenchStructure() {
  Outcome o;
  testing::TempDir dir;
  const auto ref = MovingGradient(128, 96, 16);
  WriteY4mFile(dir / "r.y4m", ref);
  WriteY4mFile(dir / "d.y4m", Distort(ref, 10, 8));
  PipelineOptions opts;
  opts.threads = 2;
  const BenchReport r =
      BenchPipeline(dir / "r.y4m", dir / "d.y4m", testing::RandomModel(8, 8, 2), 3, opts);
  const std::string text = BenchReportToJson(r).dump();
  const auto doc = nlohmann::json::parse(text);
  for (const char* k : {"texture_s", "ssim_s", "fusion_s", "total_s"})
    o.Check(doc["timing"].contains(k), std::string("missing timing.") + k);
  const auto& m = r.median;
  o.Check(m.total_s >= std::max({m.texture_s, m.ssim_s, m.fusion_s}), "total < max stage");
  for (const auto& run : r.runs)
    o.Check(run.timing.total_s >= std::max({run.timing.texture_s, run.timing.ssim_s,
                                            run.timing.fusion_s}),
            "a run's total < max stage");
  auto consistent = [&](const std::optional<double>& fps, double seconds) {
    if (seconds <= 0.0) return !fps.has_value();
    return fps && std::abs(*fps - r.frames / seconds) <= 1e-9 * *fps;
  };
  o.Check(consistent(r.texture_fps, m.texture_s) && consistent(r.ssim_fps, m.ssim_s) &&
              consistent(r.fusion_fps, m.fusion_s) && consistent(r.total_fps, m.total_s),
          "fps inconsistent with frames / time");
  o.Check(r.frames == 16 && r.runs.size() == 3, "frame or run count wrong");
  if (o.pass) {
    o.detail = Fmt("texture %.4f s, ssim %.4f s, ", m.texture_s, m.ssim_s) +
               Fmt("fusion %.4f s, total %.4f s", m.fusion_s, m.total_s);
  }
  return o;
}

}  // namespace
}  // namespace vqtif

int main() {
  using vqtif::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"dct-oracle-parity", vqtif::DctParity},
      {"texture-feature-correctness", vqtif::TextureCorrectness},
      {"ssim-correctness", vqtif::SsimCorrectness},
      {"lstm-forward-parity", vqtif::LstmParity},
      {"end-to-end-identity", vqtif::IdentityPipeline},
      {"thread-determinism", vqtif::Determinism},
      {"eval-statistics", vqtif::EvalStatistics},
      {"bench-structure", vqtif::BenchStructure},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
