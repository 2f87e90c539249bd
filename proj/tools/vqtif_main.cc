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

// vqtif: reduced-reference quality estimation from texture features and SSIM.
//
//   vqtif features INPUT [--out features.csv]
//   vqtif features REF --dist DIST --assembled-out assembled.csv
//   vqtif score REF DIST --model model.json [--out report.json]
//   vqtif eval MANIFEST --model model.json --out eval.json [--csv preds.csv]
//   vqtif importance MANIFEST --model model.json --out importance.json
//   vqtif bench REF DIST --model model.json --threads 8 --repetitions 3

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "vqtif/error.h"
#include "vqtif/eval.h"
#include "vqtif/model_io.h"
#include "vqtif/pipeline.h"
#include "vqtif/report.h"
#include "vqtif/texture.h"

namespace {

using vqtif::Error;
using vqtif::ErrorCode;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  int threads = vqtif::DefaultThreadCount();
  std::optional<int> chunk_size;
  std::optional<int> width;
  std::optional<int> height;
  std::string pixfmt = "yuv420p";
  std::string model_path;
  std::string out_path;
};

void AddThreads(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--threads", flags.threads, "Worker threads (default: all cores)")
      ->check(CLI::PositiveNumber);
}

void AddRawGeometry(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--width", flags.width, "Luma width of raw YUV input")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--height", flags.height, "Luma height of raw YUV input")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--pixfmt", flags.pixfmt, "Raw pixel format (yuv420p)");
}

void AddChunkSize(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--chunk-size", flags.chunk_size, "Frames per chunk")
      ->check(CLI::PositiveNumber);
}

vqtif::PipelineOptions Options(const CommonFlags& flags,
                               std::initializer_list<const std::string*> inputs) {
  vqtif::PipelineOptions options;
  options.threads = flags.threads;
  options.raw.width = flags.width;
  options.raw.height = flags.height;
  options.raw.pix_fmt = vqtif::ParsePixelFormat(flags.pixfmt);
  for (const std::string* input : inputs) {
    if (!vqtif::IsY4mPath(*input) && (!flags.width || !flags.height)) {
      throw UsageError("raw input '" + *input + "' requires --width and --height");
    }
  }
  return options;
}

vqtif::ModelBundle LoadModelFor(const CommonFlags& flags) {
  vqtif::ModelBundle bundle = vqtif::LoadModel(flags.model_path);
  if (flags.chunk_size && *flags.chunk_size != bundle.chunk_size) {
    throw UsageError("--chunk-size " + std::to_string(*flags.chunk_size) +
                     " does not match the model's f_c " +
                     std::to_string(bundle.chunk_size));
  }
  return bundle;
}

// Writes `content` to `path`, or to standard output when no path was given.
void Emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    std::cout.flush();
  } else {
    vqtif::WriteFileAtomic(path, content);
  }
}

std::string Dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

int RunFeatures(const std::string& input, const std::string& dist,
                const std::string& assembled_out, const std::string& pair_id,
                const CommonFlags& flags) {
  if (!assembled_out.empty() && dist.empty()) {
    throw UsageError("--assembled-out needs --dist");
  }
  if (dist.empty()) {
    const auto options = Options(flags, {&input});
    auto source = vqtif::OpenVideo(input, options.raw);
    vqtif::TextureAnalyzer analyzer;
    std::vector<vqtif::FrameFeatures> features;
    while (auto frame = source->ReadFrame()) {
      const auto one = analyzer.Process(std::span<const vqtif::Frame>(&*frame, 1),
                                        options.threads);
      features.push_back(one.front());
    }
    if (features.empty()) throw Error(ErrorCode::kInvalidArgument, "input has no frames");
    std::ostringstream csv;
    vqtif::WriteFeatureCsv(csv, features);
    Emit(flags.out_path, csv.str());
    return 0;
  }

  const auto options = Options(flags, {&input, &dist});
  const auto analysis = vqtif::AnalyzePair(
      input, dist, static_cast<std::size_t>(flags.chunk_size.value_or(vqtif::kDefaultChunkSize)),
      options);
  if (!flags.out_path.empty()) {
    std::ostringstream csv;
    vqtif::WriteFeatureCsv(csv, analysis.original);
    vqtif::WriteFileAtomic(flags.out_path, csv.str());
  }
  std::ostringstream assembled;
  vqtif::WriteAssembledCsv(assembled,
                           pair_id.empty() ? std::filesystem::path(dist).stem().string()
                                           : pair_id,
                           analysis);
  Emit(assembled_out, assembled.str());
  return 0;
}

int RunScore(const std::string& ref, const std::string& dist,
             const std::string& assembled_out, const std::string& pair_id,
             const CommonFlags& flags) {
  const auto options = Options(flags, {&ref, &dist});
  const auto bundle = LoadModelFor(flags);
  const auto scored = vqtif::ScorePair(ref, dist, bundle, options);
  if (!flags.out_path.empty()) {
    vqtif::WriteFileAtomic(flags.out_path, Dump(vqtif::ScoreReportToJson(scored.report)));
  }
  if (!assembled_out.empty()) {
    std::ostringstream assembled;
    vqtif::WriteAssembledCsv(assembled,
                             pair_id.empty() ? std::filesystem::path(dist).stem().string()
                                             : pair_id,
                             scored.analysis);
    vqtif::WriteFileAtomic(assembled_out, assembled.str());
  }
  std::cout << vqtif::FormatDouble(scored.report.segment_score) << '\n';
  return 0;
}

void CheckManifestInputs(const vqtif::EvalManifest& manifest, const CommonFlags& flags) {
  for (const auto& e : manifest.entries) {
    const std::string ref = e.ref_path.string();
    const std::string dist = e.dist_path.string();
    Options(flags, {&ref, &dist});
  }
}

int RunEval(const std::string& manifest_path, const std::string& csv_path,
            const CommonFlags& flags) {
  const auto manifest = vqtif::LoadManifest(manifest_path);
  CheckManifestInputs(manifest, flags);
  const auto options = Options(flags, {});
  const auto bundle = LoadModelFor(flags);
  const auto report = vqtif::RunEval(manifest, bundle, options);
  Emit(flags.out_path, Dump(vqtif::EvalReportToJson(report)));
  if (!csv_path.empty()) {
    std::ostringstream csv;
    vqtif::WriteEvalCsv(csv, report);
    vqtif::WriteFileAtomic(csv_path, csv.str());
  }
  if (!report.complete) {
    for (const auto& e : report.per_entry) {
      if (!e.error.empty()) std::cerr << "vqtif: entry '" << e.id << "': " << e.error << '\n';
    }
    std::cerr << "vqtif: error: dataset statistics skipped because entries failed\n";
    return kExitFailure;
  }
  return 0;
}

int RunImportance(const std::string& manifest_path, const CommonFlags& flags) {
  const auto manifest = vqtif::LoadManifest(manifest_path);
  CheckManifestInputs(manifest, flags);
  const auto options = Options(flags, {});
  const auto bundle = LoadModelFor(flags);
  const auto dataset = vqtif::BuildImportanceDataset(manifest, bundle, options);
  const auto report = vqtif::FeatureImportance(bundle, dataset, options.threads);
  Emit(flags.out_path, Dump(vqtif::ImportanceReportToJson(report)));
  return 0;
}

int RunBench(const std::string& ref, const std::string& dist, int repetitions,
             const CommonFlags& flags) {
  const auto options = Options(flags, {&ref, &dist});
  const auto bundle = LoadModelFor(flags);
  const auto report = vqtif::BenchPipeline(ref, dist, bundle, repetitions, options);
  Emit(flags.out_path, Dump(vqtif::BenchReportToJson(report)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-reference video quality estimation from DCT texture "
               "features and SSIM"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string input, ref, dist, manifest, assembled_out, pair_id, csv_path;
  int repetitions = 3;

  auto* features = app.add_subcommand("features", "Per-frame E,h,L texture features");
  features->add_option("input", input, "Y4M or raw YUV file")->required();
  features->add_option("--out", flags.out_path, "Feature CSV (default: stdout)");
  features->add_option("--dist", dist, "Reconstructed video to pair with INPUT");
  features->add_option("--assembled-out", assembled_out,
                       "Assembled r_E,r_h,r_L,ssim CSV for training (needs --dist)");
  features->add_option("--id", pair_id, "pair_id column value (default: DIST stem)");
  AddChunkSize(features, flags);
  AddThreads(features, flags);
  AddRawGeometry(features, flags);

  auto* score = app.add_subcommand("score", "Score a reconstructed video");
  score->add_option("ref", ref, "Original video")->required();
  score->add_option("dist", dist, "Reconstructed video")->required();
  score->add_option("--model", flags.model_path, "Model file")->required();
  score->add_option("--out", flags.out_path, "Score report JSON");
  score->add_option("--assembled-out", assembled_out, "Also write the assembled CSV");
  score->add_option("--id", pair_id, "pair_id column value (default: DIST stem)");
  AddChunkSize(score, flags);
  AddThreads(score, flags);
  AddRawGeometry(score, flags);

  auto* eval = app.add_subcommand("eval", "Accuracy against ground truth");
  eval->add_option("manifest", manifest, "CSV id,ref_path,dist_path,ground_truth")
      ->required();
  eval->add_option("--model", flags.model_path, "Model file")->required();
  eval->add_option("--out", flags.out_path, "Eval report JSON (default: stdout)");
  eval->add_option("--csv", csv_path, "Flat id,predicted,ground_truth CSV");
  AddChunkSize(eval, flags);
  AddThreads(eval, flags);
  AddRawGeometry(eval, flags);

  auto* importance = app.add_subcommand("importance", "Univariate feature importance");
  importance->add_option("manifest", manifest, "CSV id,ref_path,dist_path,ground_truth")
      ->required();
  importance->add_option("--model", flags.model_path, "Model file")->required();
  importance->add_option("--out", flags.out_path, "Importance report JSON");
  AddChunkSize(importance, flags);
  AddThreads(importance, flags);
  AddRawGeometry(importance, flags);

  auto* bench = app.add_subcommand("bench", "Stage-wise timing of the pipeline");
  bench->add_option("ref", ref, "Original video")->required();
  bench->add_option("dist", dist, "Reconstructed video")->required();
  bench->add_option("--model", flags.model_path, "Model file")->required();
  bench->add_option("--out", flags.out_path, "Bench report JSON (default: stdout)");
  bench->add_option("--repetitions", repetitions, "Timed runs; the median is reported")
      ->check(CLI::PositiveNumber);
  AddChunkSize(bench, flags);
  AddThreads(bench, flags);
  AddRawGeometry(bench, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*features) return RunFeatures(input, dist, assembled_out, pair_id, flags);
    if (*score) return RunScore(ref, dist, assembled_out, pair_id, flags);
    if (*eval) return RunEval(manifest, csv_path, flags);
    if (*importance) return RunImportance(manifest, flags);
    if (*bench) return RunBench(ref, dist, repetitions, flags);
  } catch (const UsageError& e) {
    std::cerr << "vqtif: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "vqtif: error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "vqtif: error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
