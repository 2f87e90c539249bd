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

#ifndef VQTIF_EVAL_H_
#define VQTIF_EVAL_H_

#include <array>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vqtif/fusion.h"
#include "vqtif/pipeline.h"

namespace vqtif {

// Sample Pearson correlation. Throws kLengthMismatch on unequal lengths and
// kUndefined when fewer than two samples or either side has zero variance.
double Pcc(std::span<const double> a, std::span<const double> b);
// Mean |a_i - b_i|. Throws kLengthMismatch / kInvalidArgument (empty).
double Mae(std::span<const double> a, std::span<const double> b);
double MaxAbsDev(std::span<const double> a, std::span<const double> b);

struct NamedColumn {
  std::string name;
  std::vector<double> values;
};

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;  // symmetric, unit diagonal
};

CorrelationMatrix MetricCorrelationMatrix(std::span<const NamedColumn> columns);

struct ManifestEntry {
  std::string id;
  std::filesystem::path ref_path;
  std::filesystem::path dist_path;
  std::optional<double> ground_truth;
};

struct EvalManifest {
  std::vector<ManifestEntry> entries;
};

// CSV with header `id,ref_path,dist_path,ground_truth`; ground_truth may be
// empty. Relative paths are resolved against `base_dir`.
EvalManifest ParseManifest(std::istream& in, const std::filesystem::path& base_dir);
EvalManifest LoadManifest(const std::filesystem::path& path);

struct EntryResult {
  std::string id;
  std::optional<double> predicted;
  std::optional<double> ground_truth;
  double mean_ssim = 0.0;
  double mean_psnr = 0.0;  // may be kPsnrInfinite
  std::vector<double> chunk_scores;
  std::string error;  // empty on success
};

struct EvalReport {
  // Absent when undefined (pcc with a single entry or zero variance) or when
  // any entry failed.
  std::optional<double> pcc;
  std::optional<double> mae;
  std::optional<double> max_abs_dev;
  std::string pcc_note;
  std::vector<EntryResult> per_entry;
  bool complete = true;
  // PSNR / SSIM / prediction / ground truth over entries, when defined.
  std::optional<CorrelationMatrix> metric_correlation;
};

// Scores every entry end to end and compares against ground truth. Per-entry
// failures are recorded and suppress the dataset statistics.
EvalReport RunEval(const EvalManifest& manifest, const ModelBundle& bundle,
                   const PipelineOptions& options = {});

struct ImportanceSample {
  std::vector<ChunkMatrix> chunks;
  double ground_truth = 0.0;
};

struct ImportanceReport {
  double baseline_mae = 0.0;
  std::array<double, kFeatureCount> zeroed_mae{};
  std::array<double, kFeatureCount> raw{};         // |MAE_zeroed - MAE_full|
  std::array<double, kFeatureCount> normalized{};  // min-max scaled
  bool degenerate = false;                         // all raw values equal
};

// Univariate importance: each feature in turn is zeroed at the model input
// (its raw column replaced by the normalization mean) across every chunk, and
// the change in per-entry MAE is recorded.
ImportanceReport FeatureImportance(const ModelBundle& bundle,
                                   std::span<const ImportanceSample> dataset,
                                   int threads = 1);

std::vector<ImportanceSample> BuildImportanceDataset(const EvalManifest& manifest,
                                                     const ModelBundle& bundle,
                                                     const PipelineOptions& options = {});

struct BenchRun {
  StageTiming timing;
  double segment_score = 0.0;
};

struct BenchReport {
  int threads = 1;
  int repetitions = 1;
  int64_t frames = 0;
  std::size_t chunk_count = 0;
  double segment_score = 0.0;
  StageTiming median;
  // Frames per second per stage, from `frames` and the median times. Absent
  // when a median time is zero.
  std::optional<double> texture_fps, ssim_fps, fusion_fps, total_fps;
  std::vector<BenchRun> runs;
};

double Median(std::vector<double> values);

// Times the full pipeline `repetitions` times in sequence.
BenchReport BenchPipeline(const std::filesystem::path& ref,
                          const std::filesystem::path& dist, const ModelBundle& bundle,
                          int repetitions, const PipelineOptions& options = {});

}  // namespace vqtif

#endif  // VQTIF_EVAL_H_
