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

#include "vqtif/eval.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "vqtif/error.h"
#include "vqtif/parallel.h"

namespace vqtif {
namespace {

void CheckPaired(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "value lists differ in length: " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  if (a.empty()) throw Error(ErrorCode::kInvalidArgument, "value lists are empty");
}

double Mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record; double-quoted fields may contain commas and "".
std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(Trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(Trim(field));
  return fields;
}

std::vector<double> SampleScores(const ModelBundle& bundle,
                                 std::span<const ImportanceSample> dataset,
                                 std::optional<std::size_t> zeroed, int threads) {
  std::vector<double> predicted(dataset.size());
  ParallelFor(dataset.size(), threads, [&](std::size_t i) {
    std::vector<double> scores;
    scores.reserve(dataset[i].chunks.size());
    for (ChunkMatrix chunk : dataset[i].chunks) {
      if (zeroed) {
        for (std::size_t t = 0; t < chunk.size(); ++t) {
          chunk[t][*zeroed] = bundle.norm_mean[*zeroed];
        }
      }
      scores.push_back(PredictChunkScore(chunk, bundle));
    }
    predicted[i] = ScoreSegment(scores);
  });
  return predicted;
}

}  // namespace

double Pcc(std::span<const double> a, std::span<const double> b) {
  CheckPaired(a, b);
  if (a.size() < 2) {
    throw Error(ErrorCode::kUndefined, "correlation needs at least two samples");
  }
  const double mean_a = Mean(a);
  const double mean_b = Mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw Error(ErrorCode::kUndefined, "correlation undefined for zero variance");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double Mae(std::span<const double> a, std::span<const double> b) {
  CheckPaired(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

double MaxAbsDev(std::span<const double> a, std::span<const double> b) {
  CheckPaired(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

CorrelationMatrix MetricCorrelationMatrix(std::span<const NamedColumn> columns) {
  CorrelationMatrix m;
  const std::size_t n = columns.size();
  m.values.assign(n, std::vector<double>(n, 1.0));
  for (const auto& c : columns) m.names.push_back(c.name);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = Pcc(columns[i].values, columns[j].values);
      m.values[i][j] = r;
      m.values[j][i] = r;
    }
  }
  // A lone column still has to satisfy the variance precondition.
  if (n == 1) Pcc(columns[0].values, columns[0].values);
  return m;
}

EvalManifest ParseManifest(std::istream& in, const std::filesystem::path& base_dir) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "manifest is empty");
  const auto header = SplitCsv(line);
  const std::vector<std::string> expected = {"id", "ref_path", "dist_path", "ground_truth"};
  if (header != expected) {
    throw Error(ErrorCode::kParse,
                "manifest header must be 'id,ref_path,dist_path,ground_truth'");
  }
  EvalManifest manifest;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto fields = SplitCsv(line);
    const std::string where = "manifest line " + std::to_string(line_no);
    if (fields.size() != 4) throw Error(ErrorCode::kParse, where + ": expected 4 fields");
    ManifestEntry entry;
    entry.id = fields[0];
    if (entry.id.empty() || fields[1].empty() || fields[2].empty()) {
      throw Error(ErrorCode::kParse, where + ": id and paths must be non-empty");
    }
    auto resolve = [&](const std::string& p) {
      std::filesystem::path path(p);
      return path.is_absolute() ? path : base_dir / path;
    };
    entry.ref_path = resolve(fields[1]);
    entry.dist_path = resolve(fields[2]);
    if (!fields[3].empty()) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(fields[3], &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != fields[3].size()) {
        throw Error(ErrorCode::kParse, where + ": malformed ground_truth");
      }
      if (!(value >= kMinScore && value <= kMaxScore)) {
        throw Error(ErrorCode::kInvalidArgument, where + ": ground_truth outside [0, 100]");
      }
      entry.ground_truth = value;
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

EvalManifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  return ParseManifest(in, path.parent_path());
}

EvalReport RunEval(const EvalManifest& manifest, const ModelBundle& bundle,
                   const PipelineOptions& options) {
  for (const auto& entry : manifest.entries) {
    if (!entry.ground_truth) {
      throw Error(ErrorCode::kInvalidArgument,
                  "entry '" + entry.id + "' has no ground_truth");
    }
  }
  if (manifest.entries.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "manifest has no entries");
  }

  EvalReport report;
  for (const auto& entry : manifest.entries) {
    EntryResult result;
    result.id = entry.id;
    result.ground_truth = entry.ground_truth;
    try {
      const PairScore scored = ScorePair(entry.ref_path, entry.dist_path, bundle, options);
      result.predicted = scored.report.segment_score;
      result.chunk_scores = scored.report.chunk_scores;
      const auto& frames = scored.analysis.frame_scores;
      double ssim = 0.0, psnr = 0.0;
      for (const auto& f : frames) {
        ssim += f.ssim;
        psnr += f.psnr;
      }
      result.mean_ssim = ssim / static_cast<double>(frames.size());
      result.mean_psnr = psnr / static_cast<double>(frames.size());
    } catch (const Error& e) {
      result.error = e.what();
      report.complete = false;
    }
    report.per_entry.push_back(std::move(result));
  }
  if (!report.complete) return report;

  std::vector<double> predicted, truth, psnr, ssim;
  for (const auto& r : report.per_entry) {
    predicted.push_back(*r.predicted);
    truth.push_back(*r.ground_truth);
    psnr.push_back(r.mean_psnr);
    ssim.push_back(r.mean_ssim);
  }
  report.mae = Mae(predicted, truth);
  report.max_abs_dev = MaxAbsDev(predicted, truth);
  try {
    report.pcc = Pcc(predicted, truth);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefined) throw;
    report.pcc_note = e.what();
  }

  const bool finite = std::all_of(psnr.begin(), psnr.end(),
                                  [](double v) { return std::isfinite(v); });
  if (finite) {
    const std::vector<NamedColumn> columns = {{"psnr", psnr},
                                              {"ssim", ssim},
                                              {"predicted", predicted},
                                              {"ground_truth", truth}};
    try {
      report.metric_correlation = MetricCorrelationMatrix(columns);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUndefined) throw;
    }
  }
  return report;
}

ImportanceReport FeatureImportance(const ModelBundle& bundle,
                                   std::span<const ImportanceSample> dataset,
                                   int threads) {
  if (dataset.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "importance needs a non-empty dataset");
  }
  std::vector<double> truth;
  for (const auto& s : dataset) truth.push_back(s.ground_truth);

  ImportanceReport report;
  report.baseline_mae = Mae(SampleScores(bundle, dataset, std::nullopt, threads), truth);
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    report.zeroed_mae[k] = Mae(SampleScores(bundle, dataset, k, threads), truth);
    report.raw[k] = std::abs(report.zeroed_mae[k] - report.baseline_mae);
  }
  const auto [lo, hi] = std::minmax_element(report.raw.begin(), report.raw.end());
  const double low = *lo, high = *hi;
  if (high == low) {
    report.degenerate = true;
    report.normalized.fill(0.0);
  } else {
    for (std::size_t k = 0; k < kFeatureCount; ++k) {
      report.normalized[k] = (report.raw[k] - low) / (high - low);
    }
  }
  return report;
}

std::vector<ImportanceSample> BuildImportanceDataset(const EvalManifest& manifest,
                                                     const ModelBundle& bundle,
                                                     const PipelineOptions& options) {
  std::vector<ImportanceSample> dataset;
  for (const auto& entry : manifest.entries) {
    if (!entry.ground_truth) {
      throw Error(ErrorCode::kInvalidArgument,
                  "entry '" + entry.id + "' has no ground_truth");
    }
    auto analysis = AnalyzePair(entry.ref_path, entry.dist_path,
                                static_cast<std::size_t>(bundle.chunk_size), options);
    dataset.push_back({std::move(analysis.chunks), *entry.ground_truth});
  }
  return dataset;
}

double Median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

BenchReport BenchPipeline(const std::filesystem::path& ref,
                          const std::filesystem::path& dist, const ModelBundle& bundle,
                          int repetitions, const PipelineOptions& options) {
  if (repetitions < 1) {
    throw Error(ErrorCode::kInvalidArgument, "repetitions must be at least 1");
  }
  BenchReport report;
  report.threads = options.threads;
  report.repetitions = repetitions;
  for (int r = 0; r < repetitions; ++r) {
    const PairScore scored = ScorePair(ref, dist, bundle, options);
    report.runs.push_back({scored.report.timing, scored.report.segment_score});
    report.frames = scored.analysis.frames_analyzed;
    report.chunk_count = scored.analysis.chunks.size();
    report.segment_score = scored.report.segment_score;
  }
  auto stage = [&](double StageTiming::*field) {
    std::vector<double> v;
    for (const auto& run : report.runs) v.push_back(run.timing.*field);
    return Median(std::move(v));
  };
  report.median.texture_s = stage(&StageTiming::texture_s);
  report.median.ssim_s = stage(&StageTiming::ssim_s);
  report.median.fusion_s = stage(&StageTiming::fusion_s);
  report.median.total_s = stage(&StageTiming::total_s);
  auto fps = [&](double seconds) -> std::optional<double> {
    if (seconds <= 0.0) return std::nullopt;
    return static_cast<double>(report.frames) / seconds;
  };
  report.texture_fps = fps(report.median.texture_s);
  report.ssim_fps = fps(report.median.ssim_s);
  report.fusion_fps = fps(report.median.fusion_s);
  report.total_fps = fps(report.median.total_s);
  return report;
}

}  // namespace vqtif
