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

#include "vqtif/report.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <unistd.h>

#include "vqtif/error.h"

namespace vqtif {

using nlohmann::json;

void WriteFileAtomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw Error(ErrorCode::kIo, "cannot replace '" + path.string() + "': " + ec.message());
  }
}

json JsonNumber(double value) {
  if (std::isnan(value)) return nullptr;
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

namespace {

json Optional(const std::optional<double>& value) {
  return value ? JsonNumber(*value) : json(nullptr);
}

}  // namespace

json TimingToJson(const StageTiming& timing) {
  return {{"texture_s", timing.texture_s},
          {"ssim_s", timing.ssim_s},
          {"fusion_s", timing.fusion_s},
          {"total_s", timing.total_s}};
}

json ScoreReportToJson(const ScoreReport& report, bool include_timing) {
  json doc;
  doc["chunks"] = report.chunk_scores;
  doc["segment"] = report.segment_score;
  if (include_timing) doc["timing"] = TimingToJson(report.timing);
  return doc;
}

json EvalReportToJson(const EvalReport& report) {
  json entries = json::array();
  for (const auto& e : report.per_entry) {
    json item;
    item["id"] = e.id;
    item["predicted"] = Optional(e.predicted);
    item["ground_truth"] = Optional(e.ground_truth);
    if (e.error.empty()) {
      item["mean_ssim"] = JsonNumber(e.mean_ssim);
      item["mean_psnr"] = JsonNumber(e.mean_psnr);
      item["chunks"] = e.chunk_scores;
    } else {
      item["error"] = e.error;
    }
    entries.push_back(std::move(item));
  }
  json doc;
  doc["complete"] = report.complete;
  doc["pcc"] = Optional(report.pcc);
  if (!report.pcc_note.empty()) doc["pcc_note"] = report.pcc_note;
  doc["mae"] = Optional(report.mae);
  doc["max_abs_dev"] = Optional(report.max_abs_dev);
  doc["per_entry"] = std::move(entries);
  if (report.metric_correlation) {
    doc["metric_correlation"] = {{"names", report.metric_correlation->names},
                                 {"matrix", report.metric_correlation->values}};
  } else {
    doc["metric_correlation"] = nullptr;
  }
  return doc;
}

json ImportanceReportToJson(const ImportanceReport& report) {
  json features = json::array();
  for (std::size_t k = 0; k < kFeatureCount; ++k) {
    features.push_back({{"feature", std::string(kFeatureOrder[k])},
                        {"zeroed_mae", report.zeroed_mae[k]},
                        {"raw", report.raw[k]},
                        {"normalized", report.normalized[k]}});
  }
  return {{"baseline_mae", report.baseline_mae},
          {"degenerate", report.degenerate},
          {"features", std::move(features)}};
}

json BenchReportToJson(const BenchReport& report) {
  json runs = json::array();
  for (const auto& run : report.runs) {
    runs.push_back({{"timing", TimingToJson(run.timing)}, {"segment", run.segment_score}});
  }
  return {{"threads", report.threads},
          {"repetitions", report.repetitions},
          {"frames", report.frames},
          {"chunks", report.chunk_count},
          {"segment", report.segment_score},
          {"timing", TimingToJson(report.median)},
          {"fps",
           {{"texture", Optional(report.texture_fps)},
            {"ssim", Optional(report.ssim_fps)},
            {"fusion", Optional(report.fusion_fps)},
            {"total", Optional(report.total_fps)}}},
          {"runs", std::move(runs)}};
}

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void WriteEvalCsv(std::ostream& out, const EvalReport& report) {
  out << "id,predicted,ground_truth\n";
  for (const auto& e : report.per_entry) {
    out << e.id << ',' << (e.predicted ? FormatDouble(*e.predicted) : "") << ','
        << (e.ground_truth ? FormatDouble(*e.ground_truth) : "") << '\n';
  }
}

void WriteAssembledCsv(std::ostream& out, std::string_view pair_id,
                       const PairAnalysis& analysis) {
  out << "pair_id,chunk,frame,r_E,r_h,r_L,ssim\n";
  for (std::size_t c = 0; c < analysis.chunks.size(); ++c) {
    const ChunkMatrix& m = analysis.chunks[c];
    for (std::size_t t = 0; t < m.size(); ++t) {
      out << pair_id << ',' << c << ','
          << analysis.original[analysis.plan[c][t]].frame_index;
      for (double v : m[t]) out << ',' << FormatDouble(v);
      out << '\n';
    }
  }
}

}  // namespace vqtif
