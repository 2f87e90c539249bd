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

#ifndef VQTIF_REPORT_H_
#define VQTIF_REPORT_H_

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "vqtif/eval.h"
#include "vqtif/fusion.h"
#include "vqtif/pipeline.h"

namespace vqtif {

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view content);

// Finite numbers as-is; infinities as "inf"/"-inf"; NaN as null.
nlohmann::json JsonNumber(double value);

nlohmann::json TimingToJson(const StageTiming& timing);

// {chunks: [...], segment: x, timing: {texture_s, ssim_s, fusion_s, total_s}}
nlohmann::json ScoreReportToJson(const ScoreReport& report, bool include_timing = true);
nlohmann::json EvalReportToJson(const EvalReport& report);
nlohmann::json ImportanceReportToJson(const ImportanceReport& report);
nlohmann::json BenchReportToJson(const BenchReport& report);

// Flat `id,predicted,ground_truth` for external plotting.
void WriteEvalCsv(std::ostream& out, const EvalReport& report);

// `pair_id,chunk,frame,r_E,r_h,r_L,ssim`, one row per chunk row, full
// precision. Padded rows repeat the source frame index.
void WriteAssembledCsv(std::ostream& out, std::string_view pair_id,
                       const PairAnalysis& analysis);

// Shortest round-trip decimal form.
std::string FormatDouble(double value);

}  // namespace vqtif

#endif  // VQTIF_REPORT_H_
