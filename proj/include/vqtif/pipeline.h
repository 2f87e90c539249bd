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

#ifndef VQTIF_PIPELINE_H_
#define VQTIF_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <vector>

#include "vqtif/fusion.h"
#include "vqtif/metrics.h"
#include "vqtif/parallel.h"
#include "vqtif/texture.h"
#include "vqtif/video_io.h"

namespace vqtif {

struct PipelineOptions {
  int threads = DefaultThreadCount();
  RawGeometry raw;
};

// Everything the fusion model consumes for one original/reconstructed pair.
struct PairAnalysis {
  StreamInfo info;
  std::size_t chunk_size = 0;
  int64_t frames_analyzed = 0;
  // Per analyzed source frame, in order.
  std::vector<FrameFeatures> original;
  std::vector<FrameFeatures> reconstructed;
  std::vector<FramePairScore> frame_scores;
  // Source positions making up each chunk.
  std::vector<std::vector<std::size_t>> plan;
  std::vector<ChunkMatrix> chunks;
  // texture_s and ssim_s are filled; total_s covers reading and analysis.
  StageTiming timing;
};

// Reads both streams chunk by chunk and assembles the chunk matrices. The two
// texture passes run concurrently with half the thread budget each. Frames
// past the last complete chunk are never decoded.
PairAnalysis AnalyzePair(const std::filesystem::path& ref,
                         const std::filesystem::path& dist, std::size_t chunk_size,
                         const PipelineOptions& options = {});

// Same analysis over frames already in memory.
PairAnalysis AnalyzeFrames(std::span<const Frame> ref, std::span<const Frame> dist,
                           std::size_t chunk_size, const PipelineOptions& options = {});

struct PairScore {
  PairAnalysis analysis;
  ScoreReport report;
};

// Full pipeline: analysis, then LSTM fusion per chunk and segment averaging.
PairScore ScorePair(const std::filesystem::path& ref, const std::filesystem::path& dist,
                    const ModelBundle& bundle, const PipelineOptions& options = {});

// Fusion stage alone, with timing folded into the analysis totals.
ScoreReport ScoreAnalysis(const PairAnalysis& analysis, const ModelBundle& bundle,
                          int threads);

}  // namespace vqtif

#endif  // VQTIF_PIPELINE_H_
