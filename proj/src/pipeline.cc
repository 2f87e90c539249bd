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

#include "vqtif/pipeline.h"

#include <chrono>

#include "vqtif/error.h"

namespace vqtif {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Supplies the next run of frames from a pair of streams.
class PairFeed {
 public:
  virtual ~PairFeed() = default;
  virtual void Next(std::size_t count, std::vector<Frame>& ref,
                    std::vector<Frame>& dist) = 0;
};

class FileFeed : public PairFeed {
 public:
  FileFeed(FrameSource& ref, FrameSource& dist) : ref_(ref), dist_(dist) {}

  void Next(std::size_t count, std::vector<Frame>& ref,
            std::vector<Frame>& dist) override {
    ref.clear();
    dist.clear();
    for (std::size_t i = 0; i < count; ++i) {
      auto a = ref_.ReadFrame();
      auto b = dist_.ReadFrame();
      if (!a || !b) {
        throw Error(ErrorCode::kTruncated, "stream ended before the frame count");
      }
      ref.push_back(std::move(*a));
      dist.push_back(std::move(*b));
    }
  }

 private:
  FrameSource& ref_;
  FrameSource& dist_;
};

class MemoryFeed : public PairFeed {
 public:
  MemoryFeed(std::span<const Frame> ref, std::span<const Frame> dist)
      : ref_(ref), dist_(dist) {}

  void Next(std::size_t count, std::vector<Frame>& ref,
            std::vector<Frame>& dist) override {
    ref.assign(ref_.begin() + pos_, ref_.begin() + pos_ + count);
    dist.assign(dist_.begin() + pos_, dist_.begin() + pos_ + count);
    pos_ += count;
  }

 private:
  std::span<const Frame> ref_;
  std::span<const Frame> dist_;
  std::size_t pos_ = 0;
};

PairAnalysis Analyze(PairFeed& feed, const StreamInfo& info, std::size_t chunk_size,
                     const PipelineOptions& options, Clock::time_point start) {
  const int threads = std::max(1, options.threads);
  const int half = std::max(1, threads / 2);

  PairAnalysis analysis;
  analysis.info = info;
  analysis.chunk_size = chunk_size;
  analysis.plan = ChunkPlan(static_cast<std::size_t>(*info.frame_count), chunk_size);

  TextureAnalyzer original_analyzer;
  TextureAnalyzer reconstructed_analyzer;
  std::vector<Frame> ref_frames, dist_frames;
  std::size_t next_position = 0;

  for (const auto& chunk_positions : analysis.plan) {
    const std::size_t last = chunk_positions.back();
    const std::size_t fresh = last + 1 - next_position;
    feed.Next(fresh, ref_frames, dist_frames);
    next_position = last + 1;

    auto t0 = Clock::now();
    std::vector<FrameFeatures> original, reconstructed;
    ParallelFor(2, threads >= 2 ? 2 : 1, [&](std::size_t side) {
      if (side == 0) {
        original = original_analyzer.Process(ref_frames, half);
      } else {
        reconstructed = reconstructed_analyzer.Process(dist_frames, half);
      }
    });
    analysis.original.insert(analysis.original.end(), original.begin(), original.end());
    analysis.reconstructed.insert(analysis.reconstructed.end(), reconstructed.begin(),
                                  reconstructed.end());
    analysis.timing.texture_s += SecondsSince(t0);

    t0 = Clock::now();
    const auto scores = SegmentPairScores(ref_frames, dist_frames, threads);
    analysis.frame_scores.insert(analysis.frame_scores.end(), scores.begin(),
                                 scores.end());
    analysis.timing.ssim_s += SecondsSince(t0);
  }
  analysis.frames_analyzed = static_cast<int64_t>(next_position);

  const auto residuals = ComputeResiduals(analysis.original, analysis.reconstructed);
  for (const auto& chunk_positions : analysis.plan) {
    std::vector<ResidualTriple> rows;
    std::vector<double> ssim;
    for (std::size_t pos : chunk_positions) {
      rows.push_back(residuals[pos]);
      ssim.push_back(analysis.frame_scores[pos].ssim);
    }
    analysis.chunks.push_back(AssembleChunkMatrix(rows, ssim, chunk_size));
  }
  analysis.timing.total_s = SecondsSince(start);
  return analysis;
}

}  // namespace

PairAnalysis AnalyzePair(const std::filesystem::path& ref,
                         const std::filesystem::path& dist, std::size_t chunk_size,
                         const PipelineOptions& options) {
  const auto start = Clock::now();
  auto ref_source = OpenVideo(ref, options.raw);
  auto dist_source = OpenVideo(dist, options.raw);
  ValidatePair(ref_source->info(), dist_source->info());
  if (*ref_source->info().frame_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "'" + ref.string() + "' has no frames");
  }
  FileFeed feed(*ref_source, *dist_source);
  return Analyze(feed, ref_source->info(), chunk_size, options, start);
}

PairAnalysis AnalyzeFrames(std::span<const Frame> ref, std::span<const Frame> dist,
                           std::size_t chunk_size, const PipelineOptions& options) {
  const auto start = Clock::now();
  if (ref.size() != dist.size()) {
    throw Error(ErrorCode::kFrameCountMismatch,
                "frame-count mismatch: reference " + std::to_string(ref.size()) +
                    " vs distorted " + std::to_string(dist.size()));
  }
  if (ref.empty()) throw Error(ErrorCode::kInvalidArgument, "no frames to analyze");
  StreamInfo info;
  info.width = ref.front().width();
  info.height = ref.front().height();
  info.frame_count = static_cast<int64_t>(ref.size());
  StreamInfo dist_info = info;
  dist_info.width = dist.front().width();
  dist_info.height = dist.front().height();
  ValidatePair(info, dist_info);
  MemoryFeed feed(ref, dist);
  return Analyze(feed, info, chunk_size, options, start);
}

ScoreReport ScoreAnalysis(const PairAnalysis& analysis, const ModelBundle& bundle,
                          int threads) {
  const auto t0 = Clock::now();
  ScoreReport report;
  report.chunk_scores = PredictChunkScores(analysis.chunks, bundle, threads);
  report.segment_score = ScoreSegment(report.chunk_scores);
  report.timing = analysis.timing;
  report.timing.fusion_s = SecondsSince(t0);
  report.timing.total_s += report.timing.fusion_s;
  return report;
}

PairScore ScorePair(const std::filesystem::path& ref, const std::filesystem::path& dist,
                    const ModelBundle& bundle, const PipelineOptions& options) {
  PairScore result;
  result.analysis = AnalyzePair(ref, dist, static_cast<std::size_t>(bundle.chunk_size),
                                options);
  result.report = ScoreAnalysis(result.analysis, bundle, options.threads);
  return result;
}

}  // namespace vqtif
