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

#ifndef VQTIF_FUSION_H_
#define VQTIF_FUSION_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vqtif/texture.h"

namespace vqtif {

inline constexpr std::size_t kFeatureCount = 4;
inline constexpr std::array<std::string_view, kFeatureCount> kFeatureOrder = {
    "r_E", "r_h", "r_L", "ssim"};
inline constexpr int kReferenceHiddenDim = 200;
inline constexpr int kDefaultChunkSize = 8;
inline constexpr double kMinScore = 0.0;
inline constexpr double kMaxScore = 100.0;

// Original minus reconstructed, per frame.
struct ResidualTriple {
  double energy = 0.0;
  double gradient = 0.0;
  double luminance = 0.0;
  int64_t frame_index = 0;
};

using FeatureRow = std::array<double, kFeatureCount>;

// chunk_size rows of [r_E, r_h, r_L, ssim].
class ChunkMatrix {
 public:
  ChunkMatrix() = default;
  explicit ChunkMatrix(std::vector<FeatureRow> rows) : rows_(std::move(rows)) {}

  std::size_t size() const { return rows_.size(); }
  const FeatureRow& operator[](std::size_t t) const { return rows_[t]; }
  FeatureRow& operator[](std::size_t t) { return rows_[t]; }
  std::span<const FeatureRow> rows() const { return rows_; }

  bool operator==(const ChunkMatrix&) const = default;

 private:
  std::vector<FeatureRow> rows_;
};

enum Gate : std::size_t { kInputGate = 0, kForgetGate, kCandidateGate, kOutputGate };
inline constexpr std::size_t kGateCount = 4;
inline constexpr std::array<std::string_view, kGateCount> kGateNames = {
    "input", "forget", "candidate", "output"};

struct LstmGateWeights {
  std::vector<double> input;      // hidden x input_dim, row-major
  std::vector<double> recurrent;  // hidden x hidden, row-major
  std::vector<double> bias;       // hidden
};

// How the inputs the model was trained on were computed. Inference refuses a
// model whose definitions differ from this build's.
struct FeatureDefinitions {
  std::string luminance = "block_pixel_mean";
  std::string ssim = "gaussian11_sigma1.5_valid_no_prefilter";

  bool operator==(const FeatureDefinitions&) const = default;
};

// Single-layer unidirectional LSTM (no peepholes) read out through one dense
// unit. Immutable after load; share freely across threads.
struct ModelBundle {
  int format_version = 1;
  int chunk_size = kDefaultChunkSize;
  std::array<std::string, kFeatureCount> feature_order = {"r_E", "r_h", "r_L", "ssim"};
  std::array<double, kFeatureCount> norm_mean = {0, 0, 0, 0};
  std::array<double, kFeatureCount> norm_std = {1, 1, 1, 1};
  int input_dim = static_cast<int>(kFeatureCount);
  int hidden_dim = 0;
  std::array<LstmGateWeights, kGateCount> gates;
  std::vector<double> dense_weight;
  double dense_bias = 0.0;
  FeatureDefinitions feature_definitions;
  std::string provenance;
};

// Throws kInvalidModel on any broken shape, order or positivity invariant.
void ValidateModel(const ModelBundle& bundle);

// All LSTM and dense weights zero; the prediction is clamp(dense_bias).
ModelBundle ConstantModel(int hidden_dim, int chunk_size, double dense_bias);

// Residuals between per-frame features of the original and the reconstruction.
// Frame indices must line up.
std::vector<ResidualTriple> ComputeResiduals(std::span<const FrameFeatures> original,
                                             std::span<const FrameFeatures> reconstructed);

ChunkMatrix AssembleChunkMatrix(std::span<const ResidualTriple> residuals,
                                std::span<const double> ssim, std::size_t chunk_size);

// Per-column z-score with the bundle's frozen statistics.
ChunkMatrix NormalizeInputs(const ChunkMatrix& m, const ModelBundle& bundle);

// Final hidden state after running the recurrence over all rows of an
// already-normalized matrix, starting from h = c = 0.
std::vector<double> LstmForward(const ChunkMatrix& normalized, const ModelBundle& bundle);

// normalize -> LSTM -> dense -> clamp to [0, 100].
double PredictChunkScore(const ChunkMatrix& m, const ModelBundle& bundle);

// Chunk scores in chunk order; parallel across chunks.
std::vector<double> PredictChunkScores(std::span<const ChunkMatrix> chunks,
                                       const ModelBundle& bundle, int threads = 1);

// Arithmetic mean; throws on an empty list.
double ScoreSegment(std::span<const double> chunk_scores);

struct StageTiming {
  double texture_s = 0.0;
  double ssim_s = 0.0;
  double fusion_s = 0.0;
  double total_s = 0.0;
};

struct ScoreReport {
  std::vector<double> chunk_scores;
  double segment_score = 0.0;
  StageTiming timing;
};

}  // namespace vqtif

#endif  // VQTIF_FUSION_H_
