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

#include "vqtif/fusion.h"

#include <algorithm>
#include <cmath>

#include "vqtif/error.h"
#include "vqtif/parallel.h"

namespace vqtif {
namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidModel, "invalid model: " + what);
}

void CheckSize(const std::vector<double>& v, std::size_t expected,
               const std::string& what) {
  if (v.size() != expected) {
    Invalid(what + " has " + std::to_string(v.size()) + " values, expected " +
            std::to_string(expected));
  }
  for (double x : v) {
    if (!std::isfinite(x)) Invalid(what + " contains a non-finite value");
  }
}

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void ValidateModel(const ModelBundle& bundle) {
  if (bundle.format_version != 1) {
    Invalid("unknown format_version " + std::to_string(bundle.format_version));
  }
  if (bundle.chunk_size < 1) Invalid("f_c must be at least 1");
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    if (bundle.feature_order[j] != kFeatureOrder[j]) {
      Invalid("feature_order must be [r_E, r_h, r_L, ssim]");
    }
    if (!std::isfinite(bundle.norm_mean[j])) Invalid("norm_mean is not finite");
    if (!(bundle.norm_std[j] > 0.0) || !std::isfinite(bundle.norm_std[j])) {
      Invalid("norm_std entries must be positive");
    }
  }
  if (bundle.input_dim != static_cast<int>(kFeatureCount)) {
    Invalid("input_dim must be " + std::to_string(kFeatureCount));
  }
  if (bundle.hidden_dim < 1) Invalid("hidden_dim must be at least 1");
  const auto hidden = static_cast<std::size_t>(bundle.hidden_dim);
  for (std::size_t g = 0; g < kGateCount; ++g) {
    const std::string name(kGateNames[g]);
    CheckSize(bundle.gates[g].input, hidden * kFeatureCount, "W." + name);
    CheckSize(bundle.gates[g].recurrent, hidden * hidden, "U." + name);
    CheckSize(bundle.gates[g].bias, hidden, "b." + name);
  }
  CheckSize(bundle.dense_weight, hidden, "dense.weight");
  if (!std::isfinite(bundle.dense_bias)) Invalid("dense.bias is not finite");
  if (bundle.feature_definitions != FeatureDefinitions{}) {
    Invalid("feature definitions (luminance '" + bundle.feature_definitions.luminance +
            "', ssim '" + bundle.feature_definitions.ssim +
            "') do not match this build");
  }
}

ModelBundle ConstantModel(int hidden_dim, int chunk_size, double dense_bias) {
  ModelBundle bundle;
  bundle.chunk_size = chunk_size;
  bundle.hidden_dim = hidden_dim;
  const auto hidden = static_cast<std::size_t>(hidden_dim);
  for (auto& gate : bundle.gates) {
    gate.input.assign(hidden * kFeatureCount, 0.0);
    gate.recurrent.assign(hidden * hidden, 0.0);
    gate.bias.assign(hidden, 0.0);
  }
  bundle.dense_weight.assign(hidden, 0.0);
  bundle.dense_bias = dense_bias;
  bundle.provenance = "constant model";
  return bundle;
}

std::vector<ResidualTriple> ComputeResiduals(std::span<const FrameFeatures> original,
                                             std::span<const FrameFeatures> reconstructed) {
  if (original.size() != reconstructed.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "feature lists differ in length: " + std::to_string(original.size()) +
                    " vs " + std::to_string(reconstructed.size()));
  }
  std::vector<ResidualTriple> residuals(original.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    const FrameFeatures& a = original[i];
    const FrameFeatures& b = reconstructed[i];
    if (a.frame_index != b.frame_index) {
      throw Error(ErrorCode::kLengthMismatch,
                  "frame index mismatch at position " + std::to_string(i));
    }
    residuals[i] = {a.texture_energy - b.texture_energy,
                    a.temporal_gradient - b.temporal_gradient,
                    a.luminance - b.luminance, a.frame_index};
  }
  return residuals;
}

ChunkMatrix AssembleChunkMatrix(std::span<const ResidualTriple> residuals,
                                std::span<const double> ssim, std::size_t chunk_size) {
  if (residuals.size() != chunk_size || ssim.size() != chunk_size) {
    throw Error(ErrorCode::kLengthMismatch,
                "chunk needs " + std::to_string(chunk_size) + " rows, got " +
                    std::to_string(residuals.size()) + " residuals and " +
                    std::to_string(ssim.size()) + " SSIM values");
  }
  std::vector<FeatureRow> rows(chunk_size);
  for (std::size_t t = 0; t < chunk_size; ++t) {
    rows[t] = {residuals[t].energy, residuals[t].gradient, residuals[t].luminance, ssim[t]};
  }
  return ChunkMatrix(std::move(rows));
}

ChunkMatrix NormalizeInputs(const ChunkMatrix& m, const ModelBundle& bundle) {
  ChunkMatrix out = m;
  for (std::size_t t = 0; t < out.size(); ++t) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      out[t][j] = (out[t][j] - bundle.norm_mean[j]) / bundle.norm_std[j];
    }
  }
  return out;
}

std::vector<double> LstmForward(const ChunkMatrix& normalized, const ModelBundle& bundle) {
  const auto hidden = static_cast<std::size_t>(bundle.hidden_dim);
  std::vector<double> h(hidden, 0.0), c(hidden, 0.0);
  std::array<std::vector<double>, kGateCount> z;
  for (auto& v : z) v.resize(hidden);

  for (std::size_t t = 0; t < normalized.size(); ++t) {
    const FeatureRow& x = normalized[t];
    for (std::size_t g = 0; g < kGateCount; ++g) {
      const LstmGateWeights& gate = bundle.gates[g];
      for (std::size_t u = 0; u < hidden; ++u) {
        const double* w = gate.input.data() + u * kFeatureCount;
        double acc = gate.bias[u];
        for (std::size_t j = 0; j < kFeatureCount; ++j) acc += w[j] * x[j];
        const double* r = gate.recurrent.data() + u * hidden;
        for (std::size_t k = 0; k < hidden; ++k) acc += r[k] * h[k];
        z[g][u] = acc;
      }
    }
    for (std::size_t u = 0; u < hidden; ++u) {
      const double in = Sigmoid(z[kInputGate][u]);
      const double forget = Sigmoid(z[kForgetGate][u]);
      const double candidate = std::tanh(z[kCandidateGate][u]);
      const double out = Sigmoid(z[kOutputGate][u]);
      c[u] = forget * c[u] + in * candidate;
      h[u] = out * std::tanh(c[u]);
    }
  }
  return h;
}

double PredictChunkScore(const ChunkMatrix& m, const ModelBundle& bundle) {
  if (m.size() != static_cast<std::size_t>(bundle.chunk_size)) {
    throw Error(ErrorCode::kLengthMismatch,
                "chunk has " + std::to_string(m.size()) + " rows, model expects " +
                    std::to_string(bundle.chunk_size));
  }
  const std::vector<double> h = LstmForward(NormalizeInputs(m, bundle), bundle);
  double score = bundle.dense_bias;
  for (std::size_t u = 0; u < h.size(); ++u) score += bundle.dense_weight[u] * h[u];
  if (std::isnan(score)) {
    throw Error(ErrorCode::kInvalidArgument, "model produced a NaN score");
  }
  return std::clamp(score, kMinScore, kMaxScore);
}

std::vector<double> PredictChunkScores(std::span<const ChunkMatrix> chunks,
                                       const ModelBundle& bundle, int threads) {
  std::vector<double> scores(chunks.size());
  ParallelFor(chunks.size(), threads,
              [&](std::size_t i) { scores[i] = PredictChunkScore(chunks[i], bundle); });
  return scores;
}

double ScoreSegment(std::span<const double> chunk_scores) {
  if (chunk_scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot score a segment with no chunks");
  }
  double sum = 0.0;
  for (double s : chunk_scores) sum += s;
  return sum / static_cast<double>(chunk_scores.size());
}

}  // namespace vqtif
