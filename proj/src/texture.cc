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

#include "vqtif/texture.h"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "vqtif/error.h"
#include "vqtif/parallel.h"

namespace vqtif {
namespace {

const std::array<double, kBlockArea>& EnergyWeights() {
  static const std::array<double, kBlockArea> weights = [] {
    std::array<double, kBlockArea> w{};
    const double area = static_cast<double>(kBlockSize) * kBlockSize;
    for (int i = 0; i < kBlockSize; ++i) {
      for (int j = 0; j < kBlockSize; ++j) {
        const double ratio = (i * j) / area;
        w[i * kBlockSize + j] = std::exp(std::abs(ratio * ratio - 1.0));
      }
    }
    w[0] = 0.0;  // DC carries no texture
    return w;
  }();
  return weights;
}

// Energies of every block in block row `by`, plus the row's luma sum.
void AnalyzeBlockRow(const Frame& frame, int by, int blocks_x, double* energies,
                     uint64_t* luma_sum) {
  BlockSamples samples;
  uint64_t sum = 0;
  for (int bx = 0; bx < blocks_x; ++bx) {
    for (int y = 0; y < kBlockSize; ++y) {
      const auto row = frame.row(by * kBlockSize + y).subspan(bx * kBlockSize, kBlockSize);
      for (int x = 0; x < kBlockSize; ++x) {
        samples[y * kBlockSize + x] = row[x];
        sum += row[x];
      }
    }
    energies[bx] = BlockTextureEnergy(Dct2d32(samples));
  }
  *luma_sum = sum;
}

struct RawGrid {
  BlockGrid grid;
  std::vector<uint64_t> row_luma;
};

RawGrid EmptyGrid(const Frame& frame) {
  RawGrid raw;
  raw.grid.blocks_x = frame.width() / kBlockSize;
  raw.grid.blocks_y = frame.height() / kBlockSize;
  if (raw.grid.blocks_x == 0 || raw.grid.blocks_y == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame " + std::to_string(frame.index()) +
                    " has no complete 32x32 block");
  }
  raw.grid.energies.assign(raw.grid.block_count(), 0.0);
  raw.row_luma.assign(raw.grid.blocks_y, 0);
  return raw;
}

// Fills the grids of all frames, parallel over (frame, block row) items.
std::vector<RawGrid> AnalyzeGrids(std::span<const Frame> frames, int threads) {
  std::vector<RawGrid> grids;
  grids.reserve(frames.size());
  std::vector<std::pair<std::size_t, int>> items;
  for (std::size_t f = 0; f < frames.size(); ++f) {
    grids.push_back(EmptyGrid(frames[f]));
    for (int by = 0; by < grids.back().grid.blocks_y; ++by) items.emplace_back(f, by);
  }
  ParallelFor(items.size(), threads, [&](std::size_t i) {
    const auto [f, by] = items[i];
    RawGrid& raw = grids[f];
    AnalyzeBlockRow(frames[f], by, raw.grid.blocks_x,
                    raw.grid.energies.data() + static_cast<std::size_t>(by) * raw.grid.blocks_x,
                    &raw.row_luma[by]);
  });
  return grids;
}

FrameFeatures Reduce(const RawGrid& raw, const BlockGrid* prev, int64_t index) {
  const BlockGrid& grid = raw.grid;
  if (prev != nullptr &&
      (prev->blocks_x != grid.blocks_x || prev->blocks_y != grid.blocks_y ||
       prev->energies.size() != grid.energies.size())) {
    throw Error(ErrorCode::kGeometryMismatch,
                "block grid of frame " + std::to_string(index) +
                    " does not match the previous frame");
  }
  const double norm = static_cast<double>(grid.block_count()) * kBlockArea;

  FrameFeatures features;
  features.frame_index = index;
  double energy = 0.0;
  for (double e : grid.energies) energy += e;
  features.texture_energy = energy / norm;

  if (prev != nullptr) {
    double gradient = 0.0;
    for (std::size_t k = 0; k < grid.energies.size(); ++k) {
      gradient += std::abs(grid.energies[k] - prev->energies[k]);
    }
    features.temporal_gradient = gradient / norm;
  }

  const uint64_t luma = std::accumulate(raw.row_luma.begin(), raw.row_luma.end(),
                                        uint64_t{0});
  features.luminance = static_cast<double>(luma) / norm;
  return features;
}

}  // namespace

double BlockTextureEnergy(const BlockCoefficients& coeffs) {
  const auto& weights = EnergyWeights();
  double energy = 0.0;
  for (int k = 1; k < kBlockArea; ++k) energy += weights[k] * std::abs(coeffs[k]);
  return energy;
}

FrameAnalysis AnalyzeFrame(const Frame& frame, const BlockGrid* prev, int threads) {
  auto grids = AnalyzeGrids(std::span<const Frame>(&frame, 1), threads);
  FrameAnalysis analysis;
  analysis.features = Reduce(grids[0], prev, frame.index());
  analysis.grid = std::move(grids[0].grid);
  return analysis;
}

std::vector<FrameFeatures> TextureAnalyzer::Process(std::span<const Frame> frames,
                                                    int threads) {
  auto grids = AnalyzeGrids(frames, threads);
  std::vector<FrameFeatures> features;
  features.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    features.push_back(Reduce(grids[f], prev_ ? &*prev_ : nullptr, frames[f].index()));
    prev_ = std::move(grids[f].grid);
  }
  return features;
}

std::vector<FrameFeatures> ExtractSegmentFeatures(std::span<const Frame> frames,
                                                  int threads) {
  if (frames.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no frames to analyze");
  }
  TextureAnalyzer analyzer;
  return analyzer.Process(frames, threads);
}

void WriteFeatureCsv(std::ostream& out, std::span<const FrameFeatures> features) {
  out << "frame,E,h,L\n";
  char line[128];
  for (const FrameFeatures& f : features) {
    std::snprintf(line, sizeof(line), "%lld,%.6f,%.6f,%.6f\n",
                  static_cast<long long>(f.frame_index), f.texture_energy,
                  f.temporal_gradient, f.luminance);
    out << line;
  }
}

}  // namespace vqtif
