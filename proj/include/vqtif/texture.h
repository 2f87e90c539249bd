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

#ifndef VQTIF_TEXTURE_H_
#define VQTIF_TEXTURE_H_

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "vqtif/video_io.h"

namespace vqtif {

inline constexpr int kBlockSize = 32;
inline constexpr int kBlockArea = kBlockSize * kBlockSize;

// Row-major 32x32 grid; index [row * 32 + col].
using BlockSamples = std::array<double, kBlockArea>;
using BlockCoefficients = std::array<double, kBlockArea>;

// Orthonormal 2D DCT-II. coeffs[i * 32 + j] holds vertical frequency i and
// horizontal frequency j.
BlockCoefficients Dct2d32(const BlockSamples& block);

// Weighted sum of AC coefficient magnitudes,
//   sum_{(i,j) != (0,0)} exp(|(i*j / 32^2)^2 - 1|) * |c(i,j)|.
double BlockTextureEnergy(const BlockCoefficients& coeffs);

// Per-block energies of one frame over complete 32x32 blocks.
struct BlockGrid {
  int blocks_x = 0;
  int blocks_y = 0;
  std::vector<double> energies;  // row-major, blocks_x * blocks_y

  std::size_t block_count() const {
    return static_cast<std::size_t>(blocks_x) * blocks_y;
  }
};

struct FrameFeatures {
  double texture_energy = 0.0;     // E, per-pixel normalized
  double temporal_gradient = 0.0;  // h, same units as E; 0 for the first frame
  double luminance = 0.0;          // L, mean luma over complete blocks
  int64_t frame_index = 0;
};

struct FrameAnalysis {
  FrameFeatures features;
  BlockGrid grid;
};

// Computes (E, h, L) for one frame. `prev` is the previous frame's grid, or
// null for the first frame of a stream. Throws kGeometryMismatch if the grids
// differ in shape.
FrameAnalysis AnalyzeFrame(const Frame& frame, const BlockGrid* prev,
                           int threads = 1);

// Threads the temporal gradient through consecutive calls, so a long stream
// can be fed in pieces. Output is independent of the thread count.
class TextureAnalyzer {
 public:
  std::vector<FrameFeatures> Process(std::span<const Frame> frames, int threads);
  void Reset() { prev_.reset(); }

 private:
  std::optional<BlockGrid> prev_;
};

// One FrameFeatures per input frame, in order.
std::vector<FrameFeatures> ExtractSegmentFeatures(std::span<const Frame> frames,
                                                  int threads = 1);

// `frame,E,h,L` with six decimals.
void WriteFeatureCsv(std::ostream& out, std::span<const FrameFeatures> features);

}  // namespace vqtif

#endif  // VQTIF_TEXTURE_H_
