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

#ifndef VQTIF_METRICS_H_
#define VQTIF_METRICS_H_

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "vqtif/video_io.h"

namespace vqtif {

inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimC1 = (0.01 * 255) * (0.01 * 255);
inline constexpr double kSsimC2 = (0.03 * 255) * (0.03 * 255);

// PSNR of identical planes.
inline constexpr double kPsnrInfinite = std::numeric_limits<double>::infinity();

struct FramePairScore {
  double ssim = 1.0;
  double psnr = kPsnrInfinite;
  int64_t frame_index = 0;
};

// Normalized 11-tap Gaussian, sigma 1.5. The 2D window is its outer product.
const std::array<double, kSsimWindow>& SsimKernel();

// Mean single-scale SSIM over all valid (fully overlapping) window positions
// of the luma plane. Exactly symmetric in its arguments; the result does not
// depend on `threads`.
double FrameSsim(const Frame& ref, const Frame& dist, int threads = 1);

// 10 log10(255^2 / MSE); kPsnrInfinite when the planes are identical.
double FramePsnr(const Frame& ref, const Frame& dist);

// One score per frame pair, in input order.
std::vector<FramePairScore> SegmentPairScores(std::span<const Frame> ref,
                                              std::span<const Frame> dist,
                                              int threads = 1);

}  // namespace vqtif

#endif  // VQTIF_METRICS_H_
