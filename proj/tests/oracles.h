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

// Direct-definition reference implementations used only by tests. None of
// these share code paths with the library routines they check.

#ifndef VQTIF_TESTS_ORACLES_H_
#define VQTIF_TESTS_ORACLES_H_

#include <array>
#include <vector>

#include "vqtif/fusion.h"
#include "vqtif/video_io.h"

namespace vqtif::oracle {

// X(u, v) = a(u) a(v) sum_{x,y} f(x, y) cos((2x+1)u pi / 64) cos((2y+1)v pi / 64),
// O(N^4). Input and output row-major, [row * 32 + col], u the row frequency.
std::array<double, 1024> NaiveDct32(const std::array<double, 1024>& block);

struct Features {
  double energy = 0.0;
  double gradient = 0.0;
  double luminance = 0.0;
};

// Per-block loop over complete 32x32 blocks using NaiveDct32 and the energy
// weighting evaluated inline. `prev` may be null.
Features NaiveFrameFeatures(const Frame& frame, const Frame* prev);

// Full 2D 11x11 Gaussian window evaluated per position (no separable passes).
double NaiveSsim(const Frame& a, const Frame& b);

// Step-by-step scalar recurrence on an already-normalized matrix.
std::vector<double> ScalarLstm(const std::vector<std::array<double, 4>>& x,
                               const ModelBundle& bundle);

// Normalization, ScalarLstm, dense readout and clamp.
double ScalarPredict(const ChunkMatrix& raw, const ModelBundle& bundle);

}  // namespace vqtif::oracle

#endif  // VQTIF_TESTS_ORACLES_H_
