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

// Separable 32-point DCT-II using the even/odd recursive split: the even
// outputs of an N-point transform are the N/2-point transform of the folded
// sums x[n] + x[N-1-n], the odd outputs a dense N/2 x N/2 product over the
// folded differences.

#include <cmath>
#include <numbers>

#include "vqtif/texture.h"

namespace vqtif {
namespace {

constexpr int kN = kBlockSize;

struct OddTables {
  // odd[level] is the (N/2)x(N/2) table for N = 32 >> level.
  std::array<std::vector<double>, 5> odd;
  std::array<double, kN> scale;
};

const OddTables& Tables() {
  static const OddTables tables = [] {
    OddTables t;
    for (int level = 0; level < 5; ++level) {
      const int n = kN >> level;
      const int half = n / 2;
      auto& table = t.odd[level];
      table.resize(static_cast<std::size_t>(half) * half);
      for (int m = 0; m < half; ++m) {
        for (int k = 0; k < half; ++k) {
          table[static_cast<std::size_t>(m) * half + k] =
              std::cos(std::numbers::pi * (2 * k + 1) * (2 * m + 1) / (2.0 * n));
        }
      }
    }
    t.scale[0] = std::sqrt(1.0 / kN);
    for (int k = 1; k < kN; ++k) t.scale[k] = std::sqrt(2.0 / kN);
    return t;
  }();
  return tables;
}

// Unnormalized DCT-II of x[0..n) into out[0..n) with output stride `stride`.
void Unnormalized(const double* x, int n, int level, double* out, int stride,
                  const OddTables& t) {
  if (n == 1) {
    out[0] = x[0];
    return;
  }
  const int half = n / 2;
  double sum[kN / 2];
  double diff[kN / 2];
  for (int k = 0; k < half; ++k) {
    sum[k] = x[k] + x[n - 1 - k];
    diff[k] = x[k] - x[n - 1 - k];
  }
  const double* table = t.odd[level].data();
  for (int m = 0; m < half; ++m) {
    const double* row = table + static_cast<std::size_t>(m) * half;
    double acc = 0.0;
    for (int k = 0; k < half; ++k) acc += diff[k] * row[k];
    out[(2 * m + 1) * stride] = acc;
  }
  Unnormalized(sum, half, level + 1, out, 2 * stride, t);
}

void Transform1d(const double* x, double* out, const OddTables& t) {
  Unnormalized(x, kN, 0, out, 1, t);
  for (int k = 0; k < kN; ++k) out[k] *= t.scale[k];
}

}  // namespace

BlockCoefficients Dct2d32(const BlockSamples& block) {
  const OddTables& t = Tables();
  BlockCoefficients rows;
  for (int r = 0; r < kN; ++r) {
    Transform1d(block.data() + r * kN, rows.data() + r * kN, t);
  }
  BlockCoefficients coeffs;
  double column[kN];
  double transformed[kN];
  for (int c = 0; c < kN; ++c) {
    for (int r = 0; r < kN; ++r) column[r] = rows[r * kN + c];
    Transform1d(column, transformed, t);
    for (int r = 0; r < kN; ++r) coeffs[r * kN + c] = transformed[r];
  }
  return coeffs;
}

}  // namespace vqtif
