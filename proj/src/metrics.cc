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

#include "vqtif/metrics.h"

#include <cmath>

#include "vqtif/error.h"
#include "vqtif/parallel.h"

namespace vqtif {
namespace {

void CheckSameSize(const Frame& ref, const Frame& dist) {
  if (ref.width() != dist.width() || ref.height() != dist.height()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "frame " + std::to_string(ref.index()) + ": " +
                    std::to_string(ref.width()) + "x" + std::to_string(ref.height()) +
                    " vs " + std::to_string(dist.width()) + "x" +
                    std::to_string(dist.height()));
  }
}

// Sum of the SSIM map over one row of valid window positions. `vertical`
// is scratch of 5 * width doubles.
double SsimRow(const Frame& ref, const Frame& dist, int y0, std::vector<double>& vertical) {
  const auto& g = SsimKernel();
  const int width = ref.width();
  double* mx = vertical.data();
  double* my = mx + width;
  double* mxx = my + width;
  double* myy = mxx + width;
  double* mxy = myy + width;
  std::fill(vertical.begin(), vertical.end(), 0.0);

  for (int k = 0; k < kSsimWindow; ++k) {
    const auto rx = ref.row(y0 + k);
    const auto ry = dist.row(y0 + k);
    const double w = g[k];
    for (int x = 0; x < width; ++x) {
      const double a = rx[x];
      const double b = ry[x];
      mx[x] += w * a;
      my[x] += w * b;
      mxx[x] += w * (a * a);
      myy[x] += w * (b * b);
      mxy[x] += w * (a * b);
    }
  }

  double row_sum = 0.0;
  const int positions = width - kSsimWindow + 1;
  for (int x = 0; x < positions; ++x) {
    double mu_x = 0.0, mu_y = 0.0, e_xx = 0.0, e_yy = 0.0, e_xy = 0.0;
    for (int k = 0; k < kSsimWindow; ++k) {
      const double w = g[k];
      mu_x += w * mx[x + k];
      mu_y += w * my[x + k];
      e_xx += w * mxx[x + k];
      e_yy += w * myy[x + k];
      e_xy += w * mxy[x + k];
    }
    const double var_x = e_xx - mu_x * mu_x;
    const double var_y = e_yy - mu_y * mu_y;
    const double cov = e_xy - mu_x * mu_y;
    const double numerator = (2.0 * (mu_x * mu_y) + kSsimC1) * (2.0 * cov + kSsimC2);
    const double denominator =
        (mu_x * mu_x + mu_y * mu_y + kSsimC1) * (var_x + var_y + kSsimC2);
    row_sum += numerator / denominator;
  }
  return row_sum;
}

}  // namespace

const std::array<double, kSsimWindow>& SsimKernel() {
  static const std::array<double, kSsimWindow> kernel = [] {
    std::array<double, kSsimWindow> k{};
    double total = 0.0;
    const int center = kSsimWindow / 2;
    for (int i = 0; i < kSsimWindow; ++i) {
      const double d = i - center;
      k[i] = std::exp(-(d * d) / (2.0 * kSsimSigma * kSsimSigma));
      total += k[i];
    }
    for (double& v : k) v /= total;
    return k;
  }();
  return kernel;
}

double FrameSsim(const Frame& ref, const Frame& dist, int threads) {
  CheckSameSize(ref, dist);
  if (ref.width() < kSsimWindow || ref.height() < kSsimWindow) {
    throw Error(ErrorCode::kInvalidArgument, "frame smaller than the SSIM window");
  }
  const int rows = ref.height() - kSsimWindow + 1;
  const int cols = ref.width() - kSsimWindow + 1;
  std::vector<double> row_sums(rows);
  const int workers = std::max(1, std::min(threads, rows));
  // Contiguous bands per worker so each one reuses its scratch buffer.
  ParallelFor(static_cast<std::size_t>(workers), workers, [&](std::size_t w) {
    std::vector<double> scratch(5 * static_cast<std::size_t>(ref.width()));
    const int begin = static_cast<int>(w * rows / workers);
    const int end = static_cast<int>((w + 1) * rows / workers);
    for (int y = begin; y < end; ++y) row_sums[y] = SsimRow(ref, dist, y, scratch);
  });
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total / (static_cast<double>(rows) * cols);
}

double FramePsnr(const Frame& ref, const Frame& dist) {
  CheckSameSize(ref, dist);
  const auto a = ref.luma();
  const auto b = dist.luma();
  uint64_t sse = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    sse += static_cast<uint64_t>(d * d);
  }
  if (sse == 0) return kPsnrInfinite;
  const double mse = static_cast<double>(sse) / static_cast<double>(a.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::vector<FramePairScore> SegmentPairScores(std::span<const Frame> ref,
                                              std::span<const Frame> dist,
                                              int threads) {
  if (ref.size() != dist.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "reference has " + std::to_string(ref.size()) +
                    " frames, distorted has " + std::to_string(dist.size()));
  }
  std::vector<FramePairScore> scores(ref.size());
  const int per_frame = ref.empty() ? 1 : std::max(1, threads / static_cast<int>(ref.size()));
  ParallelFor(ref.size(), threads, [&](std::size_t i) {
    scores[i].frame_index = ref[i].index();
    scores[i].ssim = FrameSsim(ref[i], dist[i], per_frame);
    scores[i].psnr = FramePsnr(ref[i], dist[i]);
  });
  return scores;
}

}  // namespace vqtif
