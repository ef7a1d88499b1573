// Copyright 2026 The UFTrack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// FlowMask: foreground probability at frame t obtained by pushing the frame
// t-1 probability mask through an uncertainty-aware backward flow field.
//
// Each pixel i of frame t has a backward correspondence distribution over
// pixels j of frame t-1. Per axis it is a Laplace density centered at
// i + mean with scale b, sampled at integer offsets:
//
//   w_ij = L(j_x - i_x | mean_u(i), scale_u(i)) * L(j_y - i_y | mean_v(i), scale_v(i))
//
// and the FlowMask is the expectation of the previous mask under w_i:
//
//   flowmask(i) = sum_j w_ij * prev(j) / sum_j w_ij
//
// The fast path truncates every axis to ceil(truncation_k * b) pixels around
// the mean, or around the nearest in-bounds pixel when renormalizing at the
// border; the oracle sums over the whole grid.

#ifndef UFT_FLOW_MASK_H_
#define UFT_FLOW_MASK_H_

#include <vector>

#include "uft/grid.h"

namespace uft {

// Floor for Laplace scales, in pixels.
inline constexpr double kMinScale = 1e-3;

// Backward flow, frame t -> frame t-1. mean_u is along x (columns), mean_v
// along y (rows).
struct FlowField {
  ScalarGrid mean_u;
  ScalarGrid mean_v;
  ScalarGrid scale_u;
  ScalarGrid scale_v;

  int width() const { return mean_u.width(); }
  int height() const { return mean_u.height(); }

  // Throws kInvalidArgument on shape mismatch or a scale below kMinScale.
  void Validate() const;

  static FlowField Constant(int width, int height, double u, double v,
                            double scale);
};

struct KernelConfig {
  double truncation_k = 12.0;  // >= 1
  // When false, correspondences that leave the image count as background.
  bool renormalize_at_border = true;

  void Validate() const;
};

// (1 / 2b) exp(-|u - mu| / b). Throws "nonpositive scale" when b <= 0.
double LaplaceDensity(double u, double mu, double b);

// Discrete correspondence weights of one frame-t pixel over a window of
// frame t-1. Only in-bounds pixels are represented.
struct CorrespondenceKernel {
  int row0 = 0;
  int col0 = 0;
  int rows = 0;
  int cols = 0;
  std::vector<double> weights;  // rows * cols, row-major

  double at(int row, int col) const {
    return weights[static_cast<size_t>(row - row0) * cols + (col - col0)];
  }
  double Sum() const;
};

// Throws "correspondence off-grid" when the truncated window has no in-bounds
// pixel, which requires renormalize_at_border = false.
CorrespondenceKernel ComputeCorrespondenceKernel(int row, int col,
                                                 const FlowField& flow,
                                                 const KernelConfig& config);

// Fast path. Pixels whose correspondence window is entirely off-grid receive
// probability 0.
ProbMask PropagateMask(const ProbMask& prev, const FlowField& flow,
                       const KernelConfig& config);

// Untruncated reference evaluation over every pixel of the grid. Cost is
// O(N^2); meant for grids up to about 64x64.
ProbMask PropagateMaskOracle(const ProbMask& prev, const FlowField& flow,
                             bool renormalize_at_border = true);

}  // namespace uft

#endif  // UFT_FLOW_MASK_H_
