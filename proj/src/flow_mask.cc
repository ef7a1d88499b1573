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

#include "uft/flow_mask.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "uft/error.h"

namespace uft {

namespace {

// Means beyond this are treated as landing this far away; keeps the integer
// window arithmetic in range.
constexpr double kMaxDisplacement = 1e6;

// Normalized 1D correspondence weights over the in-bounds part of a window.
struct AxisWeights {
  int lo = 0;
  std::vector<double> w;
};

bool BuildAxis(double center, double scale, int extent,
               const KernelConfig& config, AxisWeights* out) {
  center = std::clamp(center, -kMaxDisplacement, kMaxDisplacement);
  const int half = static_cast<int>(std::ceil(config.truncation_k * scale));
  // After renormalization the mass concentrates at the in-bounds sample
  // nearest to the mean, so the window is anchored there.
  const double anchor = config.renormalize_at_border
                            ? std::clamp(center, 0.0, extent - 1.0)
                            : center;
  const int full_lo = static_cast<int>(std::floor(anchor)) - half;
  const int full_hi = static_cast<int>(std::ceil(anchor)) + half;
  const int lo = std::max(full_lo, 0);
  const int hi = std::min(full_hi, extent - 1);
  if (lo > hi) return false;

  // Weights are computed relative to the closest sample so the largest one
  // is exactly 1 and tiny scales cannot underflow the whole window.
  double shift;
  if (config.renormalize_at_border) {
    shift = std::abs(std::clamp(center, double(lo), double(hi)) - center);
    if (center >= lo && center <= hi) {
      shift = std::min(center - std::floor(center),
                       std::ceil(center) - center);
    }
  } else {
    shift = std::min(center - std::floor(center), std::ceil(center) - center);
  }

  out->lo = lo;
  out->w.resize(static_cast<size_t>(hi - lo + 1));
  double norm = 0.0;
  for (int d = lo; d <= hi; ++d) {
    const double v = std::exp(-(std::abs(d - center) - shift) / scale);
    out->w[d - lo] = v;
    norm += v;
  }
  if (!config.renormalize_at_border) {
    for (int d = full_lo; d < lo; ++d) {
      norm += std::exp(-(std::abs(d - center) - shift) / scale);
    }
    for (int d = hi + 1; d <= full_hi; ++d) {
      norm += std::exp(-(std::abs(d - center) - shift) / scale);
    }
  }
  for (double& v : out->w) v /= norm;
  return true;
}

void CheckShapes(const ProbMask& prev, const FlowField& flow) {
  flow.Validate();
  if (!prev.grid().SameShape(flow.mean_u)) {
    ThrowInvalid("mask is " + std::to_string(prev.width()) + "x" +
                 std::to_string(prev.height()) + " but flow is " +
                 std::to_string(flow.width()) + "x" +
                 std::to_string(flow.height()));
  }
}

// Sum over all integers n of exp(-(|n - c| - shift) / b), with shift the
// distance from c to its nearest integer.
double InfiniteAxisNorm(double c, double b) {
  const double f = c - std::floor(c);
  const double shift = std::min(f, 1.0 - f);
  const double tail = 1.0 / (1.0 - std::exp(-1.0 / b));
  return (std::exp(-(f - shift) / b) + std::exp(-(1.0 - f - shift) / b)) *
         tail;
}

}  // namespace

void FlowField::Validate() const {
  if (!mean_u.SameShape(mean_v) || !mean_u.SameShape(scale_u) ||
      !mean_u.SameShape(scale_v)) {
    ThrowInvalid("flow field components differ in shape");
  }
  for (const ScalarGrid* g : {&scale_u, &scale_v}) {
    for (double b : g->values()) {
      if (!(b >= kMinScale)) {
        ThrowInvalid("flow scale " + std::to_string(b) + " below floor");
      }
    }
  }
}

FlowField FlowField::Constant(int width, int height, double u, double v,
                              double scale) {
  return FlowField{ScalarGrid(width, height, u), ScalarGrid(width, height, v),
                   ScalarGrid(width, height, scale),
                   ScalarGrid(width, height, scale)};
}

void KernelConfig::Validate() const {
  if (!(truncation_k >= 1.0)) ThrowInvalid("truncation_k must be >= 1");
}

double LaplaceDensity(double u, double mu, double b) {
  if (!(b > 0.0)) ThrowInvalid("nonpositive scale");
  return std::exp(-std::abs(u - mu) / b) / (2.0 * b);
}

double CorrespondenceKernel::Sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

CorrespondenceKernel ComputeCorrespondenceKernel(int row, int col,
                                                 const FlowField& flow,
                                                 const KernelConfig& config) {
  flow.Validate();
  config.Validate();
  if (!flow.mean_u.InBounds(row, col)) ThrowInvalid("pixel out of bounds");
  AxisWeights wx, wy;
  if (!BuildAxis(col + flow.mean_u.at(row, col), flow.scale_u.at(row, col),
                 flow.width(), config, &wx) ||
      !BuildAxis(row + flow.mean_v.at(row, col), flow.scale_v.at(row, col),
                 flow.height(), config, &wy)) {
    ThrowInvalid("correspondence off-grid");
  }
  CorrespondenceKernel k;
  k.row0 = wy.lo;
  k.col0 = wx.lo;
  k.rows = static_cast<int>(wy.w.size());
  k.cols = static_cast<int>(wx.w.size());
  k.weights.reserve(wy.w.size() * wx.w.size());
  for (double vy : wy.w) {
    for (double vx : wx.w) k.weights.push_back(vy * vx);
  }
  return k;
}

ProbMask PropagateMask(const ProbMask& prev, const FlowField& flow,
                       const KernelConfig& config) {
  CheckShapes(prev, flow);
  config.Validate();
  const int width = prev.width();
  const int height = prev.height();
  auto src = prev.grid().values();
  std::vector<double> out(src.size(), 0.0);
  AxisWeights wx, wy;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (!BuildAxis(c + flow.mean_u.at(r, c), flow.scale_u.at(r, c), width,
                     config, &wx) ||
          !BuildAxis(r + flow.mean_v.at(r, c), flow.scale_v.at(r, c), height,
                     config, &wy)) {
        continue;
      }
      const size_t nx = wx.w.size();
      double acc = 0.0;
      for (size_t y = 0; y < wy.w.size(); ++y) {
        if (wy.w[y] == 0.0) continue;
        const double* row =
            src.data() + static_cast<size_t>(wy.lo + y) * width + wx.lo;
        double line = 0.0;
        for (size_t x = 0; x < nx; ++x) line += wx.w[x] * row[x];
        acc += wy.w[y] * line;
      }
      out[static_cast<size_t>(r) * width + c] = std::clamp(acc, 0.0, 1.0);
    }
  }
  return ProbMask(ScalarGrid(width, height, std::move(out)));
}

ProbMask PropagateMaskOracle(const ProbMask& prev, const FlowField& flow,
                             bool renormalize_at_border) {
  CheckShapes(prev, flow);
  const int width = prev.width();
  const int height = prev.height();
  std::vector<double> out(static_cast<size_t>(width) * height, 0.0);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double cx = c + flow.mean_u.at(r, c);
      const double cy = r + flow.mean_v.at(r, c);
      const double bu = flow.scale_u.at(r, c);
      const double bv = flow.scale_v.at(r, c);
      // Exponent offsets: nearest in-bounds sample when renormalizing,
      // nearest integer otherwise (matching InfiniteAxisNorm).
      double sx, sy;
      if (renormalize_at_border) {
        const double nx = std::clamp(std::round(cx), 0.0, width - 1.0);
        const double ny = std::clamp(std::round(cy), 0.0, height - 1.0);
        sx = std::abs(nx - cx);
        sy = std::abs(ny - cy);
      } else {
        sx = std::abs(std::round(cx) - cx);
        sy = std::abs(std::round(cy) - cy);
      }
      double mass = 0.0;
      double weighted = 0.0;
      for (int jr = 0; jr < height; ++jr) {
        for (int jc = 0; jc < width; ++jc) {
          const double w = std::exp(-(std::abs(jc - cx) - sx) / bu -
                                    (std::abs(jr - cy) - sy) / bv);
          mass += w;
          weighted += w * prev.at(jr, jc);
        }
      }
      if (!renormalize_at_border) {
        mass = InfiniteAxisNorm(cx, bu) * InfiniteAxisNorm(cy, bv);
      }
      out[static_cast<size_t>(r) * width + c] =
          mass > 0.0 ? std::clamp(weighted / mass, 0.0, 1.0) : 0.0;
    }
  }
  return ProbMask(ScalarGrid(width, height, std::move(out)));
}

}  // namespace uft
