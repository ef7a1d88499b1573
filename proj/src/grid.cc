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

#include "uft/grid.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "uft/error.h"

namespace uft {

namespace {

void CheckDims(int width, int height) {
  if (width < 1 || height < 1) {
    ThrowInvalid("grid dimensions must be positive, got " +
                 std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

ScalarGrid::ScalarGrid(int width, int height, double fill)
    : width_(width), height_(height) {
  CheckDims(width, height);
  if (!std::isfinite(fill)) ThrowInvalid("grid fill value is not finite");
  values_.assign(static_cast<size_t>(width) * height, fill);
}

ScalarGrid::ScalarGrid(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  CheckDims(width, height);
  if (values_.size() != static_cast<size_t>(width) * height) {
    ThrowInvalid("grid value count " + std::to_string(values_.size()) +
                 " does not match " + std::to_string(width) + "x" +
                 std::to_string(height));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) ThrowInvalid("grid contains a non-finite value");
  }
}

ProbMask::ProbMask(ScalarGrid grid) : grid_(std::move(grid)) {
  for (double v : grid_.values()) {
    if (v < 0.0 || v > 1.0) {
      ThrowInvalid("probability mask value " + std::to_string(v) +
                   " outside [0, 1]");
    }
  }
}

ProbMask::ProbMask(int width, int height, double fill)
    : ProbMask(ScalarGrid(width, height, fill)) {}

double ProbMask::Min() const {
  auto v = grid_.values();
  return *std::min_element(v.begin(), v.end());
}

double ProbMask::Max() const {
  auto v = grid_.values();
  return *std::max_element(v.begin(), v.end());
}

BinaryMask::BinaryMask(int width, int height)
    : width_(width), height_(height) {
  CheckDims(width, height);
  bits_.assign(static_cast<size_t>(width) * height, 0);
}

size_t BinaryMask::Count() const {
  return static_cast<size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

ProbMask BinaryMask::ToProbMask() const {
  std::vector<double> values(bits_.begin(), bits_.end());
  return ProbMask(ScalarGrid(width_, height_, std::move(values)));
}

BinaryMask Threshold(const ProbMask& mask, double threshold) {
  BinaryMask out(mask.width(), mask.height());
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (mask.at(r, c) > threshold) out.set(r, c, true);
    }
  }
  return out;
}

}  // namespace uft
