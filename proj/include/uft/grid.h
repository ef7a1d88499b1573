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

// Image-plane containers. Pixel (row, col) is the unit square centered at
// x = col, y = row; the origin is the top-left pixel center.

#ifndef UFT_GRID_H_
#define UFT_GRID_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace uft {

// Row-major 2D field of finite doubles.
class ScalarGrid {
 public:
  ScalarGrid(int width, int height, double fill = 0.0);
  ScalarGrid(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  size_t size() const { return values_.size(); }

  double at(int row, int col) const { return values_[Index(row, col)]; }
  double& at(int row, int col) { return values_[Index(row, col)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() { return values_; }

  bool SameShape(const ScalarGrid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  bool InBounds(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

 private:
  size_t Index(int row, int col) const {
    return static_cast<size_t>(row) * static_cast<size_t>(width_) +
           static_cast<size_t>(col);
  }

  int width_;
  int height_;
  std::vector<double> values_;
};

// Foreground probability per pixel; every value lies in [0, 1].
class ProbMask {
 public:
  // Throws kInvalidArgument when any value is outside [0, 1].
  explicit ProbMask(ScalarGrid grid);
  ProbMask(int width, int height, double fill = 0.0);

  int width() const { return grid_.width(); }
  int height() const { return grid_.height(); }
  double at(int row, int col) const { return grid_.at(row, col); }
  const ScalarGrid& grid() const { return grid_; }

  double Min() const;
  double Max() const;

 private:
  ScalarGrid grid_;
};

class BinaryMask {
 public:
  BinaryMask(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }

  bool at(int row, int col) const {
    return bits_[static_cast<size_t>(row) * width_ + col] != 0;
  }
  void set(int row, int col, bool value) {
    bits_[static_cast<size_t>(row) * width_ + col] = value ? 1 : 0;
  }

  // Number of foreground pixels.
  size_t Count() const;
  bool Empty() const { return Count() == 0; }

  ProbMask ToProbMask() const;

 private:
  int width_;
  int height_;
  std::vector<uint8_t> bits_;
};

// Pixels with probability strictly greater than `threshold` become
// foreground.
BinaryMask Threshold(const ProbMask& mask, double threshold);

}  // namespace uft

#endif  // UFT_GRID_H_
