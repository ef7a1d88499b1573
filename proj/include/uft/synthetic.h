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

// Stand-ins for the learned parts of a siamese tracker: a region-proposal
// generator, an appearance matcher, and a segmentation head. All are
// deterministic functions of their inputs and seed.

#ifndef UFT_SYNTHETIC_H_
#define UFT_SYNTHETIC_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "uft/geometry.h"
#include "uft/grid.h"
#include "uft/tracker.h"

namespace uft {

struct ProposalConfig {
  int count = 24;              // exact number of proposals per frame
  int gt_jitters = 4;          // copies of the ground truth, first exact
  double jitter = 0.08;        // relative center/size jitter of the copies
  double grid_step = 0.5;      // grid spacing as a fraction of box size

  void Validate() const;
};

// True when the box covers at least one pixel center of the image.
bool InFrame(const AABox& box, int width, int height);

// Jittered ground-truth copies, then in-frame distractor boxes, then a grid
// of previous-size boxes around the previous center (nearest first), cut to
// exactly config.count. `gt` is ignored when out of frame.
std::vector<AABox> GenerateProposals(const AABox& previous_box,
                                     const std::optional<AABox>& gt,
                                     std::span<const AABox> distractors,
                                     int width, int height,
                                     const ProposalConfig& config,
                                     uint64_t seed);

// Monotone map from overlap to matching score, g(0) = 0 and g(1) = 1.
double AppearanceCurve(double iou);

// d = g(IoU with gt) + confusion * g(max IoU with a distractor) + noise,
// clipped to [0, 1]; noise is Gaussian with std `noise`.
std::vector<double> SynthAppearance(std::span<const AABox> boxes,
                                    const std::optional<AABox>& gt,
                                    std::span<const AABox> distractors,
                                    double confusion, double noise,
                                    uint64_t seed);

// Segments the object that owns the most visible pixels inside the
// proposal, within a search region twice the proposal size. Returns an
// all-zero mask when the proposal holds no object pixel.
class SyntheticMaskSource : public MaskSource {
 public:
  SyntheticMaskSource(const ScalarGrid& labels, double corruption,
                      uint64_t seed);

  ProbMask PredictMask(const Proposal& proposal, size_t index) const override;

  static constexpr double kForeground = 0.95;
  static constexpr double kBackground = 0.02;

 private:
  const ScalarGrid& labels_;
  double corruption_;
  uint64_t seed_;
};

}  // namespace uft

#endif  // UFT_SYNTHETIC_H_
