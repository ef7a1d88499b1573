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

#ifndef UFT_SCORING_H_
#define UFT_SCORING_H_

#include <cstddef>
#include <span>

#include "uft/geometry.h"
#include "uft/grid.h"

namespace uft {

struct ScoreConfig {
  double k_c = 0.42;  // position-term mix, [0, 1]
  double k_p = 0.1;   // size-penalty sharpness, >= 0
  double k_f = 0.5;   // flow mix, [0, 1]
  double t_seg = 0.30;  // mask binarization threshold, (0, 1)
  // Cosine window half-support as a multiple of the previous box extent.
  double window_scale = 2.0;
  // Context padding p = context_padding * (w + h) in the padded-area term.
  double context_padding = 0.5;

  void Validate() const;
};

// Lower bound for t_flow.
inline constexpr double kMinTFlow = 1e-3;

struct FlowNormalizer {
  double t_flow = 1.0;      // (kMinTFlow, 1]
  bool degenerate = false;  // set when the binary mask was empty
};

struct Proposal {
  AABox box;
  double appearance = 0.0;  // d >= 0
};

// exp((1 - max(r/r', r'/r) * max(s/s', s'/s)) * k_p), r = w/h and
// s = sqrt((w + p)(h + p)) per box.
double SizePenalty(const AABox& proposal, const AABox& previous, double k_p,
                   double context_padding = 0.5);

// Separable raised-cosine window centered on the previous box; per-axis
// support radius is window_scale times the box extent on that axis.
double CosinePenalty(const Point2& center, const AABox& previous,
                     double window_scale = 2.0);

// Number of pixel centers strictly inside `box` within a width x height image.
size_t BoxPixelCount(const AABox& box, int width, int height);

// Mean FlowMask value over the pixels of `box`. Throws "off-image proposal"
// when the box covers no pixel center of the image.
double FlowScore(const AABox& box, const ProbMask& flowmask);

// Foreground fraction of the previous box: |mask| / |box pixels|, clamped to
// [kMinTFlow, 1]. Empty masks give kMinTFlow with `degenerate` set.
FlowNormalizer ComputeNormalizer(const BinaryMask& mask,
                                 const AABox& previous_box);

// min(f_s / t_flow, 1).
double NormalizedFlowScore(double flow_score, const FlowNormalizer& norm);

// (1 - k_f) * p_c + k_f * f_s'.
double MotionScore(double position_penalty, double normalized_flow_score,
                   double k_f);

// (1 - k_c) * p_s * d + k_c * motion.
double TotalScore(double appearance, double size_penalty, double motion,
                  double k_c);

struct ScoreBreakdown {
  double size_penalty = 0.0;
  double position_penalty = 0.0;
  double flow_score = 0.0;
  double normalized_flow_score = 0.0;
  double motion = 0.0;
  double total = 0.0;
};

// Scores one proposal. Without a FlowMask the motion term is the bare
// position penalty.
ScoreBreakdown ScoreProposal(const Proposal& proposal, const AABox& previous,
                             const ScoreConfig& config,
                             const ProbMask* flowmask,
                             const FlowNormalizer& norm);

// Index of the highest total. Ties go to the proposal whose center is
// closest to `previous_center`, then to the lowest index. Throws
// "no proposals" on empty input.
size_t SelectBest(std::span<const Proposal> proposals,
                  std::span<const double> totals,
                  const Point2& previous_center);

}  // namespace uft

#endif  // UFT_SCORING_H_
