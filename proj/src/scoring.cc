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

#include "uft/scoring.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uft/error.h"

namespace uft {

namespace {

// Inclusive range of pixel centers strictly inside (lo, hi), clipped to
// [0, extent - 1]. Empty when first > last.
struct CenterRange {
  int first;
  int last;
  int count() const { return std::max(0, last - first + 1); }
};

CenterRange CentersInside(double lo, double hi, int extent) {
  const int first = std::max(0, static_cast<int>(std::floor(lo)) + 1);
  const int last = std::min(extent - 1, static_cast<int>(std::ceil(hi)) - 1);
  return {first, last};
}

double Padded(const AABox& box, double context_padding) {
  const double p = context_padding * (box.w + box.h);
  return std::sqrt((box.w + p) * (box.h + p));
}

double AxisWindow(double offset, double radius) {
  if (std::abs(offset) >= radius) return 0.0;
  return 0.5 * (1.0 + std::cos(std::numbers::pi * offset / radius));
}

}  // namespace

void ScoreConfig::Validate() const {
  if (!(k_c >= 0.0 && k_c <= 1.0)) ThrowInvalid("k_c must lie in [0, 1]");
  if (!(k_p >= 0.0)) ThrowInvalid("k_p must be >= 0");
  if (!(k_f >= 0.0 && k_f <= 1.0)) ThrowInvalid("k_f must lie in [0, 1]");
  if (!(t_seg > 0.0 && t_seg < 1.0)) ThrowInvalid("t_seg must lie in (0, 1)");
  if (!(window_scale > 0.0)) ThrowInvalid("window_scale must be positive");
  if (!(context_padding >= 0.0)) ThrowInvalid("context_padding must be >= 0");
}

double SizePenalty(const AABox& proposal, const AABox& previous, double k_p,
                   double context_padding) {
  const double r = proposal.w / proposal.h;
  const double r_prev = previous.w / previous.h;
  const double s = Padded(proposal, context_padding);
  const double s_prev = Padded(previous, context_padding);
  const double ratio_change = std::max(r / r_prev, r_prev / r);
  const double scale_change = std::max(s / s_prev, s_prev / s);
  return std::exp((1.0 - ratio_change * scale_change) * k_p);
}

double CosinePenalty(const Point2& center, const AABox& previous,
                     double window_scale) {
  return AxisWindow(center.x - previous.cx, window_scale * previous.w) *
         AxisWindow(center.y - previous.cy, window_scale * previous.h);
}

size_t BoxPixelCount(const AABox& box, int width, int height) {
  return static_cast<size_t>(CentersInside(box.left(), box.right(), width).count()) *
         static_cast<size_t>(CentersInside(box.top(), box.bottom(), height).count());
}

double FlowScore(const AABox& box, const ProbMask& flowmask) {
  const CenterRange cols = CentersInside(box.left(), box.right(), flowmask.width());
  const CenterRange rows = CentersInside(box.top(), box.bottom(), flowmask.height());
  if (cols.count() == 0 || rows.count() == 0) ThrowInvalid("off-image proposal");
  double sum = 0.0;
  for (int r = rows.first; r <= rows.last; ++r) {
    for (int c = cols.first; c <= cols.last; ++c) sum += flowmask.at(r, c);
  }
  return sum / (static_cast<double>(cols.count()) * rows.count());
}

FlowNormalizer ComputeNormalizer(const BinaryMask& mask,
                                 const AABox& previous_box) {
  if (!previous_box.valid()) ThrowInvalid("degenerate previous box");
  const size_t foreground = mask.Count();
  if (foreground == 0) return {kMinTFlow, true};
  const size_t box_pixels =
      BoxPixelCount(previous_box, mask.width(), mask.height());
  if (box_pixels == 0) return {1.0, false};
  const double ratio = static_cast<double>(foreground) / box_pixels;
  return {std::clamp(ratio, kMinTFlow, 1.0), false};
}

double NormalizedFlowScore(double flow_score, const FlowNormalizer& norm) {
  return std::min(flow_score / norm.t_flow, 1.0);
}

double MotionScore(double position_penalty, double normalized_flow_score,
                   double k_f) {
  return (1.0 - k_f) * position_penalty + k_f * normalized_flow_score;
}

double TotalScore(double appearance, double size_penalty, double motion,
                  double k_c) {
  return (1.0 - k_c) * size_penalty * appearance + k_c * motion;
}

ScoreBreakdown ScoreProposal(const Proposal& proposal, const AABox& previous,
                             const ScoreConfig& config,
                             const ProbMask* flowmask,
                             const FlowNormalizer& norm) {
  ScoreBreakdown s;
  s.size_penalty = SizePenalty(proposal.box, previous, config.k_p,
                               config.context_padding);
  s.position_penalty = CosinePenalty({proposal.box.cx, proposal.box.cy},
                                     previous, config.window_scale);
  if (flowmask != nullptr) {
    s.flow_score = FlowScore(proposal.box, *flowmask);
    s.normalized_flow_score = NormalizedFlowScore(s.flow_score, norm);
    s.motion = MotionScore(s.position_penalty, s.normalized_flow_score,
                           config.k_f);
  } else {
    s.motion = s.position_penalty;
  }
  s.total = TotalScore(proposal.appearance, s.size_penalty, s.motion,
                       config.k_c);
  return s;
}

size_t SelectBest(std::span<const Proposal> proposals,
                  std::span<const double> totals,
                  const Point2& previous_center) {
  if (proposals.empty()) ThrowInvalid("no proposals");
  if (proposals.size() != totals.size()) {
    ThrowInvalid("proposal and score counts differ");
  }
  auto distance = [&](size_t i) {
    return std::hypot(proposals[i].box.cx - previous_center.x,
                      proposals[i].box.cy - previous_center.y);
  };
  size_t best = 0;
  for (size_t i = 1; i < totals.size(); ++i) {
    if (totals[i] > totals[best] ||
        (totals[i] == totals[best] && distance(i) < distance(best))) {
      best = i;
    }
  }
  return best;
}

}  // namespace uft
