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

#include "uft/tracker.h"

#include <cmath>
#include <limits>
#include <string>

#include "uft/error.h"

namespace uft {

namespace {

struct StoredMasks {
  BinaryMask binary;
  ProbMask prob;
};

// Applies the segmask ablations: the mask carried to the next frame becomes
// a filled box derived from the thresholded segmentation.
StoredMasks CarriedMasks(const BinaryMask& binary, const ProbMask& soft,
                         Variant mode) {
  switch (mode) {
    case Variant::kSegmaskAlb: {
      BinaryMask filled =
          FillBox(AlbOfMask(binary), binary.width(), binary.height());
      ProbMask prob = filled.ToProbMask();
      return {std::move(filled), std::move(prob)};
    }
    case Variant::kSegmaskMbr: {
      BinaryMask filled =
          FillRotBox(MbrOfMask(binary), binary.width(), binary.height());
      ProbMask prob = filled.ToProbMask();
      return {std::move(filled), std::move(prob)};
    }
    default:
      return {binary, soft};
  }
}

}  // namespace

std::string_view VariantName(Variant variant) {
  switch (variant) {
    case Variant::kFull: return "full";
    case Variant::kNoFlow: return "no_flow";
    case Variant::kNoUncertainty: return "no_uncertainty";
    case Variant::kSegmaskAlb: return "segmask_alb";
    case Variant::kSegmaskMbr: return "segmask_mbr";
    case Variant::kFlowReject: return "flow_reject";
    case Variant::kBaseline: return "baseline";
  }
  return "unknown";
}

Variant ParseVariant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (VariantName(v) == name) return v;
  }
  ThrowUsage("unknown variant '" + std::string(name) + "'");
}

bool UsesFlowMask(Variant variant) {
  return variant != Variant::kBaseline && variant != Variant::kFlowReject;
}

void VariantConfig::Validate() const {
  if (!(fixed_scale_b >= kMinScale)) {
    ThrowInvalid("fixed_scale_b must be >= " + std::to_string(kMinScale));
  }
  if (!(reject_threshold >= 0.0 && reject_threshold <= 1.0)) {
    ThrowInvalid("reject_threshold must lie in [0, 1]");
  }
}

void TrackerConfig::Validate() const {
  score.Validate();
  variant.Validate();
  kernel.Validate();
}

TrackerState InitTracker(const AABox& gt_box, const ProbMask& init_mask,
                         const TrackerConfig& config,
                         Diagnostics* diagnostics, int frame_index) {
  return InitTracker(ToRotBox(gt_box), init_mask, config, diagnostics,
                     frame_index);
}

TrackerState InitTracker(const RotBox& gt_box, const ProbMask& init_mask,
                         const TrackerConfig& config,
                         Diagnostics* diagnostics, int frame_index) {
  config.Validate();
  ValidateRotBox(gt_box);
  const AABox box = BoundingBox(gt_box);

  BinaryMask binary = Threshold(init_mask, config.score.t_seg);
  ProbMask soft = init_mask;
  bool degenerate = false;
  if (binary.Empty()) {
    binary = FillRotBox(gt_box, init_mask.width(), init_mask.height());
    soft = binary.ToProbMask();
    degenerate = true;
  }
  StoredMasks carried = binary.Empty()
                            ? StoredMasks{binary, soft}
                            : CarriedMasks(binary, soft, config.variant.mode);
  FlowNormalizer norm = ComputeNormalizer(carried.binary, box);
  norm.degenerate = norm.degenerate || degenerate;
  if (diagnostics != nullptr) {
    *diagnostics = Diagnostics{};
    diagnostics->degenerate_mask = norm.degenerate;
  }
  return TrackerState{box,  gt_box, std::move(carried.binary),
                      std::move(carried.prob), norm, frame_index};
}

FlowField EffectiveFlow(const FlowField& flow, const VariantConfig& variant) {
  switch (variant.mode) {
    case Variant::kNoFlow:
      return FlowField::Constant(flow.width(), flow.height(), 0.0, 0.0,
                                 variant.fixed_scale_b);
    case Variant::kNoUncertainty: {
      FlowField out = flow;
      out.scale_u = ScalarGrid(flow.width(), flow.height(),
                               variant.fixed_scale_b);
      out.scale_v = out.scale_u;
      return out;
    }
    default:
      return flow;
  }
}

RejectionResult FlowRejectionFilter(const AABox& previous_box,
                                    std::span<const Proposal> proposals,
                                    const FlowField& flow, double threshold) {
  // Warped pixel centers, frame-t coordinates.
  std::vector<Point2> warped;
  for (int r = 0; r < flow.height(); ++r) {
    for (int c = 0; c < flow.width(); ++c) {
      const double sx = std::round(c + flow.mean_u.at(r, c));
      const double sy = std::round(r + flow.mean_v.at(r, c));
      if (sx > previous_box.left() && sx < previous_box.right() &&
          sy > previous_box.top() && sy < previous_box.bottom()) {
        warped.push_back({double(c), double(r)});
      }
    }
  }
  RejectionResult result;
  result.warped_pixels = warped.size();
  const double needed = threshold * static_cast<double>(warped.size());
  for (size_t i = 0; i < proposals.size() && !warped.empty(); ++i) {
    const AABox& b = proposals[i].box;
    size_t inside = 0;
    for (const Point2& p : warped) {
      if (p.x > b.left() && p.x < b.right() && p.y > b.top() &&
          p.y < b.bottom()) {
        ++inside;
      }
    }
    if (static_cast<double>(inside) >= needed - 1e-9) result.kept.push_back(i);
  }
  if (result.kept.empty()) {
    result.bypass = true;
    for (size_t i = 0; i < proposals.size(); ++i) result.kept.push_back(i);
  }
  return result;
}

StepResult Step(const TrackerState& state, std::span<const Proposal> proposals,
                const MaskSource& masks, const FlowField& flow,
                const TrackerConfig& config) {
  if (proposals.empty()) ThrowInvalid("no proposals");
  flow.Validate();
  const int width = state.prev_prob_mask.width();
  const int height = state.prev_prob_mask.height();
  if (flow.width() != width || flow.height() != height) {
    ThrowInvalid("flow shape differs from frame shape");
  }
  const Variant mode = config.variant.mode;

  Diagnostics diag;
  std::vector<size_t> on_image;
  for (size_t i = 0; i < proposals.size(); ++i) {
    if (proposals[i].box.valid() &&
        BoxPixelCount(proposals[i].box, width, height) > 0) {
      on_image.push_back(i);
    }
  }
  if (on_image.empty()) ThrowInvalid("all proposals off-image");

  diag.candidates = on_image;
  if (mode == Variant::kFlowReject) {
    std::vector<Proposal> subset;
    for (size_t i : on_image) subset.push_back(proposals[i]);
    const RejectionResult rejection = FlowRejectionFilter(
        state.prev_box, subset, flow, config.variant.reject_threshold);
    diag.rejection_bypass = rejection.bypass;
    diag.candidates.clear();
    for (size_t k : rejection.kept) diag.candidates.push_back(on_image[k]);
  }

  std::optional<ProbMask> flowmask;
  if (UsesFlowMask(mode)) {
    flowmask = PropagateMask(state.prev_prob_mask,
                             EffectiveFlow(flow, config.variant),
                             config.kernel);
  }

  std::vector<double> totals(proposals.size(),
                             -std::numeric_limits<double>::infinity());
  diag.scores.assign(proposals.size(), ScoreBreakdown{});
  for (size_t i : diag.candidates) {
    diag.scores[i] = ScoreProposal(proposals[i], state.prev_box, config.score,
                                   flowmask ? &*flowmask : nullptr,
                                   state.normalizer);
    totals[i] = diag.scores[i].total;
  }
  const size_t best = SelectBest(
      proposals, totals, {state.prev_box.cx, state.prev_box.cy});
  diag.selected = best;
  const Proposal& winner = proposals[best];

  ProbMask predicted = masks.PredictMask(winner, best);
  if (predicted.width() != width || predicted.height() != height) {
    ThrowInvalid("predicted mask shape differs from frame shape");
  }
  BinaryMask binary = Threshold(predicted, config.score.t_seg);

  StepResult result{ToRotBox(winner.box), state, {}};
  TrackerState& next = result.state;
  if (binary.Empty()) {
    diag.mask_dropout = true;
  } else {
    result.output = MbrOfMask(binary);
    StoredMasks carried = CarriedMasks(binary, predicted, mode);
    next.prev_binary_mask = std::move(carried.binary);
    next.prev_prob_mask = std::move(carried.prob);
  }
  next.prev_box = winner.box;
  next.prev_rot_box = result.output;
  next.normalizer = ComputeNormalizer(next.prev_binary_mask, next.prev_box);
  next.frame_index = state.frame_index + 1;
  diag.degenerate_mask = next.normalizer.degenerate;
  result.diagnostics = std::move(diag);
  return result;
}

Tracker::Tracker(TrackerConfig config) : config_(std::move(config)) {
  config_.Validate();
}

Diagnostics Tracker::Init(const RotBox& gt_box, const ProbMask& init_mask,
                          int frame_index) {
  Diagnostics diag;
  state_ = InitTracker(gt_box, init_mask, config_, &diag, frame_index);
  return diag;
}

StepResult Tracker::Track(std::span<const Proposal> proposals,
                          const MaskSource& masks, const FlowField& flow) {
  if (!state_) ThrowInvalid("tracker used before Init");
  StepResult result = Step(*state_, proposals, masks, flow, config_);
  state_ = result.state;
  return result;
}

const TrackerState& Tracker::state() const {
  if (!state_) ThrowInvalid("tracker used before Init");
  return *state_;
}

}  // namespace uft
