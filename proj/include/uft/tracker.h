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

// Per-frame tracking state machine. A step scores every proposal with the
// appearance/size/position terms plus (for flow variants) the FlowMask
// score, picks the best proposal, asks the mask source for that proposal's
// segmentation, and outputs the minimum bounding rectangle of the
// thresholded mask.

#ifndef UFT_TRACKER_H_
#define UFT_TRACKER_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uft/flow_mask.h"
#include "uft/geometry.h"
#include "uft/grid.h"
#include "uft/scoring.h"

namespace uft {

enum class Variant {
  kFull,           // propagated mask with estimated flow and uncertainty
  kNoFlow,         // zero-mean flow with a fixed scale
  kNoUncertainty,  // estimated flow means with a fixed scale
  kSegmaskAlb,     // propagates the filled axis-aligned box of the mask
  kSegmaskMbr,     // propagates the filled minimum bounding rectangle
  kFlowReject,     // baseline scoring after flow-consistency rejection
  kBaseline,       // appearance + size + cosine position penalty only
};

inline constexpr std::array<Variant, 7> kAllVariants = {
    Variant::kFull,       Variant::kNoFlow,     Variant::kNoUncertainty,
    Variant::kSegmaskAlb, Variant::kSegmaskMbr, Variant::kFlowReject,
    Variant::kBaseline};

std::string_view VariantName(Variant variant);
// Accepts the names returned by VariantName. Throws kUsage otherwise.
Variant ParseVariant(std::string_view name);
bool UsesFlowMask(Variant variant);

struct VariantConfig {
  Variant mode = Variant::kFull;
  double fixed_scale_b = 1.0;     // pixels; no_flow / no_uncertainty
  double reject_threshold = 0.25;  // flow_reject keep fraction

  void Validate() const;
};

struct TrackerConfig {
  ScoreConfig score;
  VariantConfig variant;
  KernelConfig kernel;

  void Validate() const;
};

struct TrackerState {
  AABox prev_box;
  RotBox prev_rot_box;
  BinaryMask prev_binary_mask;
  ProbMask prev_prob_mask;
  FlowNormalizer normalizer;
  int frame_index = 0;
};

struct Diagnostics {
  bool degenerate_mask = false;
  bool mask_dropout = false;
  bool rejection_bypass = false;
  size_t selected = 0;
  std::vector<size_t> candidates;  // proposals that were scored
  std::vector<ScoreBreakdown> scores;  // parallel to the proposal list
};

// Segmentation for a chosen proposal, full-frame sized.
class MaskSource {
 public:
  virtual ~MaskSource() = default;
  virtual ProbMask PredictMask(const Proposal& proposal,
                               size_t index) const = 0;
};

// Seeds the state from the first-frame box and mask. An init mask that is
// empty after thresholding is replaced by the filled box.
TrackerState InitTracker(const AABox& gt_box, const ProbMask& init_mask,
                         const TrackerConfig& config,
                         Diagnostics* diagnostics = nullptr,
                         int frame_index = 0);
TrackerState InitTracker(const RotBox& gt_box, const ProbMask& init_mask,
                         const TrackerConfig& config,
                         Diagnostics* diagnostics = nullptr,
                         int frame_index = 0);

// The flow field a variant actually propagates with.
FlowField EffectiveFlow(const FlowField& flow, const VariantConfig& variant);

struct RejectionResult {
  std::vector<size_t> kept;
  size_t warped_pixels = 0;
  bool bypass = false;
};

// Frame-t pixels whose rounded backward correspondence lands on a pixel of
// the previous box are the warped pixels. Proposals holding fewer than
// threshold * |warped| of them are dropped; if that would drop everything
// the full set is kept and `bypass` is set.
RejectionResult FlowRejectionFilter(const AABox& previous_box,
                                    std::span<const Proposal> proposals,
                                    const FlowField& flow, double threshold);

struct StepResult {
  RotBox output;
  TrackerState state;
  Diagnostics diagnostics;
};

// Throws when there are no proposals, when none covers a pixel of the
// frame, or when the flow shape differs from the state's masks.
StepResult Step(const TrackerState& state, std::span<const Proposal> proposals,
                const MaskSource& masks, const FlowField& flow,
                const TrackerConfig& config);

// Convenience wrapper owning configuration and state.
class Tracker {
 public:
  explicit Tracker(TrackerConfig config);

  Diagnostics Init(const RotBox& gt_box, const ProbMask& init_mask,
                   int frame_index = 0);
  StepResult Track(std::span<const Proposal> proposals,
                   const MaskSource& masks, const FlowField& flow);

  bool initialized() const { return state_.has_value(); }
  const TrackerState& state() const;
  const TrackerConfig& config() const { return config_; }

 private:
  TrackerConfig config_;
  std::optional<TrackerState> state_;
};

}  // namespace uft

#endif  // UFT_TRACKER_H_
