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
#include <vector>

#include "gtest/gtest.h"
#include "uft/ablation.h"
#include "uft/dataset.h"
#include "uft/error.h"
#include "uft/rng.h"

namespace uft {
namespace {

constexpr int kSize = 48;

BinaryMask FillRect(int col0, int row0, int cols, int rows) {
  BinaryMask m(kSize, kSize);
  for (int r = row0; r < row0 + rows; ++r) {
    for (int c = col0; c < col0 + cols; ++c) m.set(r, c, true);
  }
  return m;
}

// Box whose pixel centers are exactly the given block.
AABox BlockBox(int col0, int row0, int cols, int rows) {
  return AABox::FromEdges(col0 - 0.5, row0 - 0.5, col0 + cols - 0.5,
                          row0 + rows - 0.5);
}

// Returns the filled proposal box as the segmentation of any proposal.
class BoxMaskSource : public MaskSource {
 public:
  ProbMask PredictMask(const Proposal& p, size_t) const override {
    return FillBox(p.box, kSize, kSize).ToProbMask();
  }
};

class FixedMaskSource : public MaskSource {
 public:
  explicit FixedMaskSource(ProbMask mask) : mask_(std::move(mask)) {}
  ProbMask PredictMask(const Proposal&, size_t) const override {
    return mask_;
  }

 private:
  ProbMask mask_;
};

TrackerConfig ConfigFor(Variant v) {
  TrackerConfig c;
  c.variant.mode = v;
  return c;
}

TEST(VariantTest, NamesRoundTrip) {
  for (Variant v : kAllVariants) EXPECT_EQ(ParseVariant(VariantName(v)), v);
  EXPECT_THROW(ParseVariant("fast"), Error);
}

TEST(InitTrackerTest, FilledMaskGivesUnitNormalizer) {
  const AABox gt = BlockBox(10, 12, 8, 6);
  Diagnostics d;
  const TrackerState s = InitTracker(
      gt, FillRect(10, 12, 8, 6).ToProbMask(), ConfigFor(Variant::kFull), &d);
  EXPECT_DOUBLE_EQ(s.normalizer.t_flow, 1.0);
  EXPECT_FALSE(d.degenerate_mask);
}

TEST(InitTrackerTest, EmptyMaskFallsBackToFilledBox) {
  const AABox gt = BlockBox(10, 12, 8, 6);
  Diagnostics d;
  const TrackerState s = InitTracker(gt, ProbMask(kSize, kSize),
                                     ConfigFor(Variant::kFull), &d);
  EXPECT_TRUE(d.degenerate_mask);
  EXPECT_DOUBLE_EQ(s.normalizer.t_flow, 1.0);
  EXPECT_EQ(s.prev_binary_mask.Count(), 48u);
}

TEST(InitTrackerTest, HalfFilledMask) {
  const AABox gt = BlockBox(10, 12, 8, 6);
  const TrackerState s = InitTracker(gt, FillRect(10, 12, 4, 6).ToProbMask(),
                                     ConfigFor(Variant::kFull));
  EXPECT_DOUBLE_EQ(s.normalizer.t_flow, 0.5);
}

TEST(StepTest, GroundTruthProposalIsAFixedPoint) {
  const AABox gt = BlockBox(10, 12, 8, 6);
  const BinaryMask mask = FillRect(10, 12, 8, 6);
  const TrackerConfig cfg = ConfigFor(Variant::kFull);
  const TrackerState s0 = InitTracker(gt, mask.ToProbMask(), cfg);
  const std::vector<Proposal> proposals{{gt, 1.0}};
  const StepResult r =
      Step(s0, proposals, FixedMaskSource(mask.ToProbMask()),
           FlowField::Constant(kSize, kSize, 0, 0, kMinScale), cfg);
  const RotBox mbr = MbrOfMask(mask);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(r.output.corners[i].x, mbr.corners[i].x, 1e-12);
    EXPECT_NEAR(r.output.corners[i].y, mbr.corners[i].y, 1e-12);
  }
  EXPECT_DOUBLE_EQ(r.state.normalizer.t_flow, s0.normalizer.t_flow);
  EXPECT_EQ(r.state.frame_index, 1);
}

TEST(StepTest, FlowOverridesConfusableDistractor) {
  // The target moved 6 px right. A distractor 4 px to the left looks a bit
  // more like the template and sits closer to the previous position.
  const AABox prev = BlockBox(18, 18, 6, 6);
  const AABox target = BlockBox(24, 18, 6, 6);
  const AABox distractor = BlockBox(14, 18, 6, 6);
  const std::vector<Proposal> proposals{{target, 0.9}, {distractor, 0.95}};
  FlowField flow = FlowField::Constant(kSize, kSize, 0, 0, kMinScale);
  for (int r = 18; r < 24; ++r) {
    for (int c = 24; c < 30; ++c) flow.mean_u.at(r, c) = -6.0;
    // Uncovered background points at empty space.
    for (int c = 18; c < 24; ++c) flow.mean_u.at(r, c) = 12.0;
  }

  TrackerConfig cfg = ConfigFor(Variant::kFull);
  cfg.score.k_c = 0.42;
  cfg.score.k_f = 1.0;
  const TrackerState s0 =
      InitTracker(prev, FillRect(18, 18, 6, 6).ToProbMask(), cfg);
  const StepResult full = Step(s0, proposals, BoxMaskSource(), flow, cfg);
  EXPECT_EQ(full.diagnostics.selected, 0u);

  // Hand evaluation: the FlowMask is the target block, so f_s' is 1 on the
  // target and 0 on the distractor; equal sizes give p_s = 1.
  EXPECT_NEAR(full.diagnostics.scores[0].total, 0.58 * 0.9 + 0.42 * 1.0,
              1e-9);
  EXPECT_NEAR(full.diagnostics.scores[1].total, 0.58 * 0.95 + 0.42 * 0.0,
              1e-9);

  TrackerConfig base = cfg;
  base.variant.mode = Variant::kBaseline;
  EXPECT_EQ(Step(s0, proposals, BoxMaskSource(), flow, base)
                .diagnostics.selected,
            1u);
}

TEST(StepTest, UniformFlowMaskReducesToBaseline) {
  // An all-ones previous mask propagates to an all-ones FlowMask, so f_s'
  // is the same for every proposal. The motion term then only rescales the
  // position weight, which the baseline reproduces with an adjusted k_c.
  Rng rng(12);
  const AABox prev = BlockBox(0, 0, kSize, kSize);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Proposal> proposals;
    for (int i = 0; i < 8; ++i) {
      proposals.push_back({{rng.Uniform(5, 43), rng.Uniform(5, 43),
                            rng.Uniform(4, 12), rng.Uniform(4, 12)},
                           rng.Uniform()});
    }
    TrackerConfig cfg = ConfigFor(Variant::kNoFlow);
    cfg.score.k_f = rng.Uniform();
    cfg.score.k_c = rng.Uniform(0.4, 0.43);
    const TrackerState s0 =
        InitTracker(prev, ProbMask(kSize, kSize, 1.0), cfg);
    const FlowField flow = FlowField::Constant(kSize, kSize, 0, 0, 1.0);
    const size_t with_flow =
        Step(s0, proposals, BoxMaskSource(), flow, cfg).diagnostics.selected;
    TrackerConfig base = cfg;
    base.variant.mode = Variant::kBaseline;
    const double pos = cfg.score.k_c * (1.0 - cfg.score.k_f);
    base.score.k_c = pos / (1.0 - cfg.score.k_c + pos);
    ASSERT_EQ(with_flow, Step(s0, proposals, BoxMaskSource(), flow, base)
                             .diagnostics.selected);
  }
}

TEST(StepTest, ZeroFlowWeightMatchesBaselineOnSequences) {
  for (const SceneSpec& spec : BenchmarkSuite(3, 17)) {
    const Sequence seq = BuildSequence(spec);
    RunConfig cfg;
    cfg.score.k_f = 0.0;
    std::vector<SyntheticSequenceTracker::Pick> base_picks;
    cfg.variant.mode = Variant::kBaseline;
    TrackSequence(seq, cfg, &base_picks);
    for (Variant v : {Variant::kFull, Variant::kNoFlow,
                      Variant::kNoUncertainty, Variant::kSegmaskAlb,
                      Variant::kSegmaskMbr}) {
      cfg.variant.mode = v;
      std::vector<SyntheticSequenceTracker::Pick> picks;
      TrackSequence(seq, cfg, &picks);
      ASSERT_EQ(picks.size(), base_picks.size());
      for (size_t i = 0; i < picks.size(); ++i) {
        ASSERT_EQ(picks[i].frame, base_picks[i].frame);
        ASSERT_EQ(picks[i].index, base_picks[i].index)
            << spec.name << " " << VariantName(v) << " frame "
            << picks[i].frame;
      }
    }
  }
}

TEST(StepTest, MaskDropoutKeepsPreviousMasks) {
  const AABox gt = BlockBox(10, 12, 8, 6);
  const TrackerConfig cfg = ConfigFor(Variant::kFull);
  const TrackerState s0 =
      InitTracker(gt, FillRect(10, 12, 8, 6).ToProbMask(), cfg);
  const AABox moved = BlockBox(12, 12, 8, 6);
  const std::vector<Proposal> proposals{{moved, 1.0}};
  const StepResult r =
      Step(s0, proposals, FixedMaskSource(ProbMask(kSize, kSize)),
           FlowField::Constant(kSize, kSize, 0, 0, 1.0), cfg);
  EXPECT_TRUE(r.diagnostics.mask_dropout);
  EXPECT_NEAR(BoundingBox(r.output).cx, moved.cx, 1e-12);
  EXPECT_EQ(r.state.prev_binary_mask.Count(), 48u);
  EXPECT_NEAR(r.state.prev_box.cx, moved.cx, 1e-12);
}

TEST(StepTest, SegmaskVariantsCarryFilledBoxes) {
  // An L-shaped segmentation: the ALB variant carries its bounding block.
  BinaryMask l(kSize, kSize);
  for (int r = 10; r < 20; ++r) l.set(r, 10, true);
  for (int c = 10; c < 16; ++c) l.set(19, c, true);
  const AABox box = BlockBox(10, 10, 6, 10);
  const std::vector<Proposal> proposals{{box, 1.0}};
  const FlowField flow = FlowField::Constant(kSize, kSize, 0, 0, 1.0);
  for (Variant v : {Variant::kSegmaskAlb, Variant::kSegmaskMbr}) {
    const TrackerConfig cfg = ConfigFor(v);
    const TrackerState s0 = InitTracker(box, l.ToProbMask(), cfg);
    EXPECT_EQ(s0.prev_binary_mask.Count(), 60u) << VariantName(v);
    const StepResult r =
        Step(s0, proposals, FixedMaskSource(l.ToProbMask()), flow, cfg);
    EXPECT_EQ(r.state.prev_binary_mask.Count(), 60u) << VariantName(v);
  }
  const TrackerState full = InitTracker(box, l.ToProbMask(),
                                        ConfigFor(Variant::kFull));
  EXPECT_EQ(full.prev_binary_mask.Count(), 15u);
}

TEST(StepTest, InputErrors) {
  const AABox gt = BlockBox(10, 12, 8, 6);
  const TrackerConfig cfg = ConfigFor(Variant::kFull);
  const TrackerState s0 =
      InitTracker(gt, FillRect(10, 12, 8, 6).ToProbMask(), cfg);
  const FlowField flow = FlowField::Constant(kSize, kSize, 0, 0, 1.0);
  EXPECT_THROW(Step(s0, {}, BoxMaskSource(), flow, cfg), Error);
  const std::vector<Proposal> off{{{-50, -50, 4, 4}, 1.0}};
  EXPECT_THROW(Step(s0, off, BoxMaskSource(), flow, cfg), Error);
  const std::vector<Proposal> ok{{gt, 1.0}};
  EXPECT_THROW(Step(s0, ok, BoxMaskSource(),
                    FlowField::Constant(kSize + 1, kSize, 0, 0, 1.0), cfg),
               Error);
  Tracker t(cfg);
  EXPECT_THROW(t.Track(ok, BoxMaskSource(), flow), Error);
}

TEST(EffectiveFlowTest, AblationsReplaceFlowParts) {
  FlowField f = FlowField::Constant(4, 4, 1.5, -2.0, 3.0);
  VariantConfig v;
  v.fixed_scale_b = 0.7;
  v.mode = Variant::kNoFlow;
  FlowField e = EffectiveFlow(f, v);
  EXPECT_EQ(e.mean_u.at(1, 1), 0.0);
  EXPECT_EQ(e.scale_v.at(1, 1), 0.7);
  v.mode = Variant::kNoUncertainty;
  e = EffectiveFlow(f, v);
  EXPECT_EQ(e.mean_u.at(1, 1), 1.5);
  EXPECT_EQ(e.scale_u.at(1, 1), 0.7);
  v.mode = Variant::kFull;
  EXPECT_EQ(EffectiveFlow(f, v).scale_u.at(1, 1), 3.0);
}

class RejectionTest : public ::testing::Test {
 protected:
  // Identity flow: the warped pixels are the 100 centers of the box.
  const AABox prev_ = BlockBox(10, 10, 10, 10);
  const FlowField flow_ = FlowField::Constant(kSize, kSize, 0, 0, 1.0);

  RejectionResult Run(const std::vector<Proposal>& p) {
    return FlowRejectionFilter(prev_, p, flow_, 0.25);
  }
};

TEST_F(RejectionTest, ThresholdBoundary) {
  const std::vector<Proposal> p{{BlockBox(10, 10, 4, 6), 0},
                                {BlockBox(10, 10, 5, 5), 0}};
  const RejectionResult r = Run(p);
  EXPECT_EQ(r.warped_pixels, 100u);
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0], 1u);
  EXPECT_FALSE(r.bypass);
}

TEST_F(RejectionTest, EmptyAndFullProposals) {
  const std::vector<Proposal> p{{BlockBox(30, 30, 5, 5), 0},
                                {BlockBox(8, 8, 14, 14), 0}};
  const RejectionResult r = Run(p);
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0], 1u);
}

TEST_F(RejectionTest, AllRejectedBypasses) {
  const std::vector<Proposal> p{{BlockBox(30, 30, 5, 5), 0},
                                {BlockBox(0, 30, 5, 5), 0}};
  const RejectionResult r = Run(p);
  EXPECT_TRUE(r.bypass);
  EXPECT_EQ(r.kept.size(), 2u);
}

TEST_F(RejectionTest, FollowsBackwardFlow) {
  // Pixels 7 columns right of the box point back into it.
  FlowField f = FlowField::Constant(kSize, kSize, -7.0, 0, 1.0);
  const std::vector<Proposal> p{{BlockBox(10, 10, 10, 10), 0},
                                {BlockBox(17, 10, 10, 10), 0}};
  const RejectionResult r = FlowRejectionFilter(prev_, p, f, 0.25);
  ASSERT_EQ(r.kept.size(), 2u);
  const RejectionResult strict = FlowRejectionFilter(prev_, p, f, 0.5);
  ASSERT_EQ(strict.kept.size(), 1u);
  EXPECT_EQ(strict.kept[0], 1u);
}

}  // namespace
}  // namespace uft
