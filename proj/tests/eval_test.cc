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

#include "uft/eval.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "uft/error.h"
#include "uft/rng.h"

namespace uft {
namespace {

const AABox kGt{50, 50, 10, 10};

// A 10x10 box shifted right so that its overlap with kGt is `iou`.
RotBox WithOverlap(double iou) {
  const double dx = 10.0 * (1.0 - iou) / (1.0 + iou);
  return ToRotBox({kGt.cx + dx, kGt.cy, kGt.w, kGt.h});
}

class ScriptedTracker : public SequenceTracker {
 public:
  // overlaps[t] is what the tracker achieves on frame t; <= 0 means a miss.
  explicit ScriptedTracker(std::vector<double> overlaps)
      : overlaps_(std::move(overlaps)) {}
  void Init(int frame) override { inits.push_back(frame); }
  RotBox Track(int frame) override {
    const double o = overlaps_[frame];
    if (o <= 0.0) return ToRotBox({-500, -500, 10, 10});
    return WithOverlap(o);
  }
  std::vector<int> inits;

 private:
  std::vector<double> overlaps_;
};

std::vector<RotBox> Constant(int n) {
  return std::vector<RotBox>(static_cast<size_t>(n), ToRotBox(kGt));
}

FrameRecord Rec(FrameStatus s, double overlap = 0.0) {
  FrameRecord r;
  r.status = s;
  r.overlap = overlap;
  return r;
}

// Brute-force expected average overlap computed straight from records.
double BruteForceEao(const std::vector<std::vector<FrameRecord>>& runs,
                     int low, int high) {
  struct Run {
    std::vector<double> values;
    bool failed = false;
  };
  std::vector<Run> runs_flat;
  for (const auto& frames : runs) {
    bool open = frames[0].status != FrameStatus::kInit;
    if (open) runs_flat.push_back({});
    for (const FrameRecord& f : frames) {
      if (f.status == FrameStatus::kInit) {
        runs_flat.push_back({});
        open = true;
      } else if (open && f.status == FrameStatus::kOk) {
        runs_flat.back().values.push_back(f.overlap);
      } else if (open && f.status == FrameStatus::kFail) {
        runs_flat.back().values.push_back(0.0);
        runs_flat.back().failed = true;
        open = false;
      }
    }
  }
  double total = 0.0;
  int lengths = 0;
  for (int len = low; len <= high; ++len) {
    double sum = 0.0;
    int n = 0;
    for (const Run& run : runs_flat) {
      const int size = static_cast<int>(run.values.size());
      if (!run.failed && size < len) continue;
      double s = 0.0;
      for (int i = 0; i < std::min(size, len); ++i) s += run.values[i];
      sum += s / len;
      ++n;
    }
    if (n > 0) {
      total += sum / n;
      ++lengths;
    }
  }
  return lengths > 0 ? total / lengths : 0.0;
}

TEST(ProtocolTest, OracleTrackerIsPerfect) {
  ScriptedTracker oracle(std::vector<double>(40, 1.0));
  const SequenceResult r =
      RunProtocol("oracle", Constant(40), oracle, ProtocolConfig{});
  EXPECT_EQ(r.failures, 0);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  EXPECT_EQ(r.accuracy_frames, 40 - 1 - 10);
  EXPECT_DOUBLE_EQ(Eao(std::vector<SequenceResult>{r}, ProtocolConfig{}),
                   1.0);
}

TEST(ProtocolTest, OffImageTrackerFailsRightAfterEveryInit) {
  for (int n : {2, 7, 20, 33}) {
    ScriptedTracker lost(std::vector<double>(n, 0.0));
    const ProtocolConfig p;
    const SequenceResult r = RunProtocol("lost", Constant(n), lost, p);
    int expected = 0;
    for (int init = 0; init + 1 < n; init += p.reinit_delay + 1) ++expected;
    EXPECT_EQ(r.failures, expected) << n;
    EXPECT_EQ(r.accuracy, 0.0);
    EXPECT_EQ(r.accuracy_frames, 0);
    for (int init : lost.inits) {
      EXPECT_EQ(init % (p.reinit_delay + 1), 0);
    }
  }
}

TEST(ProtocolTest, SkipsAndReinitAfterFailure) {
  std::vector<double> script(30, 0.9);
  script[4] = 0.0;
  ScriptedTracker t(script);
  const SequenceResult r =
      RunProtocol("one", Constant(30), t, ProtocolConfig{});
  EXPECT_EQ(r.frames[4].status, FrameStatus::kFail);
  for (int s = 5; s < 9; ++s) EXPECT_EQ(r.frames[s].status, FrameStatus::kSkip);
  EXPECT_EQ(r.frames[9].status, FrameStatus::kInit);
  EXPECT_EQ(t.inits, (std::vector<int>{0, 9}));
  EXPECT_NEAR(r.frames[10].overlap, 0.9, 1e-12);
}

TEST(ProtocolTest, MoreMissesNeverMeanFewerFailures) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> script(60, 0.8);
    int prev_failures = 0;
    for (int step = 0; step < 10; ++step) {
      script[1 + static_cast<int>(rng.Uniform(0, 59))] = 0.0;
      ScriptedTracker t(script);
      const int f =
          RunProtocol("m", Constant(60), t, ProtocolConfig{}).failures;
      // A new miss can hide at most one later miss inside its skip window
      // while adding itself, so the count never drops.
      ASSERT_GE(f, prev_failures);
      prev_failures = f;
    }
  }
}

TEST(ProtocolTest, TooShortSequenceThrows) {
  ScriptedTracker t({1.0});
  EXPECT_THROW(RunProtocol("s", Constant(1), t, ProtocolConfig{}), Error);
}

TEST(AccuracyTest, HandTrace) {
  std::vector<FrameRecord> frames{Rec(FrameStatus::kOk, 1.0),
                                  Rec(FrameStatus::kOk, 0.8),
                                  Rec(FrameStatus::kFail)};
  for (int i = 0; i < 4; ++i) frames.push_back(Rec(FrameStatus::kSkip));
  frames.push_back(Rec(FrameStatus::kInit));
  for (int i = 0; i < 10; ++i) frames.push_back(Rec(FrameStatus::kOk, 0.3));
  frames.push_back(Rec(FrameStatus::kOk, 0.6));
  frames.push_back(Rec(FrameStatus::kOk, 0.6));
  int counted = 0;
  EXPECT_DOUBLE_EQ(Accuracy(frames, 10, &counted), (1.0 + 0.8 + 0.6 + 0.6) / 4);
  EXPECT_DOUBLE_EQ(Accuracy(frames, 10), 0.75);
  EXPECT_EQ(counted, 4);
  SequenceResult r;
  r.frames = frames;
  Summarize(&r, ProtocolConfig{});
  EXPECT_EQ(r.failures, 1);
}

TEST(EaoTest, SingleFailedSegment) {
  const std::vector<Segment> seg{{{1.0, 1.0, 0.5, 0.0}, true}};
  const double want = (1.0 + 1.0 + 2.5 / 3.0 + 2.5 / 4.0) / 4.0;
  EXPECT_NEAR(Eao(seg, 1, 4), want, 1e-15);
  EXPECT_NEAR(Eao(seg, 1, 4), 0.8646, 1e-4);
  const std::vector<std::vector<FrameRecord>> runs{
      {Rec(FrameStatus::kInit), Rec(FrameStatus::kOk, 1.0),
       Rec(FrameStatus::kOk, 1.0), Rec(FrameStatus::kOk, 0.5),
       Rec(FrameStatus::kFail)}};
  EXPECT_NEAR(BruteForceEao(runs, 1, 4), want, 1e-15);
  EXPECT_NEAR(Eao(ExtractSegments(runs[0]), 1, 4), want, 1e-15);
}

TEST(EaoTest, ExtremeOverlaps) {
  EXPECT_DOUBLE_EQ(Eao(std::vector<Segment>{{std::vector<double>(60, 1.0),
                                             false}},
                       10, 50),
                   1.0);
  EXPECT_DOUBLE_EQ(Eao(std::vector<Segment>{{std::vector<double>(60, 0.0),
                                             false}},
                       10, 50),
                   0.0);
  // Nothing reaches the interval: no length contributes.
  EXPECT_EQ(Eao(std::vector<Segment>{{{0.9, 0.9}, false}}, 10, 50), 0.0);
  EXPECT_THROW(Eao(std::vector<Segment>{}, 10, 50), Error);
}

TEST(EaoTest, RandomProtocolRunsMatchBruteForce) {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<SequenceResult> results;
    std::vector<std::vector<FrameRecord>> runs;
    const int sequences = 1 + static_cast<int>(rng.Uniform(0, 4));
    for (int s = 0; s < sequences; ++s) {
      const int n = 20 + static_cast<int>(rng.Uniform(0, 60));
      std::vector<double> script(n);
      for (double& o : script) {
        o = rng.Bernoulli(0.05) ? 0.0 : rng.Uniform(0.05, 1.0);
      }
      ScriptedTracker t(script);
      results.push_back(RunProtocol("r", Constant(n), t, ProtocolConfig{}));
      runs.push_back(results.back().frames);
    }
    const ProtocolConfig p;
    ASSERT_NEAR(Eao(results, p), BruteForceEao(runs, p.eao_low, p.eao_high),
                1e-12);
  }
}

TEST(ResultsFileTest, RoundTripBothForms) {
  std::vector<double> script(12, 0.7);
  script[3] = 0.0;
  ScriptedTracker t(script);
  std::vector<RotBox> gt = Constant(12);
  const SequenceResult r = RunProtocol("f", gt, t, ProtocolConfig{});
  for (bool vot : {false, true}) {
    std::vector<FrameRecord> back = ParseResults(FormatResults(r.frames, vot));
    ASSERT_EQ(back.size(), r.frames.size());
    ScoreAgainst(&back, gt, OverlapKind::kPolygon);
    for (size_t i = 0; i < back.size(); ++i) {
      EXPECT_EQ(back[i].status, r.frames[i].status) << i;
      EXPECT_NEAR(back[i].overlap, r.frames[i].overlap, 1e-5) << i;
    }
  }
}

TEST(ResultsFileTest, Errors) {
  EXPECT_THROW(ParseResults(""), Error);
  EXPECT_THROW(ParseResults("0,bogus\n"), Error);
  std::vector<FrameRecord> frames = ParseResults("0,init\n1,skip\n");
  EXPECT_THROW(ScoreAgainst(&frames, Constant(3), OverlapKind::kPolygon),
               Error);
  try {
    ParseResults("");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

TEST(OverlapTest, KindsAgreeOnAxisAlignedBoxes) {
  const RotBox a = ToRotBox({5, 5, 10, 10}), b = ToRotBox({10, 5, 10, 10});
  EXPECT_NEAR(Overlap(a, b, OverlapKind::kPolygon), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(Overlap(a, b, OverlapKind::kAxisAligned), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(ParseOverlap(OverlapName(OverlapKind::kAxisAligned)),
            OverlapKind::kAxisAligned);
  EXPECT_THROW(ParseOverlap("area"), Error);
}

TEST(ProtocolConfigTest, Validation) {
  ProtocolConfig p;
  p.reinit_delay = 0;
  EXPECT_THROW(p.Validate(), Error);
  p = {};
  p.burn_in = -1;
  EXPECT_THROW(p.Validate(), Error);
  p = {};
  p.eao_low = 60;
  EXPECT_THROW(p.Validate(), Error);
}

TEST(RandomSearchTest, DefaultSpace) {
  const SearchSpace s;
  EXPECT_DOUBLE_EQ(s.k_c.lo, 0.40);
  EXPECT_DOUBLE_EQ(s.k_c.hi, 0.43);
  EXPECT_DOUBLE_EQ(s.k_p.lo, 0.0);
  EXPECT_DOUBLE_EQ(s.k_p.hi, 1.0);
  EXPECT_DOUBLE_EQ(s.k_f.lo, 0.0);
  EXPECT_DOUBLE_EQ(s.k_f.hi, 1.0);
  SearchSpace bad;
  bad.k_f = {0.8, 0.2};
  EXPECT_THROW(bad.Validate(), Error);
}

TEST(RandomSearchTest, SingleTrial) {
  const SearchResult r = RandomSearch(
      SearchSpace{}, 1, 5, ScoreConfig{},
      [](const ScoreConfig& c) { return c.k_f; });
  ASSERT_EQ(r.leaderboard.size(), 1u);
  EXPECT_EQ(r.best.k_f, r.leaderboard[0].config.k_f);
  EXPECT_GE(r.best.k_c, 0.40);
  EXPECT_LE(r.best.k_c, 0.43);
}

TEST(RandomSearchTest, ConstantObjectiveKeepsFirstTrial) {
  const SearchResult r = RandomSearch(SearchSpace{}, 9, 5, ScoreConfig{},
                                      [](const ScoreConfig&) { return 0.5; });
  ASSERT_EQ(r.leaderboard.size(), 9u);
  for (int i = 0; i < 9; ++i) EXPECT_EQ(r.leaderboard[i].index, i);
  EXPECT_EQ(r.best.k_p, r.leaderboard[0].config.k_p);
}

TEST(RandomSearchTest, FindsPlantedOptimum) {
  const double kc = 0.415, kp = 0.3, kf = 0.7;
  auto objective = [&](const ScoreConfig& c) {
    return -std::hypot((c.k_c - kc) / 0.03, c.k_p - kp, c.k_f - kf);
  };
  const SearchResult r =
      RandomSearch(SearchSpace{}, 400, 8, ScoreConfig{}, objective, 3);
  EXPECT_LT(-objective(r.best), 0.15);
  for (size_t i = 1; i < r.leaderboard.size(); ++i) {
    const Trial& a = r.leaderboard[i - 1];
    const Trial& b = r.leaderboard[i];
    ASSERT_TRUE(a.objective > b.objective ||
                (a.objective == b.objective && a.index < b.index));
  }
}

TEST(RandomSearchTest, ThreadCountDoesNotChangeResult) {
  auto objective = [](const ScoreConfig& c) {
    return std::round(10 * (c.k_p + c.k_f)) / 10;
  };
  const SearchResult one =
      RandomSearch(SearchSpace{}, 40, 2, ScoreConfig{}, objective, 1);
  const SearchResult many =
      RandomSearch(SearchSpace{}, 40, 2, ScoreConfig{}, objective, 4);
  for (size_t i = 0; i < 40; ++i) {
    ASSERT_EQ(one.leaderboard[i].index, many.leaderboard[i].index);
  }
}

TEST(ParallelForTest, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(100);
  ParallelFor(100, 4, [&](int i) { hits[i].fetch_add(1); });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

}  // namespace
}  // namespace uft
