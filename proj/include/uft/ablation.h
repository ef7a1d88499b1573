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

// Runs the tracker over synthetic sequences under the reset protocol and
// tabulates the variants side by side.

#ifndef UFT_ABLATION_H_
#define UFT_ABLATION_H_

#include <span>
#include <string>
#include <vector>

#include "uft/config.h"
#include "uft/dataset.h"
#include "uft/eval.h"
#include "uft/tracker.h"

namespace uft {

// Feeds a tracker with the synthetic proposal, appearance, and mask
// providers of one sequence. Randomness depends only on the sequence seed,
// the run seed, and the frame index, so variants see identical inputs
// whenever their tracker states agree.
class SyntheticSequenceTracker : public SequenceTracker {
 public:
  struct Pick {
    int frame = 0;
    size_t index = 0;
    AABox box;
  };

  SyntheticSequenceTracker(const Sequence& sequence, const RunConfig& config);

  void Init(int frame) override;
  RotBox Track(int frame) override;

  const std::vector<Pick>& picks() const { return picks_; }
  const Diagnostics& last_diagnostics() const { return last_; }

 private:
  const Sequence& sequence_;
  RunConfig config_;
  Tracker tracker_;
  std::vector<Pick> picks_;
  Diagnostics last_;
};

std::vector<RotBox> Groundtruth(const Sequence& sequence);

SequenceResult TrackSequence(
    const Sequence& sequence, const RunConfig& config,
    std::vector<SyntheticSequenceTracker::Pick>* picks = nullptr);

struct Metrics {
  double eao = 0.0;
  double robustness = 0.0;  // failures per 100 tracked frames
  double accuracy = 0.0;    // pooled over all counted frames
  int failures = 0;
  int frames = 0;
};

Metrics Aggregate(std::span<const SequenceResult> results,
                  const ProtocolConfig& protocol);

struct AblationRow {
  Variant variant;
  Metrics metrics;
  std::vector<SequenceResult> results;
};

// Every (variant, sequence) pair is an independent job.
std::vector<AblationRow> AblationReport(std::span<const Sequence> sequences,
                                        const RunConfig& config,
                                        std::span<const Variant> variants,
                                        int jobs = 1);

inline constexpr char kAblationCsvHeader[] =
    "variant,eao,robustness,accuracy,failures,frames";

std::string FormatAblationCsv(std::span<const AblationRow> rows);
std::string FormatAblationTable(std::span<const AblationRow> rows,
                                const RunConfig& config);

std::string FormatMetricsCsv(const std::string& label, const Metrics& m);

}  // namespace uft

#endif  // UFT_ABLATION_H_
