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

// Reset-based evaluation: a tracker runs until its output stops overlapping
// the ground truth, sits out a few frames, and is re-initialized.

#ifndef UFT_EVAL_H_
#define UFT_EVAL_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uft/geometry.h"
#include "uft/scoring.h"

namespace uft {

struct ProtocolConfig {
  int reinit_delay = 5;  // frames from a failure to the re-initialization
  int burn_in = 10;      // frames after each init left out of accuracy
  int eao_low = 10;      // inclusive range of run lengths averaged by EAO
  int eao_high = 50;

  void Validate() const;
};

enum class OverlapKind { kPolygon, kAxisAligned };

std::string_view OverlapName(OverlapKind kind);
OverlapKind ParseOverlap(std::string_view name);
double Overlap(const RotBox& output, const RotBox& groundtruth,
               OverlapKind kind);

enum class FrameStatus { kInit, kOk, kFail, kSkip };

std::string_view StatusName(FrameStatus status);

struct FrameRecord {
  FrameStatus status = FrameStatus::kSkip;
  double overlap = 0.0;         // meaningful for kOk; 0 for kFail
  std::optional<RotBox> output;  // present for kOk and kFail
};

struct SequenceResult {
  std::string name;
  std::vector<FrameRecord> frames;
  int failures = 0;
  double accuracy = 0.0;
  int accuracy_frames = 0;  // frames averaged into accuracy

  int length() const { return static_cast<int>(frames.size()); }
  double FailuresPer100() const;
};

// Something that can be (re)started on a frame and then stepped forward.
class SequenceTracker {
 public:
  virtual ~SequenceTracker() = default;
  virtual void Init(int frame) = 0;
  virtual RotBox Track(int frame) = 0;
};

// Runs the reset protocol over frames [0, groundtruth.size()). Throws
// kInvalidArgument for fewer than 2 frames.
SequenceResult RunProtocol(std::string name,
                           std::span<const RotBox> groundtruth,
                           SequenceTracker& tracker,
                           const ProtocolConfig& protocol,
                           OverlapKind overlap = OverlapKind::kPolygon);

// Mean overlap of kOk frames more than `burn_in` frames after the latest
// init. Frames before the first init are counted. 0 when nothing counts.
double Accuracy(std::span<const FrameRecord> frames, int burn_in,
                int* counted = nullptr);

// Fills failures and accuracy from the frame records.
void Summarize(SequenceResult* result, const ProtocolConfig& protocol);

// A run from an init up to and including its failure frame (or the end).
struct Segment {
  std::vector<double> overlaps;
  bool failed = false;
};

// The init frame itself is not part of its segment. Records before the
// first init form a segment of their own.
std::vector<Segment> ExtractSegments(std::span<const FrameRecord> frames);

// Expected average overlap over run lengths [eao_low, eao_high]. For each
// length L a failed segment contributes its overlaps zero-padded to L and
// a surviving segment contributes its first L overlaps if it is at least L
// long. Lengths with no contributing segment are skipped; 0 if none.
// Throws kInvalidArgument on empty input.
double Eao(std::span<const SequenceResult> results,
           const ProtocolConfig& protocol);
double Eao(std::span<const Segment> segments, int low, int high);

// Results-file text. One line per frame: "index,status" plus 8 corner
// coordinates for ok frames. The VOT-compatible form writes "1" for init,
// "2" for fail, "0" for skip, and bare coordinates otherwise.
std::string FormatResults(std::span<const FrameRecord> frames,
                          bool vot_compat = false);
// Accepts either form. Overlaps are left at 0; see ScoreAgainst.
std::vector<FrameRecord> ParseResults(const std::string& text);
// Recomputes the overlap of every record that carries an output.
void ScoreAgainst(std::vector<FrameRecord>* frames,
                  std::span<const RotBox> groundtruth, OverlapKind overlap);

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

struct SearchSpace {
  Range k_c{0.40, 0.43};
  Range k_p{0.0, 1.0};
  Range k_f{0.0, 1.0};

  void Validate() const;
};

struct Trial {
  int index = 0;
  ScoreConfig config;
  double objective = 0.0;
};

struct SearchResult {
  ScoreConfig best;
  std::vector<Trial> leaderboard;  // descending objective, stable
};

// Samples `trials` configs uniformly (all drawn before any evaluation) and
// evaluates them on up to `jobs` threads. Ties go to the earliest trial.
SearchResult RandomSearch(
    const SearchSpace& space, int trials, uint64_t seed,
    const ScoreConfig& base,
    const std::function<double(const ScoreConfig&)>& objective,
    int jobs = 1);

// Runs fn(0..count-1) on up to `jobs` threads.
void ParallelFor(int count, int jobs, const std::function<void(int)>& fn);

}  // namespace uft

#endif  // UFT_EVAL_H_
