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

#include "uft/ablation.h"

#include <cstdio>
#include <utility>

#include "uft/error.h"
#include "uft/rng.h"
#include "uft/synthetic.h"

namespace uft {

namespace {

constexpr uint64_t kProposalStream = 21;
constexpr uint64_t kAppearanceStream = 22;
constexpr uint64_t kMaskStream = 23;

TrackerConfig TrackerOf(const RunConfig& config) {
  return {config.score, config.variant, config.kernel};
}

}  // namespace

SyntheticSequenceTracker::SyntheticSequenceTracker(const Sequence& sequence,
                                                   const RunConfig& config)
    : sequence_(sequence), config_(config), tracker_(TrackerOf(config)) {}

void SyntheticSequenceTracker::Init(int frame) {
  last_ = tracker_.Init(sequence_.frames.at(frame).groundtruth,
                        sequence_.TargetMask(frame).ToProbMask(), frame);
}

RotBox SyntheticSequenceTracker::Track(int frame) {
  const SequenceFrame& f = sequence_.frames.at(frame);
  const uint64_t seed = sequence_.spec.seed;
  const uint64_t run = config_.seed;
  const uint64_t t = static_cast<uint64_t>(frame);
  const NoiseModel& noise = sequence_.spec.noise;

  const AABox gt = sequence_.TargetBox(frame);
  const std::vector<AABox> distractors = sequence_.DistractorBoxes(frame);
  const std::vector<AABox> boxes = GenerateProposals(
      tracker_.state().prev_box, gt, distractors, sequence_.width(),
      sequence_.height(), config_.proposals,
      DeriveSeed(seed, {run, kProposalStream, t}));
  const std::vector<double> d = SynthAppearance(
      boxes, gt, distractors, noise.appearance_confusion,
      noise.appearance_noise, DeriveSeed(seed, {run, kAppearanceStream, t}));
  std::vector<Proposal> proposals;
  proposals.reserve(boxes.size());
  for (size_t i = 0; i < boxes.size(); ++i) proposals.push_back({boxes[i], d[i]});

  const SyntheticMaskSource masks(f.labels, noise.mask_corruption,
                                  DeriveSeed(seed, {run, kMaskStream, t}));
  StepResult step = tracker_.Track(proposals, masks, f.flow);
  last_ = std::move(step.diagnostics);
  picks_.push_back({frame, last_.selected, boxes[last_.selected]});
  return step.output;
}

std::vector<RotBox> Groundtruth(const Sequence& sequence) {
  std::vector<RotBox> out;
  out.reserve(sequence.frames.size());
  for (const SequenceFrame& f : sequence.frames) out.push_back(f.groundtruth);
  return out;
}

SequenceResult TrackSequence(
    const Sequence& sequence, const RunConfig& config,
    std::vector<SyntheticSequenceTracker::Pick>* picks) {
  SyntheticSequenceTracker tracker(sequence, config);
  const std::vector<RotBox> gt = Groundtruth(sequence);
  SequenceResult result = RunProtocol(sequence.name(), gt, tracker,
                                      config.protocol, config.overlap);
  if (picks) *picks = tracker.picks();
  return result;
}

Metrics Aggregate(std::span<const SequenceResult> results,
                  const ProtocolConfig& protocol) {
  Metrics m;
  double overlap_sum = 0.0;
  int counted = 0;
  for (const SequenceResult& r : results) {
    m.failures += r.failures;
    m.frames += r.length();
    overlap_sum += r.accuracy * r.accuracy_frames;
    counted += r.accuracy_frames;
  }
  m.accuracy = counted > 0 ? overlap_sum / counted : 0.0;
  m.robustness = m.frames > 0 ? 100.0 * m.failures / m.frames : 0.0;
  m.eao = results.empty() ? 0.0 : Eao(results, protocol);
  return m;
}

std::vector<AblationRow> AblationReport(std::span<const Sequence> sequences,
                                        const RunConfig& config,
                                        std::span<const Variant> variants,
                                        int jobs) {
  if (sequences.empty()) ThrowInvalid("ablation needs at least one sequence");
  const size_t n = sequences.size();
  std::vector<AblationRow> rows;
  for (Variant v : variants) {
    rows.push_back({v, {}, std::vector<SequenceResult>(n)});
  }
  ParallelFor(static_cast<int>(rows.size() * n), jobs, [&](int job) {
    AblationRow& row = rows[job / n];
    RunConfig c = config;
    c.variant.mode = row.variant;
    row.results[job % n] = TrackSequence(sequences[job % n], c);
  });
  for (AblationRow& row : rows) {
    row.metrics = Aggregate(row.results, config.protocol);
  }
  return rows;
}

std::string FormatMetricsCsv(const std::string& label, const Metrics& m) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s,%.6f,%.6f,%.6f,%d,%d\n", label.c_str(),
                m.eao, m.robustness, m.accuracy, m.failures, m.frames);
  return buf;
}

std::string FormatAblationCsv(std::span<const AblationRow> rows) {
  std::string out = std::string(kAblationCsvHeader) + "\n";
  for (const AblationRow& row : rows) {
    out += FormatMetricsCsv(std::string(VariantName(row.variant)),
                            row.metrics);
  }
  return out;
}

std::string FormatAblationTable(std::span<const AblationRow> rows,
                                const RunConfig& config) {
  std::string out;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "EAO interval [%d, %d], overlap %s, robustness in failures "
                "per 100 frames\n",
                config.protocol.eao_low, config.protocol.eao_high,
                std::string(OverlapName(config.overlap)).c_str());
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-16s %8s %11s %9s %9s %7s\n", "variant",
                "EAO", "robustness", "accuracy", "failures", "frames");
  out += buf;
  for (const AblationRow& row : rows) {
    const Metrics& m = row.metrics;
    std::snprintf(buf, sizeof(buf), "%-16s %8.4f %11.3f %9.4f %9d %7d\n",
                  std::string(VariantName(row.variant)).c_str(), m.eao,
                  m.robustness, m.accuracy, m.failures, m.frames);
    out += buf;
  }
  return out;
}

}  // namespace uft
