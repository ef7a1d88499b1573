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

#include "uft/synthetic.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "uft/error.h"
#include "uft/rng.h"
#include "uft/scoring.h"

namespace uft {

void ProposalConfig::Validate() const {
  if (count < 1) ThrowInvalid("proposal count must be >= 1");
  if (gt_jitters < 1) ThrowInvalid("gt_jitters must be >= 1");
  if (!(jitter >= 0.0)) ThrowInvalid("jitter must be >= 0");
  if (!(grid_step > 0.0)) ThrowInvalid("grid_step must be positive");
}

bool InFrame(const AABox& box, int width, int height) {
  return box.valid() && BoxPixelCount(box, width, height) > 0;
}

std::vector<AABox> GenerateProposals(const AABox& previous_box,
                                     const std::optional<AABox>& gt,
                                     std::span<const AABox> distractors,
                                     int width, int height,
                                     const ProposalConfig& config,
                                     uint64_t seed) {
  config.Validate();
  const size_t n = static_cast<size_t>(config.count);
  std::vector<AABox> out;
  out.reserve(n);
  Rng rng(seed);

  if (gt && InFrame(*gt, width, height)) {
    out.push_back(*gt);
    for (int k = 1; k < config.gt_jitters && out.size() < n; ++k) {
      const double j = config.jitter;
      out.push_back({gt->cx + rng.Uniform(-j, j) * gt->w,
                     gt->cy + rng.Uniform(-j, j) * gt->h,
                     gt->w * (1.0 + rng.Uniform(-j, j)),
                     gt->h * (1.0 + rng.Uniform(-j, j))});
    }
  }
  for (const AABox& d : distractors) {
    if (out.size() >= n) break;
    if (InFrame(d, width, height)) out.push_back(d);
  }

  // Grid cells in rings of increasing distance; the ring order is fixed so
  // the set is deterministic without consuming randomness.
  std::vector<std::pair<int, int>> cells;
  const int reach = 1 + static_cast<int>(std::ceil(std::sqrt(double(n))));
  for (int i = -reach; i <= reach; ++i) {
    for (int j = -reach; j <= reach; ++j) cells.emplace_back(i, j);
  }
  std::stable_sort(cells.begin(), cells.end(), [](auto a, auto b) {
    return a.first * a.first + a.second * a.second <
           b.first * b.first + b.second * b.second;
  });
  const double sx = config.grid_step * previous_box.w;
  const double sy = config.grid_step * previous_box.h;
  for (auto [i, j] : cells) {
    if (out.size() >= n) break;
    out.push_back({previous_box.cx + j * sx, previous_box.cy + i * sy,
                   previous_box.w, previous_box.h});
  }
  return out;
}

double AppearanceCurve(double iou) {
  return std::clamp(iou, 0.0, 1.0);
}

std::vector<double> SynthAppearance(std::span<const AABox> boxes,
                                    const std::optional<AABox>& gt,
                                    std::span<const AABox> distractors,
                                    double confusion, double noise,
                                    uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(boxes.size());
  for (const AABox& box : boxes) {
    double d = gt ? AppearanceCurve(IouAxisAligned(box, *gt)) : 0.0;
    double distractor = 0.0;
    for (const AABox& other : distractors) {
      distractor = std::max(distractor, IouAxisAligned(box, other));
    }
    d += confusion * AppearanceCurve(distractor);
    // Drawn for every box so each index keeps its stream position.
    const double eps = rng.Normal();
    if (noise > 0.0) d += noise * eps;
    out.push_back(std::clamp(d, 0.0, 1.0));
  }
  return out;
}

SyntheticMaskSource::SyntheticMaskSource(const ScalarGrid& labels,
                                         double corruption, uint64_t seed)
    : labels_(labels), corruption_(corruption), seed_(seed) {}

ProbMask SyntheticMaskSource::PredictMask(const Proposal& proposal,
                                          size_t index) const {
  const AABox& box = proposal.box;
  const int width = labels_.width();
  const int height = labels_.height();

  std::map<int, size_t> votes;
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const int id = static_cast<int>(labels_.at(r, c));
      if (id > 0 && c > box.left() && c < box.right() && r > box.top() &&
          r < box.bottom()) {
        ++votes[id];
      }
    }
  }
  ScalarGrid out(width, height, 0.0);
  if (votes.empty()) return ProbMask(std::move(out));
  int owner = votes.begin()->first;
  for (auto [id, count] : votes) {
    if (count > votes[owner]) owner = id;
  }

  const AABox region{box.cx, box.cy, 2.0 * box.w, 2.0 * box.h};
  Rng rng(DeriveSeed(seed_, {index}));
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      if (!(c > region.left() && c < region.right() && r > region.top() &&
            r < region.bottom())) {
        continue;
      }
      double v = labels_.at(r, c) == owner ? kForeground : kBackground;
      if (corruption_ > 0.0 && rng.Bernoulli(corruption_)) v = 1.0 - v;
      out.at(r, c) = v;
    }
  }
  return ProbMask(std::move(out));
}

}  // namespace uft
