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

// Synthetic sequences: in-memory form, on-disk layout, and the benchmark
// suite used by the ablation study.
//
// Directory layout of one sequence:
//   sequence.txt          scene spec (key = value)
//   groundtruth.txt       per frame: 8 comma-separated corner coordinates
//   objects.txt           per frame: cx,cy,w,h for every object
//   flow/NNNNN.ufg        4 channels: u, v, b_u, b_v
//   masks/NNNNN.ufg       1 channel: target mask
//   labels/NNNNN.ufg      1 channel: object id per pixel (0 background)

#ifndef UFT_DATASET_H_
#define UFT_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "uft/flow_mask.h"
#include "uft/geometry.h"
#include "uft/grid.h"
#include "uft/scene.h"

namespace uft {

struct SequenceFrame {
  ScalarGrid labels;
  std::vector<AABox> object_boxes;
  RotBox groundtruth;
  FlowField flow;
};

struct Sequence {
  SceneSpec spec;
  std::vector<SequenceFrame> frames;

  const std::string& name() const { return spec.name; }
  int width() const { return spec.width; }
  int height() const { return spec.height; }
  int target() const { return spec.TargetIndex(); }
  int num_frames() const { return static_cast<int>(frames.size()); }

  BinaryMask TargetMask(int frame) const;
  AABox TargetBox(int frame) const;
  std::vector<AABox> DistractorBoxes(int frame) const;
};

// Renders and synthesizes flow. Values are quantized to their on-disk
// precision so a written and re-read sequence compares equal.
Sequence BuildSequence(const SceneSpec& spec);

void WriteSequence(const Sequence& sequence, const std::filesystem::path& dir);
// Throws kData on missing or inconsistent files; a missing frame range is
// named in the message.
Sequence ReadSequence(const std::filesystem::path& dir);

// A sequence directory, or a directory whose subdirectories are sequences
// (read in name order).
std::vector<Sequence> ReadDataset(const std::filesystem::path& dir);

// Scene spec text. Errors are kData and name the offending key.
SceneSpec ParseSceneSpec(const std::string& text);
std::string FormatSceneSpec(const SceneSpec& spec);

// Seeded scenes with distractors, camera motion, and heteroscedastic flow
// noise, cycling through the scenario types below.
std::vector<SceneSpec> BenchmarkSuite(int count, uint64_t seed);

// Scenes with a single static, well-separated target and exact flow.
std::vector<SceneSpec> StaticSuite(int count, uint64_t seed);

}  // namespace uft

#endif  // UFT_DATASET_H_
