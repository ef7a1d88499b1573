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

// Synthetic scene generator. Objects move over an empty background under an
// optional global camera shift; every frame yields a visible-object label
// map, the target's ground-truth box, and the exact backward flow.

#ifndef UFT_SCENE_H_
#define UFT_SCENE_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "uft/flow_mask.h"
#include "uft/geometry.h"
#include "uft/grid.h"

namespace uft {

enum class ShapeKind { kRectangle, kEllipse };

struct ObjectSpec {
  ShapeKind shape = ShapeKind::kRectangle;
  double width = 10.0;
  double height = 10.0;
  Point2 start;     // image position of the center at frame 0
  Point2 velocity;  // pixels per frame
  double wobble_amplitude = 0.0;  // vertical sinusoid, pixels
  double wobble_period = 0.0;     // frames; 0 disables
  double deform_amplitude = 0.0;  // relative size oscillation
  double deform_period = 0.0;     // frames; 0 disables
  bool is_target = false;
  // Reflect off the image border so the whole shape stays visible. When
  // false the object may leave the frame.
  bool bounce = true;
};

// Error model for the synthetic flow estimator, the mask source, and the
// appearance matcher.
struct NoiseModel {
  double flow_noise_scale = 0.0;   // base Laplace scale of per-pixel error
  double motion_noise_gain = 0.0;  // extra scale per pixel/frame of motion
  double glitch_rate = 0.0;    // per-frame chance of a coherent flow failure
  double glitch_scale = 0.0;   // Laplace scale of the coherent offset
  double glitch_radius = 0.0;  // radius of the failure region, pixels
  // Per-frame chance that the target and a nearby look-alike swap
  // correspondences: each one's pixels point back at the other's previous
  // position. Only look-alikes within swap_range pixels of the target
  // qualify (0 = any distance).
  double swap_rate = 0.0;
  double swap_range = 0.0;
  // Reported b = calibration_factor * true error scale (1 = calibrated).
  double calibration_factor = 1.0;
  double mask_corruption = 0.0;       // per-pixel flip probability
  double appearance_confusion = 0.0;  // [0, 1]
  double appearance_noise = 0.05;     // std of appearance score noise

  void Validate() const;
};

struct SceneSpec {
  std::string name = "scene";
  std::string scenario = "custom";
  int width = 64;
  int height = 64;
  int num_frames = 30;
  uint64_t seed = 0;
  std::vector<ObjectSpec> objects;
  Point2 camera_velocity;      // global image shift per frame
  double camera_jitter = 0.0;  // uniform extra shift per axis, +-pixels
  NoiseModel noise;

  // Throws kInvalidArgument naming the offending field.
  void Validate() const;
  int TargetIndex() const;
};

struct RenderedFrame {
  ScalarGrid labels;  // 0 background, k + 1 where object k is visible
  std::vector<AABox> object_boxes;  // full (unoccluded) extents
  AABox target_box;
  RotBox target_rot;
  FlowField flow;  // exact backward flow, scales at kMinScale
};

// Deterministic in (spec, seed). Frame 0 carries identity flow.
std::vector<RenderedFrame> RenderScene(const SceneSpec& spec);

// Per-frame global image shift (frame t relative to t - 1); entry 0 is zero.
std::vector<Point2> CameraShifts(const SceneSpec& spec);

// Accumulated camera displacement at every frame.
std::vector<Point2> CameraOffsets(const SceneSpec& spec);

// Image-plane center of `object` at every frame, as rendered.
std::vector<Point2> ObjectCenters(const SceneSpec& spec, int object);

BinaryMask ObjectMask(const ScalarGrid& labels, int object);

// mean += Laplace(noise_scale(i)) per axis; reported scale is
// max(kMinScale, calibration_factor * noise_scale(i)).
FlowField CorruptFlow(const FlowField& true_flow, const ScalarGrid& noise_scale,
                      double calibration_factor, uint64_t seed);
// Spatially uniform convenience form using noise.flow_noise_scale.
FlowField CorruptFlow(const FlowField& true_flow, const NoiseModel& noise,
                      uint64_t seed);

// Coherent estimator failure: inside the disk every mean is displaced by
// `offset` and the reported scale is raised to at least `reported_scale`.
void ApplyFlowGlitch(FlowField* flow, const Point2& center, double radius,
                     const Point2& offset, double reported_scale);

// Heteroscedastic per-pixel error scale for one rendered frame:
// base + gain * |object motion relative to the background|.
ScalarGrid FlowNoiseScale(const RenderedFrame& frame, const Point2& camera_shift,
                          const NoiseModel& noise);

// The noisy, uncertainty-annotated flow a tracker consumes for frame t.
// Error-free flow of frame 0; later frames get per-pixel noise and, at the
// configured rates, one coherent glitch and one look-alike swap. Reported
// scales follow the error magnitudes times the calibration factor.
FlowField SynthesizeFlow(std::span<const RenderedFrame> frames,
                         const SceneSpec& spec, int frame_index);

// Adds `offset` to the flow of every pixel labeled `object` and raises its
// scales to calibration_factor * |offset| per axis.
void ApplyFlowSwap(FlowField* flow, const ScalarGrid& labels, int object,
                   const Point2& offset, double calibration_factor);

}  // namespace uft

#endif  // UFT_SCENE_H_
