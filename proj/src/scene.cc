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

#include "uft/scene.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uft/error.h"
#include "uft/rng.h"

namespace uft {

namespace {

enum SeedStream : uint64_t {
  kCameraStream = 1,
  kFlowNoiseStream = 2,
  kGlitchStream = 3,
  kSwapStream = 4,
};

struct Pose {
  Point2 center;
  double scale = 1.0;
};

// Folds x into [lo, hi] as if bouncing between two walls.
double Reflect(double x, double lo, double hi) {
  if (hi <= lo) return 0.5 * (lo + hi);
  const double span = hi - lo;
  double m = std::fmod(x - lo, 2.0 * span);
  if (m < 0.0) m += 2.0 * span;
  return m <= span ? lo + m : lo + 2.0 * span - m;
}

double Sinusoid(double amplitude, double period, int t) {
  if (period <= 0.0 || amplitude == 0.0) return 0.0;
  return amplitude * std::sin(2.0 * std::numbers::pi * t / period);
}

std::vector<Point2> CumulativeOffsets(const std::vector<Point2>& shifts) {
  std::vector<Point2> out(shifts.size());
  Point2 acc;
  for (size_t t = 0; t < shifts.size(); ++t) {
    acc.x += shifts[t].x;
    acc.y += shifts[t].y;
    out[t] = acc;
  }
  return out;
}

Pose PoseAt(const ObjectSpec& obj, int t, const Point2& camera_offset,
            int width, int height) {
  Pose pose;
  pose.scale = 1.0 + Sinusoid(obj.deform_amplitude, obj.deform_period, t);
  pose.center.x = obj.start.x + obj.velocity.x * t + camera_offset.x;
  pose.center.y = obj.start.y + obj.velocity.y * t + camera_offset.y +
                  Sinusoid(obj.wobble_amplitude, obj.wobble_period, t);
  if (obj.bounce) {
    const double hw = 0.5 * obj.width * pose.scale;
    const double hh = 0.5 * obj.height * pose.scale;
    pose.center.x = Reflect(pose.center.x, hw - 0.5, width - 0.5 - hw);
    pose.center.y = Reflect(pose.center.y, hh - 0.5, height - 0.5 - hh);
  }
  return pose;
}

bool Covers(const ObjectSpec& obj, const Pose& pose, double x, double y) {
  const double hw = 0.5 * obj.width * pose.scale;
  const double hh = 0.5 * obj.height * pose.scale;
  const double dx = x - pose.center.x;
  const double dy = y - pose.center.y;
  if (obj.shape == ShapeKind::kRectangle) {
    return std::abs(dx) < hw && std::abs(dy) < hh;
  }
  return (dx * dx) / (hw * hw) + (dy * dy) / (hh * hh) < 1.0;
}

void Require(bool ok, const std::string& field, const std::string& why) {
  if (!ok) ThrowInvalid(field + ": " + why);
}

}  // namespace

void NoiseModel::Validate() const {
  Require(flow_noise_scale >= 0.0, "noise.flow_scale", "must be >= 0");
  Require(motion_noise_gain >= 0.0, "noise.motion_gain", "must be >= 0");
  Require(glitch_rate >= 0.0 && glitch_rate <= 1.0, "noise.glitch_rate",
          "must lie in [0, 1]");
  Require(glitch_scale >= 0.0, "noise.glitch_scale", "must be >= 0");
  Require(glitch_radius >= 0.0, "noise.glitch_radius", "must be >= 0");
  Require(swap_rate >= 0.0 && swap_rate <= 1.0, "noise.swap_rate",
          "must lie in [0, 1]");
  Require(swap_range >= 0.0, "noise.swap_range", "must be >= 0");
  Require(calibration_factor >= 0.0, "noise.calibration", "must be >= 0");
  Require(mask_corruption >= 0.0 && mask_corruption <= 1.0,
          "noise.mask_corruption", "must lie in [0, 1]");
  Require(appearance_confusion >= 0.0 && appearance_confusion <= 1.0,
          "noise.appearance_confusion", "must lie in [0, 1]");
  Require(appearance_noise >= 0.0, "noise.appearance_noise", "must be >= 0");
}

void SceneSpec::Validate() const {
  Require(width >= 1 && height >= 1, "width/height", "must be positive");
  Require(num_frames >= 1, "frames", "must be positive");
  Require(camera_jitter >= 0.0, "camera.jitter", "must be >= 0");
  noise.Validate();
  int targets = 0;
  for (size_t k = 0; k < objects.size(); ++k) {
    const ObjectSpec& obj = objects[k];
    const std::string key = "object." + std::to_string(k);
    Require(obj.width > 0.0 && obj.height > 0.0, key + ".size",
            "must be positive");
    Require(std::abs(obj.deform_amplitude) < 1.0, key + ".deform",
            "amplitude must lie in (-1, 1)");
    const double grow = 1.0 + std::abs(obj.deform_amplitude);
    Require(!obj.bounce ||
                (obj.width * grow <= width && obj.height * grow <= height),
            key + ".size", "does not fit inside the frame");
    if (obj.is_target) ++targets;
  }
  Require(targets == 1, "object.*.target", "exactly one target required");
}

int SceneSpec::TargetIndex() const {
  for (size_t k = 0; k < objects.size(); ++k) {
    if (objects[k].is_target) return static_cast<int>(k);
  }
  ThrowInvalid("object.*.target: exactly one target required");
}

std::vector<Point2> CameraShifts(const SceneSpec& spec) {
  std::vector<Point2> shifts(static_cast<size_t>(spec.num_frames));
  Rng rng(DeriveSeed(spec.seed, {kCameraStream}));
  for (int t = 1; t < spec.num_frames; ++t) {
    shifts[t] = spec.camera_velocity;
    if (spec.camera_jitter > 0.0) {
      shifts[t].x += rng.Uniform(-spec.camera_jitter, spec.camera_jitter);
      shifts[t].y += rng.Uniform(-spec.camera_jitter, spec.camera_jitter);
    }
  }
  return shifts;
}

std::vector<Point2> CameraOffsets(const SceneSpec& spec) {
  return CumulativeOffsets(CameraShifts(spec));
}

std::vector<Point2> ObjectCenters(const SceneSpec& spec, int object) {
  if (object < 0 || object >= static_cast<int>(spec.objects.size())) {
    ThrowInvalid("object index out of range");
  }
  const std::vector<Point2> offsets = CameraOffsets(spec);
  std::vector<Point2> out;
  for (int t = 0; t < spec.num_frames; ++t) {
    out.push_back(
        PoseAt(spec.objects[object], t, offsets[t], spec.width, spec.height)
            .center);
  }
  return out;
}

std::vector<RenderedFrame> RenderScene(const SceneSpec& spec) {
  spec.Validate();
  const int target = spec.TargetIndex();
  const std::vector<Point2> shifts = CameraShifts(spec);
  const std::vector<Point2> offsets = CumulativeOffsets(shifts);

  std::vector<std::vector<Pose>> poses(spec.objects.size());
  for (size_t k = 0; k < spec.objects.size(); ++k) {
    for (int t = 0; t < spec.num_frames; ++t) {
      poses[k].push_back(
          PoseAt(spec.objects[k], t, offsets[t], spec.width, spec.height));
    }
  }

  std::vector<RenderedFrame> frames;
  frames.reserve(static_cast<size_t>(spec.num_frames));
  for (int t = 0; t < spec.num_frames; ++t) {
    ScalarGrid labels(spec.width, spec.height, 0.0);
    FlowField flow = FlowField::Constant(spec.width, spec.height,
                                         -shifts[t].x, -shifts[t].y,
                                         kMinScale);
    // Later objects overwrite earlier ones.
    for (size_t k = 0; k < spec.objects.size(); ++k) {
      const ObjectSpec& obj = spec.objects[k];
      const Pose& now = poses[k][t];
      const Pose& before = poses[k][t > 0 ? t - 1 : 0];
      const double ratio = before.scale / now.scale;
      for (int r = 0; r < spec.height; ++r) {
        for (int c = 0; c < spec.width; ++c) {
          if (!Covers(obj, now, c, r)) continue;
          labels.at(r, c) = static_cast<double>(k + 1);
          const double sx = before.center.x + (c - now.center.x) * ratio;
          const double sy = before.center.y + (r - now.center.y) * ratio;
          flow.mean_u.at(r, c) = t > 0 ? sx - c : 0.0;
          flow.mean_v.at(r, c) = t > 0 ? sy - r : 0.0;
        }
      }
    }

    RenderedFrame frame{std::move(labels), {}, {}, {}, std::move(flow)};
    for (size_t k = 0; k < spec.objects.size(); ++k) {
      const Pose& p = poses[k][t];
      frame.object_boxes.push_back({p.center.x, p.center.y,
                                    spec.objects[k].width * p.scale,
                                    spec.objects[k].height * p.scale});
    }
    frame.target_box = frame.object_boxes[target];
    frame.target_rot = ToRotBox(frame.target_box);
    frames.push_back(std::move(frame));
  }
  return frames;
}

BinaryMask ObjectMask(const ScalarGrid& labels, int object) {
  BinaryMask mask(labels.width(), labels.height());
  const double id = object + 1.0;
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      if (labels.at(r, c) == id) mask.set(r, c, true);
    }
  }
  return mask;
}

FlowField CorruptFlow(const FlowField& true_flow, const ScalarGrid& noise_scale,
                      double calibration_factor, uint64_t seed) {
  true_flow.Validate();
  if (!noise_scale.SameShape(true_flow.mean_u)) {
    ThrowInvalid("noise scale map shape differs from flow");
  }
  FlowField out = true_flow;
  Rng rng(seed);
  auto scales = noise_scale.values();
  auto mu = out.mean_u.mutable_values();
  auto mv = out.mean_v.mutable_values();
  auto bu = out.scale_u.mutable_values();
  auto bv = out.scale_v.mutable_values();
  for (size_t i = 0; i < scales.size(); ++i) {
    const double s = scales[i];
    if (s > 0.0) {
      mu[i] += rng.Laplace(s);
      mv[i] += rng.Laplace(s);
    }
    const double reported = std::max(kMinScale, calibration_factor * s);
    bu[i] = reported;
    bv[i] = reported;
  }
  return out;
}

FlowField CorruptFlow(const FlowField& true_flow, const NoiseModel& noise,
                      uint64_t seed) {
  return CorruptFlow(true_flow,
                     ScalarGrid(true_flow.width(), true_flow.height(),
                                noise.flow_noise_scale),
                     noise.calibration_factor, seed);
}

void ApplyFlowGlitch(FlowField* flow, const Point2& center, double radius,
                     const Point2& offset, double reported_scale) {
  const double r2 = radius * radius;
  const double floor_scale = std::max(kMinScale, reported_scale);
  for (int r = 0; r < flow->height(); ++r) {
    for (int c = 0; c < flow->width(); ++c) {
      const double dx = c - center.x;
      const double dy = r - center.y;
      if (dx * dx + dy * dy > r2) continue;
      flow->mean_u.at(r, c) += offset.x;
      flow->mean_v.at(r, c) += offset.y;
      flow->scale_u.at(r, c) = std::max(flow->scale_u.at(r, c), floor_scale);
      flow->scale_v.at(r, c) = std::max(flow->scale_v.at(r, c), floor_scale);
    }
  }
}

ScalarGrid FlowNoiseScale(const RenderedFrame& frame, const Point2& camera_shift,
                          const NoiseModel& noise) {
  ScalarGrid scale(frame.flow.width(), frame.flow.height(),
                   noise.flow_noise_scale);
  if (noise.motion_noise_gain <= 0.0) return scale;
  for (int r = 0; r < scale.height(); ++r) {
    for (int c = 0; c < scale.width(); ++c) {
      if (frame.labels.at(r, c) == 0.0) continue;
      const double du = frame.flow.mean_u.at(r, c) + camera_shift.x;
      const double dv = frame.flow.mean_v.at(r, c) + camera_shift.y;
      scale.at(r, c) += noise.motion_noise_gain * std::hypot(du, dv);
    }
  }
  return scale;
}

void ApplyFlowSwap(FlowField* flow, const ScalarGrid& labels, int object,
                   const Point2& offset, double calibration_factor) {
  const double id = object + 1.0;
  const double su = std::max(kMinScale, calibration_factor * std::abs(offset.x));
  const double sv = std::max(kMinScale, calibration_factor * std::abs(offset.y));
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      if (labels.at(r, c) != id) continue;
      flow->mean_u.at(r, c) += offset.x;
      flow->mean_v.at(r, c) += offset.y;
      flow->scale_u.at(r, c) = std::max(flow->scale_u.at(r, c), su);
      flow->scale_v.at(r, c) = std::max(flow->scale_v.at(r, c), sv);
    }
  }
}

FlowField SynthesizeFlow(std::span<const RenderedFrame> frames,
                         const SceneSpec& spec, int frame_index) {
  const RenderedFrame& frame = frames[frame_index];
  if (frame_index == 0) return frame.flow;
  const RenderedFrame& previous = frames[frame_index - 1];
  const NoiseModel& noise = spec.noise;
  const int target = spec.TargetIndex();
  const Point2 shift = CameraShifts(spec)[frame_index];
  FlowField flow = CorruptFlow(
      frame.flow, FlowNoiseScale(frame, shift, noise),
      noise.calibration_factor,
      DeriveSeed(spec.seed, {kFlowNoiseStream, uint64_t(frame_index)}));

  Rng rng(DeriveSeed(spec.seed, {kGlitchStream, uint64_t(frame_index)}));
  if (noise.glitch_scale > 0.0 && noise.glitch_radius > 0.0 &&
      rng.Bernoulli(noise.glitch_rate)) {
    // Half of the failures hit the target, the rest a random object.
    size_t object = static_cast<size_t>(target);
    if (!rng.Bernoulli(0.5) && !frame.object_boxes.empty()) {
      object = static_cast<size_t>(rng.Next() % frame.object_boxes.size());
    }
    const AABox& box = frame.object_boxes[object];
    const double jitter = 0.5 * noise.glitch_radius;
    const Point2 center{box.cx + rng.Uniform(-jitter, jitter),
                        box.cy + rng.Uniform(-jitter, jitter)};
    const Point2 offset{rng.Laplace(noise.glitch_scale),
                        rng.Laplace(noise.glitch_scale)};
    ApplyFlowGlitch(&flow, center, noise.glitch_radius, offset,
                    noise.calibration_factor * noise.glitch_scale);
  }

  Rng swap_rng(DeriveSeed(spec.seed, {kSwapStream, uint64_t(frame_index)}));
  if (noise.swap_rate > 0.0 && swap_rng.Bernoulli(noise.swap_rate)) {
    const AABox& here = frame.object_boxes[target];
    std::vector<int> eligible;
    for (size_t k = 0; k < frame.object_boxes.size(); ++k) {
      if (static_cast<int>(k) == target) continue;
      const AABox& other = frame.object_boxes[k];
      const double dist = std::hypot(other.cx - here.cx, other.cy - here.cy);
      if (noise.swap_range > 0.0 && dist > noise.swap_range) continue;
      if (ObjectMask(frame.labels, static_cast<int>(k)).Empty()) continue;
      eligible.push_back(static_cast<int>(k));
    }
    if (!eligible.empty()) {
      const int k = eligible[swap_rng.Next() % eligible.size()];
      const AABox& a = previous.object_boxes[target];
      const AABox& b = previous.object_boxes[k];
      ApplyFlowSwap(&flow, frame.labels, k, {a.cx - b.cx, a.cy - b.cy},
                    noise.calibration_factor);
      ApplyFlowSwap(&flow, frame.labels, target, {b.cx - a.cx, b.cy - a.cy},
                    noise.calibration_factor);
    }
  }
  return flow;
}

}  // namespace uft
