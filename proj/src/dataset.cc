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

#include "uft/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <utility>

#include "uft/config.h"
#include "uft/error.h"
#include "uft/rng.h"
#include "uft/ufg.h"

namespace uft {

namespace fs = std::filesystem;

namespace {

constexpr uint64_t kSuiteStream = 11;

// Target speed relative to its size.
constexpr double kSuiteSpeed[2] = {1.2, 1.5};

NoiseModel SuiteNoise() {
  NoiseModel n;
  n.flow_noise_scale = 0.3;
  n.motion_noise_gain = 0.25;
  n.glitch_rate = 0.15;
  n.glitch_scale = 6.0;
  n.glitch_radius = 6.0;
  n.swap_rate = 0.15;
  n.swap_range = 12.0;
  n.appearance_confusion = 0.95;
  n.appearance_noise = 0.05;
  return n;
}

const NoiseModel kSuiteNoise = SuiteNoise();

double Round6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return std::strtod(buf, nullptr);
}

void QuantizeToFloat(ScalarGrid* grid) {
  for (double& v : grid->mutable_values()) v = static_cast<float>(v);
}

std::string FrameFile(int frame) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%05d.ufg", frame);
  return buf;
}

std::string JoinCsv(const std::vector<double>& values) {
  std::string out;
  char buf[64];
  for (size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.6f", values[i]);
    if (i > 0) out += ',';
    out += buf;
  }
  return out;
}

std::vector<double> SplitCsv(const std::string& line, const std::string& what,
                             int line_no) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == item.c_str() || (end && *end != '\0') || !std::isfinite(v)) {
      ThrowData(what + " line " + std::to_string(line_no) +
                ": bad number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> ReadLines(const fs::path& path) {
  std::vector<std::string> lines;
  std::stringstream ss(ReadFile(path));
  std::string line;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// "3-5, 9" style listing of missing indices.
std::string DescribeGaps(const std::vector<int>& missing) {
  std::string out;
  for (size_t i = 0; i < missing.size();) {
    size_t j = i;
    while (j + 1 < missing.size() && missing[j + 1] == missing[j] + 1) ++j;
    if (!out.empty()) out += ", ";
    out += std::to_string(missing[i]);
    if (j > i) out += "-" + std::to_string(missing[j]);
    i = j + 1;
  }
  return out;
}

void CheckFrames(const fs::path& dir, const std::string& sub, int frames) {
  std::vector<int> missing;
  for (int t = 0; t < frames; ++t) {
    if (!fs::exists(dir / sub / FrameFile(t))) missing.push_back(t);
  }
  if (!missing.empty()) {
    ThrowData(dir.string() + ": missing " + sub + " frames " +
              DescribeGaps(missing));
  }
}

std::string ShapeName(ShapeKind shape) {
  return shape == ShapeKind::kEllipse ? "ellipse" : "rectangle";
}

std::string Pair(double a, double b) {
  return FormatDouble(a) + ", " + FormatDouble(b);
}

}  // namespace

BinaryMask Sequence::TargetMask(int frame) const {
  return ObjectMask(frames.at(frame).labels, target());
}

AABox Sequence::TargetBox(int frame) const {
  return frames.at(frame).object_boxes.at(target());
}

std::vector<AABox> Sequence::DistractorBoxes(int frame) const {
  std::vector<AABox> out;
  const auto& boxes = frames.at(frame).object_boxes;
  const size_t t = static_cast<size_t>(target());
  for (size_t k = 0; k < boxes.size(); ++k) {
    if (k != t) out.push_back(boxes[k]);
  }
  return out;
}

Sequence BuildSequence(const SceneSpec& spec) {
  std::vector<RenderedFrame> rendered = RenderScene(spec);
  Sequence seq{spec, {}};
  seq.frames.reserve(rendered.size());
  std::vector<FlowField> flows;
  for (size_t t = 0; t < rendered.size(); ++t) {
    flows.push_back(SynthesizeFlow(rendered, spec, static_cast<int>(t)));
  }
  for (size_t t = 0; t < rendered.size(); ++t) {
    RenderedFrame& r = rendered[t];
    FlowField& flow = flows[t];
    QuantizeToFloat(&flow.mean_u);
    QuantizeToFloat(&flow.mean_v);
    QuantizeToFloat(&flow.scale_u);
    QuantizeToFloat(&flow.scale_v);
    for (AABox& b : r.object_boxes) {
      b = {Round6(b.cx), Round6(b.cy), Round6(b.w), Round6(b.h)};
    }
    RotBox gt = r.target_rot;
    for (Point2& p : gt.corners) p = {Round6(p.x), Round6(p.y)};
    seq.frames.push_back(
        {std::move(r.labels), std::move(r.object_boxes), gt, std::move(flow)});
  }
  return seq;
}

void WriteSequence(const Sequence& sequence, const fs::path& dir) {
  std::error_code ec;
  for (const char* sub : {"flow", "masks", "labels"}) {
    fs::create_directories(dir / sub, ec);
    if (ec) ThrowData("cannot create " + (dir / sub).string() + ": " +
                      ec.message());
  }
  WriteFileAtomic(dir / "sequence.txt", FormatSceneSpec(sequence.spec));

  std::string gt;
  std::string objects;
  for (int t = 0; t < sequence.num_frames(); ++t) {
    const SequenceFrame& f = sequence.frames[t];
    std::vector<double> corners;
    for (const Point2& p : f.groundtruth.corners) {
      corners.push_back(p.x);
      corners.push_back(p.y);
    }
    gt += JoinCsv(corners) + "\n";
    std::vector<double> boxes;
    for (const AABox& b : f.object_boxes) {
      boxes.insert(boxes.end(), {b.cx, b.cy, b.w, b.h});
    }
    objects += JoinCsv(boxes) + "\n";

    const std::string name = FrameFile(t);
    WriteUfg(dir / "flow" / name,
             PackChannels({&f.flow.mean_u, &f.flow.mean_v, &f.flow.scale_u,
                           &f.flow.scale_v}));
    const ScalarGrid mask = sequence.TargetMask(t).ToProbMask().grid();
    WriteUfg(dir / "masks" / name, PackChannels({&mask}));
    WriteUfg(dir / "labels" / name, PackChannels({&f.labels}));
  }
  WriteFileAtomic(dir / "groundtruth.txt", gt);
  WriteFileAtomic(dir / "objects.txt", objects);
}

Sequence ReadSequence(const fs::path& dir) {
  if (!fs::exists(dir / "sequence.txt")) {
    ThrowData(dir.string() + ": no sequence.txt");
  }
  Sequence seq{ParseSceneSpec(ReadFile(dir / "sequence.txt")), {}};
  const int n = seq.spec.num_frames;
  const size_t num_objects = seq.spec.objects.size();
  for (const char* sub : {"flow", "labels"}) CheckFrames(dir, sub, n);

  const std::vector<std::string> gt = ReadLines(dir / "groundtruth.txt");
  const std::vector<std::string> objects = ReadLines(dir / "objects.txt");
  if (gt.size() != static_cast<size_t>(n)) {
    ThrowData(dir.string() + ": groundtruth.txt has " +
              std::to_string(gt.size()) + " lines, expected " +
              std::to_string(n));
  }
  if (objects.size() != static_cast<size_t>(n)) {
    ThrowData(dir.string() + ": objects.txt has " +
              std::to_string(objects.size()) + " lines, expected " +
              std::to_string(n));
  }

  for (int t = 0; t < n; ++t) {
    const std::vector<double> c = SplitCsv(gt[t], "groundtruth.txt", t + 1);
    if (c.size() != 8) {
      ThrowData("groundtruth.txt line " + std::to_string(t + 1) +
                ": expected 8 values");
    }
    RotBox box;
    for (int k = 0; k < 4; ++k) box.corners[k] = {c[2 * k], c[2 * k + 1]};
    const std::vector<double> o = SplitCsv(objects[t], "objects.txt", t + 1);
    if (o.size() != 4 * num_objects) {
      ThrowData("objects.txt line " + std::to_string(t + 1) + ": expected " +
                std::to_string(4 * num_objects) + " values");
    }
    std::vector<AABox> boxes;
    for (size_t k = 0; k < num_objects; ++k) {
      boxes.push_back({o[4 * k], o[4 * k + 1], o[4 * k + 2], o[4 * k + 3]});
    }

    const UfgImage flow = ReadUfg(dir / "flow" / FrameFile(t));
    const UfgImage labels = ReadUfg(dir / "labels" / FrameFile(t));
    const auto w = static_cast<uint32_t>(seq.spec.width);
    const auto h = static_cast<uint32_t>(seq.spec.height);
    if (flow.channels != 4 || flow.width != w || flow.height != h) {
      ThrowData("flow/" + FrameFile(t) + ": expected " + std::to_string(w) +
                "x" + std::to_string(h) + "x4");
    }
    if (labels.channels != 1 || labels.width != w || labels.height != h) {
      ThrowData("labels/" + FrameFile(t) + ": expected " + std::to_string(w) +
                "x" + std::to_string(h) + "x1");
    }
    FlowField field{flow.Channel(0), flow.Channel(1), flow.Channel(2),
                    flow.Channel(3)};
    try {
      field.Validate();
    } catch (const Error& e) {
      ThrowData("flow/" + FrameFile(t) + ": " + e.what());
    }
    seq.frames.push_back({labels.Channel(0), std::move(boxes), box,
                          std::move(field)});
  }
  return seq;
}

std::vector<Sequence> ReadDataset(const fs::path& dir) {
  if (fs::exists(dir / "sequence.txt")) return {ReadSequence(dir)};
  if (!fs::is_directory(dir)) ThrowData(dir.string() + ": not a directory");
  std::vector<fs::path> subdirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "sequence.txt")) {
      subdirs.push_back(entry.path());
    }
  }
  if (subdirs.empty()) ThrowData(dir.string() + ": no sequences found");
  std::sort(subdirs.begin(), subdirs.end());
  std::vector<Sequence> out;
  for (const fs::path& p : subdirs) out.push_back(ReadSequence(p));
  return out;
}

SceneSpec ParseSceneSpec(const std::string& text) {
  SceneSpec spec;
  std::map<size_t, ObjectSpec> objects;
  std::set<std::string> seen;
  try {
    for (const KeyValue& kv : ParseKeyValues(text)) {
      const std::string& k = kv.key;
      const std::string& v = kv.value;
      if (!seen.insert(k).second) ThrowData(k + ": duplicate key");
      if (k == "name") {
        spec.name = v;
      } else if (k == "scenario") {
        spec.scenario = v;
      } else if (k == "width") {
        spec.width = static_cast<int>(ParseInt(k, v));
      } else if (k == "height") {
        spec.height = static_cast<int>(ParseInt(k, v));
      } else if (k == "frames") {
        spec.num_frames = static_cast<int>(ParseInt(k, v));
      } else if (k == "seed") {
        spec.seed = ParseUint(k, v);
      } else if (k == "camera.velocity") {
        auto [x, y] = ParsePair(k, v);
        spec.camera_velocity = {x, y};
      } else if (k == "camera.jitter") {
        spec.camera_jitter = ParseDouble(k, v);
      } else if (k == "noise.flow_scale") {
        spec.noise.flow_noise_scale = ParseDouble(k, v);
      } else if (k == "noise.motion_gain") {
        spec.noise.motion_noise_gain = ParseDouble(k, v);
      } else if (k == "noise.glitch_rate") {
        spec.noise.glitch_rate = ParseDouble(k, v);
      } else if (k == "noise.glitch_scale") {
        spec.noise.glitch_scale = ParseDouble(k, v);
      } else if (k == "noise.glitch_radius") {
        spec.noise.glitch_radius = ParseDouble(k, v);
      } else if (k == "noise.swap_rate") {
        spec.noise.swap_rate = ParseDouble(k, v);
      } else if (k == "noise.swap_range") {
        spec.noise.swap_range = ParseDouble(k, v);
      } else if (k == "noise.calibration") {
        spec.noise.calibration_factor = ParseDouble(k, v);
      } else if (k == "noise.mask_corruption") {
        spec.noise.mask_corruption = ParseDouble(k, v);
      } else if (k == "noise.appearance_confusion") {
        spec.noise.appearance_confusion = ParseDouble(k, v);
      } else if (k == "noise.appearance_noise") {
        spec.noise.appearance_noise = ParseDouble(k, v);
      } else if (k.rfind("object.", 0) == 0) {
        const size_t dot = k.find('.', 7);
        const std::string index = k.substr(7, dot - 7);
        if (dot == std::string::npos || index.empty() ||
            index.find_first_not_of("0123456789") != std::string::npos ||
            index.size() > 4) {
          ThrowData(k + ": unknown key");
        }
        ObjectSpec& obj = objects[std::stoul(index)];
        const std::string field = k.substr(dot + 1);
        if (field == "shape") {
          if (v == "rectangle") {
            obj.shape = ShapeKind::kRectangle;
          } else if (v == "ellipse") {
            obj.shape = ShapeKind::kEllipse;
          } else {
            ThrowData(k + ": expected rectangle or ellipse, got '" + v + "'");
          }
        } else if (field == "size") {
          std::tie(obj.width, obj.height) = ParsePair(k, v);
        } else if (field == "start") {
          auto [x, y] = ParsePair(k, v);
          obj.start = {x, y};
        } else if (field == "velocity") {
          auto [x, y] = ParsePair(k, v);
          obj.velocity = {x, y};
        } else if (field == "wobble") {
          std::tie(obj.wobble_amplitude, obj.wobble_period) = ParsePair(k, v);
        } else if (field == "deform") {
          std::tie(obj.deform_amplitude, obj.deform_period) = ParsePair(k, v);
        } else if (field == "target") {
          obj.is_target = ParseBool(k, v);
        } else if (field == "bounce") {
          obj.bounce = ParseBool(k, v);
        } else {
          ThrowData(k + ": unknown key");
        }
      } else {
        ThrowData(k + ": unknown key");
      }
    }
    size_t expected = 0;
    for (auto& [index, obj] : objects) {
      if (index != expected) {
        ThrowData("object." + std::to_string(expected) +
                  ": missing (objects must be numbered from 0)");
      }
      spec.objects.push_back(obj);
      ++expected;
    }
    spec.Validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kData) throw;
    ThrowData(e.what());
  }
  return spec;
}

std::string FormatSceneSpec(const SceneSpec& spec) {
  std::ostringstream out;
  out << "name = " << spec.name << "\n"
      << "scenario = " << spec.scenario << "\n"
      << "width = " << spec.width << "\n"
      << "height = " << spec.height << "\n"
      << "frames = " << spec.num_frames << "\n"
      << "seed = " << spec.seed << "\n"
      << "camera.velocity = "
      << Pair(spec.camera_velocity.x, spec.camera_velocity.y) << "\n"
      << "camera.jitter = " << FormatDouble(spec.camera_jitter) << "\n";
  const NoiseModel& n = spec.noise;
  out << "noise.flow_scale = " << FormatDouble(n.flow_noise_scale) << "\n"
      << "noise.motion_gain = " << FormatDouble(n.motion_noise_gain) << "\n"
      << "noise.glitch_rate = " << FormatDouble(n.glitch_rate) << "\n"
      << "noise.glitch_scale = " << FormatDouble(n.glitch_scale) << "\n"
      << "noise.glitch_radius = " << FormatDouble(n.glitch_radius) << "\n"
      << "noise.swap_rate = " << FormatDouble(n.swap_rate) << "\n"
      << "noise.swap_range = " << FormatDouble(n.swap_range) << "\n"
      << "noise.calibration = " << FormatDouble(n.calibration_factor) << "\n"
      << "noise.mask_corruption = " << FormatDouble(n.mask_corruption) << "\n"
      << "noise.appearance_confusion = "
      << FormatDouble(n.appearance_confusion) << "\n"
      << "noise.appearance_noise = " << FormatDouble(n.appearance_noise)
      << "\n";
  for (size_t k = 0; k < spec.objects.size(); ++k) {
    const ObjectSpec& o = spec.objects[k];
    const std::string p = "object." + std::to_string(k) + ".";
    out << p << "shape = " << ShapeName(o.shape) << "\n"
        << p << "size = " << Pair(o.width, o.height) << "\n"
        << p << "start = " << Pair(o.start.x, o.start.y) << "\n"
        << p << "velocity = " << Pair(o.velocity.x, o.velocity.y) << "\n"
        << p << "wobble = " << Pair(o.wobble_amplitude, o.wobble_period)
        << "\n"
        << p << "deform = " << Pair(o.deform_amplitude, o.deform_period)
        << "\n"
        << p << "target = " << (o.is_target ? "true" : "false") << "\n"
        << p << "bounce = " << (o.bounce ? "true" : "false") << "\n";
  }
  return out.str();
}

std::vector<SceneSpec> BenchmarkSuite(int count, uint64_t seed) {
  if (count < 1) ThrowInvalid("suite size must be >= 1");
  static const char* kScenarios[] = {"distractor", "camera", "flow_failure"};
  std::vector<SceneSpec> out;
  for (int i = 0; i < count; ++i) {
    Rng rng(DeriveSeed(seed, {kSuiteStream, uint64_t(i)}));
    SceneSpec s;
    s.scenario = kScenarios[i % 3];
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%03d", s.scenario.c_str(), i);
    s.name = name;
    s.num_frames = 40;
    s.seed = DeriveSeed(seed, {kSuiteStream, uint64_t(i), 1});

    const double size = rng.Uniform(6.0, 8.0);
    const ShapeKind shape =
        rng.Bernoulli(0.5) ? ShapeKind::kRectangle : ShapeKind::kEllipse;
    const double heading = rng.Uniform(0.0, 2.0 * std::numbers::pi);
    const double speed = size * rng.Uniform(kSuiteSpeed[0], kSuiteSpeed[1]);

    ObjectSpec target;
    target.shape = shape;
    target.width = size * rng.Uniform(0.85, 1.15);
    target.height = size * rng.Uniform(0.85, 1.15);
    target.start = {rng.Uniform(16.0, 48.0), rng.Uniform(16.0, 48.0)};
    target.velocity = {speed * std::cos(heading), speed * std::sin(heading)};
    target.deform_amplitude = rng.Uniform(0.0, 0.15);
    target.deform_period = rng.Uniform(15.0, 30.0);
    target.is_target = true;

    if (s.scenario == "camera") {
      const double pan = rng.Uniform(0.0, 2.0 * std::numbers::pi);
      const double pan_speed = rng.Uniform(1.0, 2.5);
      s.camera_velocity = {pan_speed * std::cos(pan),
                           pan_speed * std::sin(pan)};
      s.camera_jitter = 1.0;
    }

    // Nearly static look-alikes parked just beside the target's path, so
    // that right after the target passes, the look-alike sits closer to
    // the previous box than the target does.
    s.objects = {target};
    const std::vector<Point2> path = ObjectCenters(s, 0);
    const std::vector<Point2> camera = CameraOffsets(s);
    std::vector<ObjectSpec> lookalikes;
    for (int k = 0; k < 2; ++k) {
      const int meet = std::min(s.num_frames - 2,
                                static_cast<int>(rng.Uniform(5.0, 15.0)) +
                                    15 * k);
      double hx = path[meet + 1].x - path[meet].x;
      double hy = path[meet + 1].y - path[meet].y;
      const double norm = std::hypot(hx, hy);
      if (norm > 1e-9) {
        hx /= norm;
        hy /= norm;
      } else {
        hx = 1.0;
        hy = 0.0;
      }
      const double side = rng.Bernoulli(0.5) ? 1.0 : -1.0;
      const double gap = rng.Uniform(1.05, 1.15) *
                         (std::abs(hy) * target.width + std::abs(hx) *
                                                            target.height);
      ObjectSpec o = target;
      o.is_target = false;
      o.deform_amplitude = 0.0;
      const double drift = rng.Uniform(0.0, 0.3);
      const double dir = rng.Uniform(0.0, 2.0 * std::numbers::pi);
      o.velocity = {drift * std::cos(dir), drift * std::sin(dir)};
      const Point2 at{path[meet].x - side * hy * gap,
                      path[meet].y + side * hx * gap};
      o.start = {std::clamp(at.x - camera[meet].x - o.velocity.x * meet,
                            0.5 * o.width, s.width - 0.5 * o.width),
                 std::clamp(at.y - camera[meet].y - o.velocity.y * meet,
                            0.5 * o.height, s.height - 0.5 * o.height)};
      lookalikes.push_back(o);
    }

    s.noise.flow_noise_scale = kSuiteNoise.flow_noise_scale;
    s.noise.motion_noise_gain = kSuiteNoise.motion_noise_gain;
    s.noise.glitch_rate = kSuiteNoise.glitch_rate;
    s.noise.glitch_scale = kSuiteNoise.glitch_scale;
    s.noise.glitch_radius = kSuiteNoise.glitch_radius;
    s.noise.swap_rate = kSuiteNoise.swap_rate;
    s.noise.swap_range = kSuiteNoise.swap_range;
    s.noise.appearance_confusion = kSuiteNoise.appearance_confusion;
    s.noise.appearance_noise = kSuiteNoise.appearance_noise;

    if (s.scenario == "flow_failure") {
      s.noise.glitch_rate = std::min(1.0, 2.0 * s.noise.glitch_rate);
    }
    s.objects = {lookalikes[0], lookalikes[1], target};
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SceneSpec> StaticSuite(int count, uint64_t seed) {
  if (count < 1) ThrowInvalid("suite size must be >= 1");
  std::vector<SceneSpec> out;
  for (int i = 0; i < count; ++i) {
    Rng rng(DeriveSeed(seed, {kSuiteStream, uint64_t(i), 2}));
    SceneSpec s;
    s.name = "static_" + std::to_string(i);
    s.scenario = "static";
    s.num_frames = 20;
    s.seed = rng.Next();
    ObjectSpec target;
    target.shape = rng.Bernoulli(0.5) ? ShapeKind::kRectangle
                                      : ShapeKind::kEllipse;
    target.width = rng.Uniform(8.0, 14.0);
    target.height = rng.Uniform(8.0, 14.0);
    target.start = {rng.Uniform(20.0, 44.0), rng.Uniform(20.0, 44.0)};
    target.is_target = true;
    s.objects = {target};
    s.noise.appearance_noise = 0.0;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace uft
