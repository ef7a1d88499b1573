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
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include "uft/error.h"
#include "uft/rng.h"

namespace uft {

namespace {

std::string FormatCorners(const RotBox& box) {
  std::string out;
  char buf[48];
  for (const Point2& p : box.corners) {
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f", p.x, p.y);
    out += buf;
  }
  return out;
}

std::vector<std::string> SplitComma(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t b = item.find_first_not_of(" \t");
    const size_t e = item.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

RotBox ParseCorners(const std::vector<std::string>& fields, size_t first,
                    int line_no) {
  RotBox box;
  for (int k = 0; k < 8; ++k) {
    const std::string& f = fields[first + k];
    char* end = nullptr;
    const double v = std::strtod(f.c_str(), &end);
    if (f.empty() || *end != '\0' || !std::isfinite(v)) {
      ThrowData("results line " + std::to_string(line_no) +
                ": bad coordinate '" + f + "'");
    }
    if (k % 2 == 0) {
      box.corners[k / 2].x = v;
    } else {
      box.corners[k / 2].y = v;
    }
  }
  return box;
}

}  // namespace

void ProtocolConfig::Validate() const {
  if (reinit_delay < 1) ThrowInvalid("protocol.reinit_delay must be >= 1");
  if (burn_in < 0) ThrowInvalid("protocol.burn_in must be >= 0");
  if (eao_low < 1 || eao_high < eao_low) {
    ThrowInvalid("protocol.eao_low/eao_high must satisfy 1 <= low <= high");
  }
}

std::string_view OverlapName(OverlapKind kind) {
  return kind == OverlapKind::kPolygon ? "polygon" : "axis_aligned";
}

OverlapKind ParseOverlap(std::string_view name) {
  if (name == "polygon") return OverlapKind::kPolygon;
  if (name == "axis_aligned") return OverlapKind::kAxisAligned;
  ThrowUsage("unknown overlap '" + std::string(name) +
             "' (expected polygon or axis_aligned)");
}

double Overlap(const RotBox& output, const RotBox& groundtruth,
               OverlapKind kind) {
  if (kind == OverlapKind::kPolygon) return PolygonOverlap(output, groundtruth);
  return IouAxisAligned(BoundingBox(output), BoundingBox(groundtruth));
}

std::string_view StatusName(FrameStatus status) {
  switch (status) {
    case FrameStatus::kInit:
      return "init";
    case FrameStatus::kOk:
      return "ok";
    case FrameStatus::kFail:
      return "fail";
    case FrameStatus::kSkip:
      return "skip";
  }
  return "skip";
}

double SequenceResult::FailuresPer100() const {
  return frames.empty() ? 0.0 : 100.0 * failures / length();
}

SequenceResult RunProtocol(std::string name,
                           std::span<const RotBox> groundtruth,
                           SequenceTracker& tracker,
                           const ProtocolConfig& protocol,
                           OverlapKind overlap) {
  protocol.Validate();
  const int n = static_cast<int>(groundtruth.size());
  if (n < 2) ThrowInvalid("sequence must have at least 2 frames");

  SequenceResult result;
  result.name = std::move(name);
  result.frames.resize(static_cast<size_t>(n));
  int t = 0;
  tracker.Init(0);
  result.frames[0].status = FrameStatus::kInit;
  for (t = 1; t < n; ++t) {
    FrameRecord& rec = result.frames[t];
    const RotBox out = tracker.Track(t);
    const double ov = Overlap(out, groundtruth[t], overlap);
    rec.output = out;
    if (ov > 0.0) {
      rec.status = FrameStatus::kOk;
      rec.overlap = ov;
      continue;
    }
    rec.status = FrameStatus::kFail;
    const int restart = t + protocol.reinit_delay;
    for (int s = t + 1; s < std::min(restart, n); ++s) {
      result.frames[s].status = FrameStatus::kSkip;
    }
    if (restart < n) {
      tracker.Init(restart);
      result.frames[restart].status = FrameStatus::kInit;
    }
    t = restart;
  }
  Summarize(&result, protocol);
  return result;
}

double Accuracy(std::span<const FrameRecord> frames, int burn_in,
                int* counted) {
  double sum = 0.0;
  int count = 0;
  // Frames before any init are treated as already past burn-in.
  long since_init = static_cast<long>(burn_in) + 1;
  for (const FrameRecord& f : frames) {
    if (f.status == FrameStatus::kInit) {
      since_init = 0;
      continue;
    }
    ++since_init;
    if (f.status == FrameStatus::kOk && since_init > burn_in) {
      sum += f.overlap;
      ++count;
    }
  }
  if (counted) *counted = count;
  return count > 0 ? sum / count : 0.0;
}

void Summarize(SequenceResult* result, const ProtocolConfig& protocol) {
  result->failures = static_cast<int>(
      std::count_if(result->frames.begin(), result->frames.end(),
                    [](const FrameRecord& f) {
                      return f.status == FrameStatus::kFail;
                    }));
  result->accuracy =
      Accuracy(result->frames, protocol.burn_in, &result->accuracy_frames);
}

std::vector<Segment> ExtractSegments(std::span<const FrameRecord> frames) {
  std::vector<Segment> out;
  bool open = !frames.empty() && frames[0].status != FrameStatus::kInit;
  if (open) out.emplace_back();
  for (const FrameRecord& f : frames) {
    switch (f.status) {
      case FrameStatus::kInit:
        out.emplace_back();
        open = true;
        break;
      case FrameStatus::kOk:
        if (open) out.back().overlaps.push_back(f.overlap);
        break;
      case FrameStatus::kFail:
        if (open) {
          out.back().overlaps.push_back(0.0);
          out.back().failed = true;
          open = false;
        }
        break;
      case FrameStatus::kSkip:
        break;
    }
  }
  return out;
}

double Eao(std::span<const Segment> segments, int low, int high) {
  if (segments.empty()) ThrowInvalid("EAO needs at least one segment");
  if (low < 1 || high < low) ThrowInvalid("EAO interval must be 1 <= lo <= hi");
  std::vector<std::vector<double>> prefix;
  prefix.reserve(segments.size());
  for (const Segment& s : segments) {
    std::vector<double> p(s.overlaps.size() + 1, 0.0);
    for (size_t i = 0; i < s.overlaps.size(); ++i) {
      p[i + 1] = p[i] + s.overlaps[i];
    }
    prefix.push_back(std::move(p));
  }
  double total = 0.0;
  int lengths = 0;
  for (int len = low; len <= high; ++len) {
    const size_t L = static_cast<size_t>(len);
    double sum = 0.0;
    int count = 0;
    for (size_t k = 0; k < segments.size(); ++k) {
      const size_t n = segments[k].overlaps.size();
      if (segments[k].failed) {
        sum += prefix[k][std::min(L, n)] / len;
        ++count;
      } else if (n >= L) {
        sum += prefix[k][L] / len;
        ++count;
      }
    }
    if (count == 0) continue;
    total += sum / count;
    ++lengths;
  }
  return lengths > 0 ? total / lengths : 0.0;
}

double Eao(std::span<const SequenceResult> results,
           const ProtocolConfig& protocol) {
  if (results.empty()) ThrowInvalid("EAO needs at least one sequence");
  std::vector<Segment> segments;
  for (const SequenceResult& r : results) {
    std::vector<Segment> s = ExtractSegments(r.frames);
    segments.insert(segments.end(), s.begin(), s.end());
  }
  if (segments.empty()) return 0.0;
  return Eao(segments, protocol.eao_low, protocol.eao_high);
}

std::string FormatResults(std::span<const FrameRecord> frames,
                          bool vot_compat) {
  std::string out;
  for (size_t t = 0; t < frames.size(); ++t) {
    const FrameRecord& f = frames[t];
    if (vot_compat) {
      switch (f.status) {
        case FrameStatus::kInit:
          out += "1\n";
          break;
        case FrameStatus::kFail:
          out += "2\n";
          break;
        case FrameStatus::kSkip:
          out += "0\n";
          break;
        case FrameStatus::kOk:
          out += FormatCorners(*f.output).substr(1) + "\n";
          break;
      }
      continue;
    }
    out += std::to_string(t) + "," + std::string(StatusName(f.status));
    if (f.status == FrameStatus::kOk) out += FormatCorners(*f.output);
    out += "\n";
  }
  return out;
}

std::vector<FrameRecord> ParseResults(const std::string& text) {
  std::vector<FrameRecord> out;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::vector<std::string> fields = SplitComma(line);
    FrameRecord rec;
    if (fields.size() == 1) {
      if (fields[0] == "1") {
        rec.status = FrameStatus::kInit;
      } else if (fields[0] == "2") {
        rec.status = FrameStatus::kFail;
      } else if (fields[0] == "0") {
        rec.status = FrameStatus::kSkip;
      } else {
        ThrowData("results line " + std::to_string(line_no) +
                  ": unknown marker '" + fields[0] + "'");
      }
    } else if (fields.size() == 8) {
      rec.status = FrameStatus::kOk;
      rec.output = ParseCorners(fields, 0, line_no);
    } else if (fields.size() == 2 || fields.size() == 10) {
      if (fields[0] != std::to_string(out.size())) {
        ThrowData("results line " + std::to_string(line_no) +
                  ": expected frame " + std::to_string(out.size()) +
                  ", got '" + fields[0] + "'");
      }
      const std::string& s = fields[1];
      if (s == "init") {
        rec.status = FrameStatus::kInit;
      } else if (s == "ok") {
        rec.status = FrameStatus::kOk;
      } else if (s == "fail") {
        rec.status = FrameStatus::kFail;
      } else if (s == "skip") {
        rec.status = FrameStatus::kSkip;
      } else {
        ThrowData("results line " + std::to_string(line_no) +
                  ": unknown status '" + s + "'");
      }
      if ((rec.status == FrameStatus::kOk) != (fields.size() == 10)) {
        ThrowData("results line " + std::to_string(line_no) +
                  ": coordinates must accompany exactly the ok frames");
      }
      if (fields.size() == 10) rec.output = ParseCorners(fields, 2, line_no);
    } else {
      ThrowData("results line " + std::to_string(line_no) + ": expected " +
                "'frame,status[,8 coordinates]'");
    }
    out.push_back(std::move(rec));
  }
  if (out.empty()) ThrowData("results file is empty");
  return out;
}

void ScoreAgainst(std::vector<FrameRecord>* frames,
                  std::span<const RotBox> groundtruth, OverlapKind overlap) {
  if (frames->size() != groundtruth.size()) {
    ThrowData("results have " + std::to_string(frames->size()) +
              " frames, dataset has " + std::to_string(groundtruth.size()));
  }
  for (size_t t = 0; t < frames->size(); ++t) {
    FrameRecord& f = (*frames)[t];
    f.overlap = 0.0;
    if (f.status == FrameStatus::kOk && f.output) {
      try {
        f.overlap = Overlap(*f.output, groundtruth[t], overlap);
      } catch (const Error& e) {
        ThrowData("results frame " + std::to_string(t) + ": " + e.what());
      }
    }
  }
}

void SearchSpace::Validate() const {
  for (auto [name, r] : {std::pair{"k_c", k_c}, std::pair{"k_p", k_p},
                         std::pair{"k_f", k_f}}) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
      ThrowInvalid(std::string("empty search range for ") + name);
    }
  }
}

void ParallelFor(int count, int jobs, const std::function<void(int)>& fn) {
  const int threads = std::clamp(jobs, 1, std::max(count, 1));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int k = 0; k < threads; ++k) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

SearchResult RandomSearch(
    const SearchSpace& space, int trials, uint64_t seed,
    const ScoreConfig& base,
    const std::function<double(const ScoreConfig&)>& objective, int jobs) {
  space.Validate();
  if (trials < 1) ThrowInvalid("trials must be >= 1");
  Rng rng(seed);
  std::vector<Trial> board(static_cast<size_t>(trials));
  for (int i = 0; i < trials; ++i) {
    ScoreConfig c = base;
    c.k_c = rng.Uniform(space.k_c.lo, space.k_c.hi);
    c.k_p = rng.Uniform(space.k_p.lo, space.k_p.hi);
    c.k_f = rng.Uniform(space.k_f.lo, space.k_f.hi);
    c.Validate();
    board[i].index = i;
    board[i].config = c;
  }
  ParallelFor(trials, jobs, [&](int i) {
    board[i].objective = objective(board[i].config);
  });
  std::stable_sort(board.begin(), board.end(),
                   [](const Trial& a, const Trial& b) {
                     return a.objective > b.objective;
                   });
  return {board.front().config, std::move(board)};
}

}  // namespace uft
