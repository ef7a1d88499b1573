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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "uft/ablation.h"
#include "uft/config.h"
#include "uft/dataset.h"
#include "uft/eval.h"
#include "uft/flow_mask.h"
#include "uft/rng.h"
#include "uft/scoring.h"

namespace fs = std::filesystem;

namespace uft {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Per-pixel independent means and scales; many correspondences leave the
// image.
FlowField RandomFlow(Rng& rng, int w, int h, double b_lo, double b_hi) {
  FlowField f = FlowField::Constant(w, h, 0.0, 0.0, 1.0);
  const double reach = rng.Uniform(0.5, 6.0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      f.mean_u.at(r, c) = rng.Uniform(-reach, reach);
      f.mean_v.at(r, c) = rng.Uniform(-reach, reach);
      f.scale_u.at(r, c) = rng.Uniform(b_lo, b_hi);
      f.scale_v.at(r, c) = rng.Uniform(b_lo, b_hi);
    }
  }
  return f;
}

// Either soft noise or a hard blob, so both regimes are covered.
ProbMask RandomMask(Rng& rng, int w, int h) {
  ScalarGrid g(w, h);
  if (rng.Bernoulli(0.5)) {
    for (double& v : g.mutable_values()) v = rng.Uniform();
  } else {
    const double cx = rng.Uniform(0, w), cy = rng.Uniform(0, h);
    const double rx = rng.Uniform(2, w / 2.0), ry = rng.Uniform(2, h / 2.0);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const double dx = (c - cx) / rx, dy = (r - cy) / ry;
        g.at(r, c) = dx * dx + dy * dy < 1.0 ? 1.0 : 0.0;
      }
    }
  }
  return ProbMask(std::move(g));
}

double MaxAbsDiff(const ProbMask& a, const ProbMask& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.grid().size(); ++i) {
    d = std::max(d, std::abs(a.grid().values()[i] - b.grid().values()[i]));
  }
  return d;
}

std::string Fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), format, a, b);
  return buf;
}

Outcome OracleEquivalence() {
  Rng rng(101);
  KernelConfig cfg;
  cfg.truncation_k = 12.0;
  double worst = 0.0;
  const auto start = Clock::now();
  for (int i = 0; i < 200; ++i) {
    const FlowField flow = RandomFlow(rng, 32, 32, 0.3, 2.0);
    const ProbMask prev = RandomMask(rng, 32, 32);
    worst = std::max(worst, MaxAbsDiff(PropagateMask(prev, flow, cfg),
                                       PropagateMaskOracle(prev, flow, true)));
  }
  const double elapsed = Seconds(start);
  return {worst <= 1e-5 && elapsed < 5.0,
          Fmt("max abs diff %.3g over 200 cases, %.2f s", worst, elapsed)};
}

Outcome ConvexBound() {
  Rng rng(202);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const int w = 8 + static_cast<int>(rng.Uniform(0, 25));
    const int h = 8 + static_cast<int>(rng.Uniform(0, 25));
    const FlowField flow = RandomFlow(rng, w, h, kMinScale, 3.0);
    const ProbMask prev = RandomMask(rng, w, h);
    KernelConfig cfg;
    cfg.renormalize_at_border = rng.Bernoulli(0.8);
    const ProbMask out = PropagateMask(prev, flow, cfg);
    // Without renormalization mass leaks past the border, so only zero
    // bounds the output from below.
    const double lo = cfg.renormalize_at_border ? prev.Min() : 0.0;
    if (out.Min() < lo - 1e-12 || out.Max() > prev.Max() + 1e-12) ++violations;
  }
  return {violations == 0,
          Fmt("%.0f of 1000 propagations outside [min, max] of prev",
              violations)};
}

Outcome ExactLimits() {
  Rng rng(303);
  double identity = 0.0;
  double translate = 0.0;
  for (int i = 0; i < 50; ++i) {
    const ProbMask prev = RandomMask(rng, 24, 20);
    identity = std::max(
        identity,
        MaxAbsDiff(PropagateMask(
                       prev, FlowField::Constant(24, 20, 0, 0, kMinScale), {}),
                   prev));
    // Interior mask: nonzero only where every shifted source stays inside.
    const int du = static_cast<int>(rng.Uniform(-4, 5));
    const int dv = static_cast<int>(rng.Uniform(-4, 5));
    ScalarGrid inner(24, 20);
    for (int r = 5; r < 15; ++r) {
      for (int c = 5; c < 19; ++c) inner.at(r, c) = prev.at(r, c);
    }
    const ProbMask src(inner);
    const ProbMask out = PropagateMask(
        src, FlowField::Constant(24, 20, du, dv, kMinScale), {});
    for (int r = 0; r < 20; ++r) {
      for (int c = 0; c < 24; ++c) {
        const int sr = r + dv, sc = c + du;
        const double want =
            sr >= 0 && sr < 20 && sc >= 0 && sc < 24 ? src.at(sr, sc) : 0.0;
        translate = std::max(translate, std::abs(out.at(r, c) - want));
      }
    }
  }
  return {identity <= 1e-9 && translate <= 1e-9,
          Fmt("identity error %.3g, translate error %.3g", identity,
              translate)};
}

Outcome KernelNormalization() {
  Rng rng(404);
  double worst = 0.0;
  int kernels = 0;
  for (int i = 0; i < 20; ++i) {
    const FlowField flow = RandomFlow(rng, 20, 16, kMinScale, 4.0);
    for (int r = 0; r < 16; ++r) {
      for (int c = 0; c < 20; ++c) {
        worst = std::max(
            worst,
            std::abs(ComputeCorrespondenceKernel(r, c, flow, {}).Sum() - 1.0));
        ++kernels;
      }
    }
  }
  return {worst <= 1e-12, Fmt("%.0f kernels, max |sum - 1| = %.3g", kernels,
                              worst)};
}

Outcome BaselineReduction() {
  int frames = 0;
  int mismatches = 0;
  for (const SceneSpec& spec : BenchmarkSuite(10, 5)) {
    const Sequence seq = BuildSequence(spec);
    RunConfig cfg;
    cfg.score.k_f = 0.0;
    cfg.variant.mode = Variant::kBaseline;
    std::vector<SyntheticSequenceTracker::Pick> base;
    TrackSequence(seq, cfg, &base);
    for (Variant v : {Variant::kFull, Variant::kNoFlow,
                      Variant::kNoUncertainty, Variant::kSegmaskAlb,
                      Variant::kSegmaskMbr}) {
      cfg.variant.mode = v;
      std::vector<SyntheticSequenceTracker::Pick> picks;
      TrackSequence(seq, cfg, &picks);
      if (picks.size() != base.size()) {
        ++mismatches;
        continue;
      }
      for (size_t i = 0; i < picks.size(); ++i) {
        ++frames;
        if (picks[i].frame != base[i].frame || picks[i].index != base[i].index)
          ++mismatches;
      }
    }
  }
  return {mismatches == 0 && frames > 0,
          Fmt("%.0f mismatching picks in %.0f variant frames", mismatches,
              frames)};
}

Outcome AblationOrdering() {
  const auto start = Clock::now();
  std::vector<Sequence> seqs;
  for (const SceneSpec& spec : BenchmarkSuite(30, 0)) {
    seqs.push_back(BuildSequence(spec));
  }
  const std::vector<AblationRow> rows =
      AblationReport(seqs, RunConfig{}, kAllVariants, 1);
  auto mean = [&](Variant v) {
    for (const AblationRow& row : rows) {
      if (row.variant == v) {
        return static_cast<double>(row.metrics.failures) / seqs.size();
      }
    }
    return -1.0;
  };
  const double full = mean(Variant::kFull);
  const double no_unc = mean(Variant::kNoUncertainty);
  const double no_flow = mean(Variant::kNoFlow);
  const double reject = mean(Variant::kFlowReject);
  const double base = mean(Variant::kBaseline);
  const double elapsed = Seconds(start);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "mean failures full %.3f, no_uncertainty %.3f, no_flow %.3f, "
                "flow_reject %.3f, baseline %.3f; %.1f s",
                full, no_unc, no_flow, reject, base, elapsed);
  return {full <= no_unc && no_unc <= no_flow && full < no_flow &&
              reject >= base && elapsed < 120.0,
          buf};
}

Outcome ScoringClosedForms() {
  double worst = 0.0;
  auto check = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };
  // Laplace density against its definition.
  for (double u : {-3.0, -0.5, 0.0, 0.7, 4.0}) {
    for (double b : {1e-3, 0.3, 1.0, 2.5}) {
      check(LaplaceDensity(u, 0.25, b),
            1.0 / (2.0 * b) * std::exp(-std::fabs(u - 0.25) / b));
    }
  }
  // Size penalty: 10x10 previous, 20x10 proposal, k_p = 0.1. With padding
  // (w + h) / 2 the padded sides are 35 x 25 and 20 x 20.
  const double s = std::sqrt(35.0 * 25.0);
  const double expected = std::exp((1.0 - 2.0 * (s / 20.0)) * 0.1);
  const double p_s = SizePenalty({0, 0, 20, 10}, {0, 0, 10, 10}, 0.1, 0.5);
  check(p_s, expected);
  const bool matches_published = std::abs(p_s - 0.8222) < 5e-5;
  check(SizePenalty({3, 4, 12, 9}, {3, 4, 12, 9}, 0.1, 0.5), 1.0);
  check(SizePenalty({3, 4, 12, 9}, {0, 0, 5, 30}, 0.0, 0.5), 1.0);
  // Cosine window.
  const AABox prev{50, 40, 10, 8};
  check(CosinePenalty({50, 40}, prev, 2.0), 1.0);
  check(CosinePenalty({70, 40}, prev, 2.0), 0.0);
  check(CosinePenalty({60, 40}, prev, 2.0), 0.5);
  // Normalizer: a 6x4 block inside a box covering 6x8 pixels.
  BinaryMask half(20, 20);
  for (int r = 2; r < 6; ++r) {
    for (int c = 2; c < 8; ++c) half.set(r, c, true);
  }
  check(ComputeNormalizer(half, AABox::FromEdges(1.5, 1.5, 7.5, 9.5)).t_flow,
        24.0 / 48.0);
  check(ComputeNormalizer(half, AABox::FromEdges(1.5, 1.5, 7.5, 5.5)).t_flow,
        1.0);
  check(ComputeNormalizer(BinaryMask(20, 20), prev).t_flow, 1e-3);
  // Normalized flow score, motion score, total score.
  check(NormalizedFlowScore(0.6, {0.5, false}), 1.0);
  check(NormalizedFlowScore(0.3, {0.6, false}), 0.5);
  check(NormalizedFlowScore(0.0, {0.2, false}), 0.0);
  check(MotionScore(0.5, 1.0, 0.4), 0.6 * 0.5 + 0.4 * 1.0);
  check(MotionScore(0.3, 0.9, 0.0), 0.3);
  check(MotionScore(0.3, 0.9, 1.0), 0.9);
  check(TotalScore(0.8, 1.0, 0.9, 0.42), 0.58 * 0.8 + 0.42 * 0.9);
  check(TotalScore(0.8, 0.7, 0.9, 0.0), 0.7 * 0.8);
  check(TotalScore(0.8, 0.7, 0.9, 1.0), 0.9);
  return {worst <= 1e-9 && matches_published,
          Fmt("max error %.3g; size penalty example %.6f", worst, p_s)};
}

// Scripted tracker: overlaps[t] <= 0 is a miss.
class ScriptedTracker : public SequenceTracker {
 public:
  explicit ScriptedTracker(std::vector<double> overlaps)
      : overlaps_(std::move(overlaps)) {}
  void Init(int) override {}
  RotBox Track(int frame) override {
    const double o = overlaps_[frame];
    if (o <= 0.0) return ToRotBox({-500, -500, 10, 10});
    return ToRotBox({50.0 + 10.0 * (1.0 - o) / (1.0 + o), 50, 10, 10});
  }

 private:
  std::vector<double> overlaps_;
};

FrameRecord Rec(FrameStatus s, double overlap = 0.0) {
  FrameRecord r;
  r.status = s;
  r.overlap = overlap;
  return r;
}

// Brute force: walk the records, cut runs at init and failure, and average
// the zero-padded truncated means per length.
double BruteForceEao(const std::vector<FrameRecord>& frames, int low,
                     int high) {
  std::vector<std::pair<std::vector<double>, bool>> runs;
  bool open = false;
  for (const FrameRecord& f : frames) {
    if (f.status == FrameStatus::kInit) {
      runs.push_back({{}, false});
      open = true;
    } else if (open && f.status == FrameStatus::kOk) {
      runs.back().first.push_back(f.overlap);
    } else if (open && f.status == FrameStatus::kFail) {
      runs.back().first.push_back(0.0);
      runs.back().second = true;
      open = false;
    }
  }
  double total = 0.0;
  int lengths = 0;
  for (int len = low; len <= high; ++len) {
    double sum = 0.0;
    int n = 0;
    for (const auto& [values, failed] : runs) {
      const int size = static_cast<int>(values.size());
      if (!failed && size < len) continue;
      double acc = 0.0;
      for (int i = 0; i < std::min(size, len); ++i) acc += values[i];
      sum += acc / len;
      ++n;
    }
    if (n > 0) {
      total += sum / n;
      ++lengths;
    }
  }
  return lengths > 0 ? total / lengths : 0.0;
}

Outcome ProtocolSanity() {
  const ProtocolConfig protocol;
  const std::vector<RotBox> gt(60, ToRotBox({50, 50, 10, 10}));
  ScriptedTracker oracle(std::vector<double>(60, 1.0));
  const SequenceResult perfect = RunProtocol("oracle", gt, oracle, protocol);
  const bool oracle_ok = perfect.failures == 0 &&
                         std::abs(perfect.accuracy - 1.0) < 1e-12;

  std::vector<FrameRecord> trace{Rec(FrameStatus::kOk, 1.0),
                                 Rec(FrameStatus::kOk, 0.8),
                                 Rec(FrameStatus::kFail)};
  for (int i = 0; i < 4; ++i) trace.push_back(Rec(FrameStatus::kSkip));
  trace.push_back(Rec(FrameStatus::kInit));
  for (int i = 0; i < 10; ++i) trace.push_back(Rec(FrameStatus::kOk, 0.4));
  trace.push_back(Rec(FrameStatus::kOk, 0.6));
  trace.push_back(Rec(FrameStatus::kOk, 0.6));
  SequenceResult r;
  r.frames = trace;
  Summarize(&r, protocol);
  const bool trace_ok = std::abs(r.accuracy - 0.75) < 1e-12 && r.failures == 1;

  const std::vector<FrameRecord> run{
      Rec(FrameStatus::kInit), Rec(FrameStatus::kOk, 1.0),
      Rec(FrameStatus::kOk, 1.0), Rec(FrameStatus::kOk, 0.5),
      Rec(FrameStatus::kFail)};
  const double eao = Eao(ExtractSegments(run), 1, 4);
  const double brute = BruteForceEao(run, 1, 4);
  const double hand = (1.0 + 1.0 + 5.0 / 6.0 + 0.625) / 4.0;
  const bool eao_ok = std::abs(eao - brute) < 1e-12 &&
                      std::abs(eao - hand) < 1e-12 &&
                      std::abs(eao - 0.8646) < 1e-4;

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "oracle accuracy %.3f failures %d; trace accuracy %.4f "
                "failures %d; EAO %.6f (brute force %.6f)",
                perfect.accuracy, perfect.failures, r.accuracy, r.failures,
                eao, brute);
  return {oracle_ok && trace_ok && eao_ok, buf};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Relative path -> contents for every regular file under `root`.
std::vector<std::pair<std::string, std::string>> Snapshot(
    const fs::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) {
      out.emplace_back(fs::relative(e.path(), root).string(),
                       Slurp(e.path()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome Determinism() {
  const fs::path base = fs::temp_directory_path() /
                        ("uft_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  bool ok = true;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = base / run;
    const std::string cli = UFT_CLI_PATH;
    const std::string synth = cli + " synth --suite 3 --seed 11 --out " +
                              (dir / "data").string() + " > /dev/null";
    const std::string track = cli + " track " + (dir / "data").string() +
                              " --seed 11 --out " +
                              (dir / "results").string() + " > /dev/null";
    ok = ok && std::system(synth.c_str()) == 0 &&
         std::system(track.c_str()) == 0;
  }
  size_t files = 0;
  if (ok) {
    const auto a = Snapshot(base / "a");
    const auto b = Snapshot(base / "b");
    files = a.size();
    ok = !a.empty() && a == b;
  }
  fs::remove_all(base);
  return {ok, Fmt("%.0f files compared across two synth and track runs",
                  static_cast<double>(files))};
}

}  // namespace
}  // namespace uft

int main() {
  using uft::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>>
      criteria = {
          {"fast propagation matches the dense oracle",
           uft::OracleEquivalence},
          {"propagation stays within the range of prev", uft::ConvexBound},
          {"identity and integer translation limits", uft::ExactLimits},
          {"correspondence kernels sum to one", uft::KernelNormalization},
          {"zero flow weight reduces to the baseline", uft::BaselineReduction},
          {"ablation failure ordering", uft::AblationOrdering},
          {"scoring closed forms", uft::ScoringClosedForms},
          {"protocol sanity", uft::ProtocolSanity},
          {"synth and track are deterministic", uft::Determinism},
      };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s  %s (%s)\n", i + 1,
                o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
