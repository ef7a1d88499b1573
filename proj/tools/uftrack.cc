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

// Command-line front end.
//
//   uftrack synth  SPEC --out DIR            one sequence from a scene spec
//   uftrack synth  --suite N --out DIR       seeded benchmark suite
//   uftrack track  DATASET --out PATH        per-frame results
//   uftrack eval   DATASET [--results PATH] [--ablation] [--out CSV]
//   uftrack sweep  DATASET --trials N --out CSV
//
// Settings are layered: built-in defaults, then --config, then UFT_*
// environment variables, then command-line flags. Exit status is 0 on
// success, 1 for usage errors, 2 for data errors.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uft/ablation.h"
#include "uft/config.h"
#include "uft/dataset.h"
#include "uft/error.h"
#include "uft/eval.h"
#include "uft/tracker.h"
#include "uft/ufg.h"

namespace fs = std::filesystem;

namespace uft {
namespace {

struct GlobalFlags {
  std::string config;
  std::optional<uint64_t> seed;
  std::string variant;
  std::string out;
  std::optional<int> jobs;
  bool vot_compat = false;
};

RunConfig LoadConfig(const GlobalFlags& flags) {
  RunConfig config;
  if (!flags.config.empty()) {
    std::string text;
    try {
      text = ReadFile(flags.config);
    } catch (const Error& e) {
      ThrowUsage(std::string("--config: ") + e.what());
    }
    config = ParseRunConfig(text);
  }
  ApplyEnvOverrides(&config);
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.variant.empty()) config.variant.mode = ParseVariant(flags.variant);
  if (!flags.out.empty()) config.output = flags.out;
  if (flags.jobs) config.jobs = *flags.jobs;
  config.Validate();
  return config;
}

std::string RequireOutput(const RunConfig& config) {
  if (config.output.empty()) ThrowUsage("--out is required");
  return config.output;
}

std::string DatasetPath(const std::string& positional,
                        const RunConfig& config) {
  const std::string path = positional.empty() ? config.dataset : positional;
  if (path.empty()) ThrowUsage("a dataset directory is required");
  return path;
}

// Results of sequence `name`: `path` itself for a single sequence, else
// `path/<name>.txt`.
fs::path ResultsPath(const fs::path& path, const std::string& name,
                     bool single) {
  return single ? path : path / (name + ".txt");
}

int CmdSynth(const GlobalFlags& flags, const std::string& spec_path,
             int suite, int static_suite) {
  const RunConfig config = LoadConfig(flags);
  const fs::path out = RequireOutput(config);
  const int modes =
      int(!spec_path.empty()) + int(suite > 0) + int(static_suite > 0);
  if (modes != 1) {
    ThrowUsage("synth takes exactly one of SPEC, --suite N, --static N");
  }
  if (!spec_path.empty()) {
    SceneSpec spec = ParseSceneSpec(ReadFile(spec_path));
    if (flags.seed) spec.seed = *flags.seed;
    WriteSequence(BuildSequence(spec), out);
    std::printf("wrote %s (%d frames)\n", out.string().c_str(),
                spec.num_frames);
    return 0;
  }
  const std::vector<SceneSpec> specs =
      suite > 0 ? BenchmarkSuite(suite, config.seed)
                : StaticSuite(static_suite, config.seed);
  ParallelFor(static_cast<int>(specs.size()), config.jobs, [&](int i) {
    WriteSequence(BuildSequence(specs[i]), out / specs[i].name);
  });
  std::printf("wrote %zu sequences to %s\n", specs.size(),
              out.string().c_str());
  return 0;
}

int CmdTrack(const GlobalFlags& flags, const std::string& dataset) {
  const RunConfig config = LoadConfig(flags);
  const fs::path out = RequireOutput(config);
  const std::vector<Sequence> seqs =
      ReadDataset(DatasetPath(dataset, config));
  const bool single = seqs.size() == 1;
  if (!single) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) ThrowData("cannot create " + out.string() + ": " + ec.message());
  }
  std::vector<SequenceResult> results(seqs.size());
  ParallelFor(static_cast<int>(seqs.size()), config.jobs, [&](int i) {
    results[i] = TrackSequence(seqs[i], config);
  });
  for (size_t i = 0; i < seqs.size(); ++i) {
    WriteFileAtomic(ResultsPath(out, seqs[i].name(), single),
                    FormatResults(results[i].frames, flags.vot_compat));
  }
  const Metrics m = Aggregate(results, config.protocol);
  std::printf("variant %s: %zu sequences, %d frames, %d failures\n",
              std::string(VariantName(config.variant.mode)).c_str(),
              seqs.size(), m.frames, m.failures);
  return 0;
}

void PrintMetrics(const std::string& label, const Metrics& m,
                  const RunConfig& config) {
  std::printf("%s\n", label.c_str());
  std::printf("  overlap      %s\n",
              std::string(OverlapName(config.overlap)).c_str());
  std::printf("  accuracy     %.6f\n", m.accuracy);
  std::printf("  robustness   %.6f failures per 100 frames\n", m.robustness);
  std::printf("  failures     %d in %d frames\n", m.failures, m.frames);
  std::printf("  EAO          %.6f over run lengths [%d, %d]\n", m.eao,
              config.protocol.eao_low, config.protocol.eao_high);
}

int CmdEval(const GlobalFlags& flags, const std::string& dataset,
            const std::string& results_path, bool ablation) {
  const RunConfig config = LoadConfig(flags);
  const std::vector<Sequence> seqs =
      ReadDataset(DatasetPath(dataset, config));
  std::string csv;
  if (ablation) {
    if (!results_path.empty()) {
      ThrowUsage("--ablation runs the tracker; drop --results");
    }
    const std::vector<AblationRow> rows =
        AblationReport(seqs, config, kAllVariants, config.jobs);
    std::printf("%s", FormatAblationTable(rows, config).c_str());
    csv = FormatAblationCsv(rows);
  } else {
    std::vector<SequenceResult> results(seqs.size());
    std::string label;
    if (!results_path.empty()) {
      const bool single = seqs.size() == 1;
      for (size_t i = 0; i < seqs.size(); ++i) {
        const fs::path p = ResultsPath(results_path, seqs[i].name(), single);
        if (!fs::exists(p)) ThrowData("missing results file " + p.string());
        SequenceResult& r = results[i];
        r.name = seqs[i].name();
        r.frames = ParseResults(ReadFile(p));
        ScoreAgainst(&r.frames, Groundtruth(seqs[i]), config.overlap);
        Summarize(&r, config.protocol);
      }
      label = "results";
    } else {
      ParallelFor(static_cast<int>(seqs.size()), config.jobs, [&](int i) {
        results[i] = TrackSequence(seqs[i], config);
      });
      label = std::string(VariantName(config.variant.mode));
    }
    const Metrics m = Aggregate(results, config.protocol);
    PrintMetrics(label, m, config);
    csv = std::string(kAblationCsvHeader) + "\n" + FormatMetricsCsv(label, m);
  }
  fs::path out = config.output;
  if (out.empty()) {
    out = results_path.empty() ? fs::path("metrics.csv")
                               : fs::path(results_path + ".metrics.csv");
  }
  WriteFileAtomic(out, csv);
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

int CmdSweep(const GlobalFlags& flags, const std::string& dataset,
             int trials, const SearchSpace& space) {
  const RunConfig config = LoadConfig(flags);
  const fs::path out = RequireOutput(config);
  const std::vector<Sequence> seqs =
      ReadDataset(DatasetPath(dataset, config));
  std::printf("ranges: k_c in [%.2f, %.2f], k_p in [%.2f, %.2f], "
              "k_f in [%.2f, %.2f]\n",
              space.k_c.lo, space.k_c.hi, space.k_p.lo, space.k_p.hi,
              space.k_f.lo, space.k_f.hi);
  const SearchResult result = RandomSearch(
      space, trials, config.seed, config.score,
      [&](const ScoreConfig& score) {
        RunConfig c = config;
        c.score = score;
        std::vector<SequenceResult> results;
        for (const Sequence& s : seqs) results.push_back(TrackSequence(s, c));
        return Eao(results, c.protocol);
      },
      config.jobs);
  std::string csv = "rank,trial,k_c,k_p,k_f,eao\n";
  char buf[160];
  for (size_t i = 0; i < result.leaderboard.size(); ++i) {
    const Trial& t = result.leaderboard[i];
    std::snprintf(buf, sizeof(buf), "%zu,%d,%.6f,%.6f,%.6f,%.6f\n", i + 1,
                  t.index, t.config.k_c, t.config.k_p, t.config.k_f,
                  t.objective);
    csv += buf;
  }
  WriteFileAtomic(out, csv);
  const Trial& best = result.leaderboard.front();
  std::printf("best trial %d: k_c=%.6f k_p=%.6f k_f=%.6f EAO=%.6f\n",
              best.index, best.config.k_c, best.config.k_p, best.config.k_f,
              best.objective);
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

Range ParseRange(const std::string& flag, const std::string& text,
                 Range fallback) {
  if (text.empty()) return fallback;
  auto [lo, hi] = ParsePair(flag, text);
  return {lo, hi};
}

int Main(int argc, char** argv) {
  CLI::App app{"Uncertainty-flow tracker and synthetic benchmark harness"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config, "key = value config file");
  app.add_option("--seed", flags.seed, "run seed");
  app.add_option("--variant", flags.variant, "tracker variant");
  app.add_option("--out", flags.out, "output path");
  app.add_option("--jobs", flags.jobs, "worker threads");
  app.add_flag("--vot-compat", flags.vot_compat,
               "numeric status markers in results files");

  std::string spec_path;
  int suite = 0;
  int static_suite = 0;
  CLI::App* synth = app.add_subcommand("synth", "write a synthetic dataset");
  synth->fallthrough();
  synth->add_option("spec", spec_path, "scene spec file");
  synth->add_option("--suite", suite, "benchmark suite size");
  synth->add_option("--static", static_suite, "static suite size");

  std::string dataset;
  CLI::App* track = app.add_subcommand("track", "track a dataset");
  track->fallthrough();
  track->add_option("dataset", dataset, "dataset directory");

  std::string results;
  bool ablation = false;
  CLI::App* eval = app.add_subcommand("eval", "evaluate results or a run");
  eval->fallthrough();
  eval->add_option("dataset", dataset, "dataset directory");
  eval->add_option("--results", results, "results file or directory");
  eval->add_flag("--ablation", ablation, "evaluate all variants");

  int trials = 20;
  std::string k_c, k_p, k_f;
  CLI::App* sweep = app.add_subcommand("sweep", "random hyperparameter search");
  sweep->fallthrough();
  sweep->add_option("dataset", dataset, "dataset directory");
  sweep->add_option("--trials", trials, "number of trials");
  sweep->add_option("--k-c", k_c, "k_c range lo,hi");
  sweep->add_option("--k-p", k_p, "k_p range lo,hi");
  sweep->add_option("--k-f", k_f, "k_f range lo,hi");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*synth) return CmdSynth(flags, spec_path, suite, static_suite);
    if (*track) return CmdTrack(flags, dataset);
    if (*eval) return CmdEval(flags, dataset, results, ablation);
    if (*sweep) {
      SearchSpace space;
      space.k_c = ParseRange("--k-c", k_c, space.k_c);
      space.k_p = ParseRange("--k-p", k_p, space.k_p);
      space.k_f = ParseRange("--k-f", k_f, space.k_f);
      try {
        space.Validate();
      } catch (const Error& e) {
        ThrowUsage(e.what());
      }
      if (trials < 1) ThrowUsage("--trials must be >= 1");
      return CmdSweep(flags, dataset, trials, space);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == ErrorKind::kUsage ? 1 : 2;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}

}  // namespace
}  // namespace uft

int main(int argc, char** argv) { return uft::Main(argc, argv); }
