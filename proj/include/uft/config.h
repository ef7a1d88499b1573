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

// Flat `key = value` text used for run configurations and scene specs.

#ifndef UFT_CONFIG_H_
#define UFT_CONFIG_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uft/eval.h"
#include "uft/flow_mask.h"
#include "uft/scoring.h"
#include "uft/synthetic.h"
#include "uft/tracker.h"

namespace uft {

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

// One assignment per line; `#` starts a comment; blank lines are ignored.
// Throws kUsage on a line without `=` or with an empty key.
std::vector<KeyValue> ParseKeyValues(const std::string& text);

// Value parsers. Errors are kUsage and name the key.
double ParseDouble(const std::string& key, const std::string& value);
int64_t ParseInt(const std::string& key, const std::string& value);
uint64_t ParseUint(const std::string& key, const std::string& value);
bool ParseBool(const std::string& key, const std::string& value);
// "a, b" or "a b".
std::pair<double, double> ParsePair(const std::string& key,
                                    const std::string& value);

std::string FormatDouble(double value);

struct RunConfig {
  ScoreConfig score;
  VariantConfig variant;
  KernelConfig kernel;
  ProtocolConfig protocol;
  ProposalConfig proposals;
  OverlapKind overlap = OverlapKind::kPolygon;
  std::string dataset;
  std::string output;
  uint64_t seed = 0;
  int jobs = 1;

  // Throws kUsage.
  void Validate() const;
};

// Applies a single key; throws kUsage on an unknown key or a bad value.
void SetRunConfigKey(RunConfig* config, const std::string& key,
                     const std::string& value);

// Parses on top of `base`. Unknown keys are errors.
RunConfig ParseRunConfig(const std::string& text, RunConfig base = {});

// Every key with its current value and a short description, as a valid
// config file.
std::string FormatRunConfig(const RunConfig& config);

// Environment name for a key: "score.k_c" -> "UFT_SCORE_K_C".
std::string EnvName(const std::string& key);

// Applies every UFT_* variable whose key is known. `getenv` is injectable
// for tests.
void ApplyEnvOverrides(
    RunConfig* config,
    const std::function<std::optional<std::string>(const std::string&)>&
        getenv);
void ApplyEnvOverrides(RunConfig* config);

std::vector<std::string> RunConfigKeys();

}  // namespace uft

#endif  // UFT_CONFIG_H_
