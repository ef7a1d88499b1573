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

#include "uft/config.h"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "uft/error.h"

namespace uft {

namespace {

std::string Trim(const std::string& s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct KeySpec {
  const char* key;
  const char* help;
  std::string (*get)(const RunConfig&);
  void (*set)(RunConfig*, const std::string& key, const std::string& value);
};

std::string Int(int64_t v) { return std::to_string(v); }
std::string Bool(bool v) { return v ? "true" : "false"; }

#define UFT_DOUBLE_KEY(name, field, help)                                \
  {name, help, [](const RunConfig& c) { return FormatDouble(c.field); }, \
   [](RunConfig* c, const std::string& k, const std::string& v) {        \
     c->field = ParseDouble(k, v);                                       \
   }}
#define UFT_INT_KEY(name, field, help)                                  \
  {name, help, [](const RunConfig& c) { return Int(c.field); },         \
   [](RunConfig* c, const std::string& k, const std::string& v) {       \
     c->field = static_cast<int>(ParseInt(k, v));                       \
   }}

const std::vector<KeySpec>& Keys() {
  static const std::vector<KeySpec> keys = {
      UFT_DOUBLE_KEY("score.k_c", score.k_c, "position-term mix, [0, 1]"),
      UFT_DOUBLE_KEY("score.k_p", score.k_p, "size-penalty sharpness, >= 0"),
      UFT_DOUBLE_KEY("score.k_f", score.k_f, "flow mix, [0, 1]"),
      UFT_DOUBLE_KEY("score.t_seg", score.t_seg,
                     "mask binarization threshold, (0, 1)"),
      UFT_DOUBLE_KEY("score.window_scale", score.window_scale,
                     "cosine window half-support / previous box extent"),
      UFT_DOUBLE_KEY("score.context_padding", score.context_padding,
                     "padding = context_padding * (w + h)"),
      {"variant.mode", "full | no_flow | no_uncertainty | segmask_alb | "
                       "segmask_mbr | flow_reject | baseline",
       [](const RunConfig& c) {
         return std::string(VariantName(c.variant.mode));
       },
       [](RunConfig* c, const std::string&, const std::string& v) {
         c->variant.mode = ParseVariant(v);
       }},
      UFT_DOUBLE_KEY("variant.fixed_scale_b", variant.fixed_scale_b,
                     "Laplace scale for no_flow / no_uncertainty, pixels"),
      UFT_DOUBLE_KEY("variant.reject_threshold", variant.reject_threshold,
                     "flow_reject keep fraction of warped pixels"),
      UFT_DOUBLE_KEY("kernel.truncation_k", kernel.truncation_k,
                     "kernel half-width in units of b, >= 1"),
      {"kernel.renormalize_at_border",
       "renormalize weights over in-image pixels",
       [](const RunConfig& c) { return Bool(c.kernel.renormalize_at_border); },
       [](RunConfig* c, const std::string& k, const std::string& v) {
         c->kernel.renormalize_at_border = ParseBool(k, v);
       }},
      UFT_INT_KEY("protocol.reinit_delay", protocol.reinit_delay,
                  "frames from failure to re-initialization, >= 1"),
      UFT_INT_KEY("protocol.burn_in", protocol.burn_in,
                  "frames after init left out of accuracy, >= 0"),
      UFT_INT_KEY("protocol.eao_low", protocol.eao_low,
                  "shortest run length averaged by EAO"),
      UFT_INT_KEY("protocol.eao_high", protocol.eao_high,
                  "longest run length averaged by EAO"),
      UFT_INT_KEY("proposals.count", proposals.count,
                  "proposals per frame"),
      UFT_INT_KEY("proposals.gt_jitters", proposals.gt_jitters,
                  "jittered ground-truth copies among the proposals"),
      UFT_DOUBLE_KEY("proposals.jitter", proposals.jitter,
                     "relative jitter of the ground-truth copies"),
      UFT_DOUBLE_KEY("proposals.grid_step", proposals.grid_step,
                     "grid spacing / previous box size"),
      {"eval.overlap", "polygon | axis_aligned",
       [](const RunConfig& c) { return std::string(OverlapName(c.overlap)); },
       [](RunConfig* c, const std::string&, const std::string& v) {
         c->overlap = ParseOverlap(v);
       }},
      {"dataset", "dataset directory",
       [](const RunConfig& c) { return c.dataset; },
       [](RunConfig* c, const std::string&, const std::string& v) {
         c->dataset = v;
       }},
      {"output", "output path",
       [](const RunConfig& c) { return c.output; },
       [](RunConfig* c, const std::string&, const std::string& v) {
         c->output = v;
       }},
      {"seed", "run seed mixed into every provider stream",
       [](const RunConfig& c) { return std::to_string(c.seed); },
       [](RunConfig* c, const std::string& k, const std::string& v) {
         c->seed = ParseUint(k, v);
       }},
      UFT_INT_KEY("jobs", jobs, "worker threads, >= 1"),
  };
  return keys;
}

#undef UFT_DOUBLE_KEY
#undef UFT_INT_KEY

}  // namespace

std::vector<KeyValue> ParseKeyValues(const std::string& text) {
  std::vector<KeyValue> out;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (Trim(line).empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      ThrowUsage("line " + std::to_string(line_no) + ": expected key = value");
    }
    KeyValue kv{Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)), line_no};
    if (kv.key.empty()) {
      ThrowUsage("line " + std::to_string(line_no) + ": empty key");
    }
    out.push_back(std::move(kv));
  }
  return out;
}

double ParseDouble(const std::string& key, const std::string& value) {
  const std::string v = Trim(value);
  char* end = nullptr;
  errno = 0;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(d)) {
    ThrowUsage(key + ": expected a number, got '" + value + "'");
  }
  return d;
}

int64_t ParseInt(const std::string& key, const std::string& value) {
  const std::string v = Trim(value);
  char* end = nullptr;
  errno = 0;
  const long long i = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE) {
    ThrowUsage(key + ": expected an integer, got '" + value + "'");
  }
  return i;
}

uint64_t ParseUint(const std::string& key, const std::string& value) {
  const std::string v = Trim(value);
  char* end = nullptr;
  errno = 0;
  const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || v[0] == '-' || *end != '\0' || errno == ERANGE) {
    ThrowUsage(key + ": expected a non-negative integer, got '" + value +
               "'");
  }
  return u;
}

bool ParseBool(const std::string& key, const std::string& value) {
  const std::string v = Trim(value);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  ThrowUsage(key + ": expected true or false, got '" + value + "'");
}

std::pair<double, double> ParsePair(const std::string& key,
                                    const std::string& value) {
  std::string v = value;
  for (char& ch : v) {
    if (ch == ',') ch = ' ';
  }
  std::stringstream ss(v);
  std::string a, b, extra;
  if (!(ss >> a >> b) || (ss >> extra)) {
    ThrowUsage(key + ": expected two numbers, got '" + value + "'");
  }
  return {ParseDouble(key, a), ParseDouble(key, b)};
}

std::string FormatDouble(double value) {
  // Shortest form that reads back to the same double.
  char buf[40];
  for (int precision = 6; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

void RunConfig::Validate() const {
  try {
    score.Validate();
    variant.Validate();
    kernel.Validate();
    protocol.Validate();
    proposals.Validate();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kUsage) throw;
    ThrowUsage(e.what());
  }
  if (jobs < 1) ThrowUsage("jobs must be >= 1");
}

void SetRunConfigKey(RunConfig* config, const std::string& key,
                     const std::string& value) {
  for (const KeySpec& spec : Keys()) {
    if (key == spec.key) {
      spec.set(config, key, value);
      return;
    }
  }
  ThrowUsage(key + ": unknown config key");
}

RunConfig ParseRunConfig(const std::string& text, RunConfig base) {
  for (const KeyValue& kv : ParseKeyValues(text)) {
    SetRunConfigKey(&base, kv.key, kv.value);
  }
  base.Validate();
  return base;
}

std::string FormatRunConfig(const RunConfig& config) {
  std::string out;
  for (const KeySpec& spec : Keys()) {
    out += "# ";
    out += spec.help;
    out += "\n";
    out += spec.key;
    out += " = " + spec.get(config) + "\n";
  }
  return out;
}

std::string EnvName(const std::string& key) {
  std::string out = "UFT_";
  for (char ch : key) {
    out += ch == '.' ? '_' : static_cast<char>(std::toupper(ch));
  }
  return out;
}

void ApplyEnvOverrides(
    RunConfig* config,
    const std::function<std::optional<std::string>(const std::string&)>&
        getenv) {
  for (const KeySpec& spec : Keys()) {
    const std::string name = EnvName(spec.key);
    if (std::optional<std::string> v = getenv(name)) {
      try {
        spec.set(config, spec.key, *v);
      } catch (const Error& e) {
        ThrowUsage(name + ": " + e.what());
      }
    }
  }
}

void ApplyEnvOverrides(RunConfig* config) {
  ApplyEnvOverrides(config,
                    [](const std::string& name) -> std::optional<std::string> {
                      const char* v = std::getenv(name.c_str());
                      if (v == nullptr) return std::nullopt;
                      return std::string(v);
                    });
}

std::vector<std::string> RunConfigKeys() {
  std::vector<std::string> out;
  for (const KeySpec& spec : Keys()) out.push_back(spec.key);
  return out;
}

}  // namespace uft
