// cli/run-config.cc

// Copyright 2026  The sparch authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sparch/cli/run-config.h"

#include <fstream>
#include <set>

#include "sparch/base/error.h"
#include "sparch/base/hash.h"
#include "sparch/corpus/corpus-io.h"
#include "sparch/encoders/model-io.h"
#include "sparch/trainer/checkpoint.h"

namespace sparch {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string Trim(std::string_view s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

void ReadProfileInto(const fs::path &path, ConfigMap *map, std::set<fs::path> *seen) {
  const fs::path canonical = fs::weakly_canonical(path);
  if (!seen->insert(canonical).second) SPARCH_ERR(kConfig) << "profile inheritance cycle at " << path;
  std::ifstream is(path);
  if (!is) SPARCH_ERR(kIo) << "cannot open profile " << path;
  ConfigMap own;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string text = Trim(line.substr(0, line.find('#')));
    if (text.empty()) continue;
    const size_t eq = text.find('=');
    if (eq == std::string::npos) SPARCH_ERR(kConfig) << path << ":" << lineno << ": expected key = value";
    const std::string key = Trim(text.substr(0, eq));
    const std::string value = Trim(text.substr(eq + 1));
    if (key.empty()) SPARCH_ERR(kConfig) << path << ":" << lineno << ": empty key";
    if (key == "inherit") {
      ReadProfileInto(path.parent_path() / value, map, seen);
      continue;
    }
    own[key] = value;
  }
  for (auto &[k, v] : own) (*map)[k] = v;
}

// Flattens nested objects into dotted keys.
void Flatten(const json &j, const std::string &prefix, ordered_json *out) {
  for (const auto &[key, value] : j.items()) {
    if (value.is_object())
      Flatten(value, prefix + key + ".", out);
    else
      (*out)[prefix + key] = value;
  }
}

json ModelSettings(const RetrieverConfig &c) {
  json j = RetrieverConfigToJson(c);
  j.erase("input");
  j.erase("seed");
  j["tokens"].erase("vocab_size");
  j["features"].erase("input_dim");
  return j;
}

json CorpusSettings(const CorpusConfig &c) {
  json j = CorpusConfigToJson(c);
  j.erase("seed");
  return j;
}

json TrainSettings(const TrainConfig &c) {
  json j = TrainConfigToJson(c);
  j.erase("seed");
  return j;
}

// Converts the text of `value` to the JSON type of `current`.
json Coerce(const std::string &key, const json &current, const std::string &value) {
  if (current.is_string()) return value;
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception &) {
    SPARCH_ERR(kConfig) << "setting '" << key << "' expects a " << current.type_name() << ", got '" << value << "'";
  }
  if (current.is_boolean() && parsed.is_boolean()) return parsed;
  if (current.is_number_float() && parsed.is_number()) return parsed.get<double>();
  if (current.is_number_integer() || current.is_number_unsigned()) {
    if (parsed.is_number_integer() || parsed.is_number_unsigned()) return parsed;
  }
  SPARCH_ERR(kConfig) << "setting '" << key << "' expects a " << current.type_name() << ", got '" << value << "'";
}

// Sets a dotted path inside `doc`; the path must already exist.
void SetPath(json *doc, const std::string &full_key, const std::string &path, const std::string &value) {
  json *node = doc;
  size_t start = 0;
  while (true) {
    const size_t dot = path.find('.', start);
    const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(part)) SPARCH_ERR(kConfig) << "unknown setting '" << full_key << "'";
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  if (node->is_object()) SPARCH_ERR(kConfig) << "setting '" << full_key << "' is a group, not a value";
  *node = Coerce(full_key, *node, value);
}

}  // namespace

ConfigMap ReadProfile(const fs::path &path) {
  ConfigMap map;
  std::set<fs::path> seen;
  ReadProfileInto(path, &map, &seen);
  return map;
}

void ApplyOverride(ConfigMap *map, std::string_view assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string_view::npos) SPARCH_ERR(kConfig) << "override '" << assignment << "' is not key=value";
  const std::string key = Trim(assignment.substr(0, eq));
  if (key.empty()) SPARCH_ERR(kConfig) << "override '" << assignment << "' has an empty key";
  (*map)[key] = Trim(assignment.substr(eq + 1));
}

RunConfig BuildRunConfig(const ConfigMap &map) {
  RunConfig rc;
  rc.teacher.learning_rate = 3e-4;
  json corpus = CorpusSettings(rc.corpus);
  json model = ModelSettings(rc.model);
  json teacher = TrainSettings(rc.teacher);
  json student = TrainSettings(rc.student);
  json top = {{"profile", rc.profile},
              {"seed", rc.seed},
              {"threads", rc.threads},
              {"k", rc.k},
              {"student_input", InputKindName(rc.student_input)},
              {"paths", {{"root", "runs"}, {"corpus", ""}, {"checkpoints", ""}, {"index", ""}, {"reports", ""}}}};
  for (const auto &[key, value] : map) {
    const size_t dot = key.find('.');
    const std::string head = key.substr(0, dot);
    const std::string rest = dot == std::string::npos ? "" : key.substr(dot + 1);
    if (head == "corpus" && !rest.empty())
      SetPath(&corpus, key, rest, value);
    else if (head == "model" && !rest.empty())
      SetPath(&model, key, rest, value);
    else if (head == "teacher" && !rest.empty())
      SetPath(&teacher, key, rest, value);
    else if (head == "student" && !rest.empty() && rest != "input")
      SetPath(&student, key, rest, value);
    else if (key == "student.input")
      SetPath(&top, key, "student_input", value);
    else
      SetPath(&top, key, key, value);
  }

  rc.profile = top["profile"].get<std::string>();
  rc.seed = top["seed"].get<uint64_t>();
  rc.threads = top["threads"].get<int>();
  rc.k = top["k"].get<int>();
  if (rc.threads < 1) SPARCH_ERR(kConfig) << "threads must be at least 1";
  if (rc.k < 1) SPARCH_ERR(kConfig) << "k must be at least 1";
  rc.student_input = ParseInputKind(top["student_input"].get<std::string>());
  const json &paths = top["paths"];
  const fs::path root = paths["root"].get<std::string>();
  auto path_or = [&](const char *name) {
    const std::string v = paths[name].get<std::string>();
    return v.empty() ? root / name : fs::path(v);
  };
  rc.paths = {path_or("corpus"), path_or("checkpoints"), path_or("index"), path_or("reports")};

  corpus["seed"] = rc.seed;
  rc.corpus = CorpusConfigFromJson(corpus);
  rc.corpus.Validate();
  model["input"] = "tokens";
  model["seed"] = rc.seed;
  model["tokens"]["vocab_size"] = rc.corpus.VocabSize();
  model["features"]["input_dim"] = rc.corpus.feature_dim;
  rc.model = RetrieverConfigFromJson(model);
  teacher["seed"] = rc.seed;
  student["seed"] = rc.seed;
  rc.teacher = TrainConfigFromJson(teacher);
  rc.student = TrainConfigFromJson(student);
  rc.teacher.Validate();
  rc.student.Validate();
  return rc;
}

ordered_json RunConfig::Settings() const {
  ordered_json out;
  out["profile"] = profile;
  out["seed"] = seed;
  out["threads"] = threads;
  out["k"] = k;
  out["paths.corpus"] = paths.corpus.generic_string();
  out["paths.checkpoints"] = paths.checkpoints.generic_string();
  out["paths.index"] = paths.index.generic_string();
  out["paths.reports"] = paths.reports.generic_string();
  Flatten(CorpusSettings(corpus), "corpus.", &out);
  Flatten(ModelSettings(model), "model.", &out);
  Flatten(TrainSettings(teacher), "teacher.", &out);
  out["student.input"] = InputKindName(student_input);
  Flatten(TrainSettings(student), "student.", &out);
  return out;
}

std::string RunConfig::Hash() const {
  ordered_json s = Settings();
  for (const char *k : {"paths.corpus", "paths.checkpoints", "paths.index", "paths.reports", "threads"}) s.erase(k);
  Fnv1a64 hash;
  hash.Update(s.dump());
  return HexDigest(hash.Digest());
}

}  // namespace sparch
