// Copyright 2026 The Breathline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iterator>

#include "breathline/classifiers.h"
#include "breathline/error.h"
#include "json.hpp"

namespace breathline {

namespace {
constexpr const char* kThresholdVersion = "breathline-threshold/1";
}  // namespace

bool ThresholdClassify(const BreathStats& s) {
  return s.breaths_per_minute > 0.0 && s.avg_duration_ms > 0.0 && s.avg_spacing_ms > 0.0;
}

std::string ToString(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kThreshold: return "threshold";
    case ClassifierKind::kSvc: return "svc";
    case ClassifierKind::kTree: return "tree";
  }
  return "unknown";
}

ClassifierKind ParseClassifierKind(const std::string& text) {
  if (text == "threshold") return ClassifierKind::kThreshold;
  if (text == "svc") return ClassifierKind::kSvc;
  if (text == "tree") return ClassifierKind::kTree;
  throw ConfigError("unknown classifier '" + text + "' (expected threshold, svc or tree)");
}

double Classifier::Score(const BreathStats& stats) const {
  switch (kind) {
    case ClassifierKind::kThreshold: return ThresholdClassify(stats) ? 1.0 : 0.0;
    case ClassifierKind::kSvc: return svc.value().Score(stats);
    case ClassifierKind::kTree: return tree.value().Score(stats);
  }
  return 0.0;
}

bool Classifier::Classify(const BreathStats& stats) const {
  switch (kind) {
    case ClassifierKind::kThreshold: return ThresholdClassify(stats);
    case ClassifierKind::kSvc: return svc.value().Classify(stats);
    case ClassifierKind::kTree: return tree.value().Classify(stats);
  }
  return false;
}

Classifier TrainClassifier(ClassifierKind kind, const std::vector<LabeledSample>& samples,
                           const SvcConfig& svc_config, const TreeConfig& tree_config) {
  Classifier c;
  c.kind = kind;
  if (kind == ClassifierKind::kSvc) c.svc = TrainSvc(samples, svc_config);
  if (kind == ClassifierKind::kTree) c.tree = TrainTree(samples, tree_config);
  return c;
}

void SaveClassifier(const Classifier& classifier, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  switch (classifier.kind) {
    case ClassifierKind::kThreshold:
      out << nlohmann::json{{"version", kThresholdVersion}}.dump(2) << "\n";
      break;
    case ClassifierKind::kSvc: {
      const auto bytes = SerializeSvc(classifier.svc.value());
      out.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
      break;
    }
    case ClassifierKind::kTree:
      out << TreeToJson(classifier.tree.value());
      break;
  }
  if (!out) throw Error("write failed: " + path.string());
}

Classifier LoadClassifier(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  Classifier c;
  if (!bytes.empty() && bytes[0] == '{') {
    const std::string text(bytes.begin(), bytes.end());
    std::string version;
    try {
      version = nlohmann::json::parse(text).value("version", "");
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
    if (version == kThresholdVersion) {
      c.kind = ClassifierKind::kThreshold;
    } else {
      c.kind = ClassifierKind::kTree;
      c.tree = TreeFromJson(text);
    }
  } else {
    c.kind = ClassifierKind::kSvc;
    c.svc = DeserializeSvc(bytes);
  }
  return c;
}

}  // namespace breathline
