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

#ifndef BREATHLINE_EVAL_H_
#define BREATHLINE_EVAL_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "breathline/annotations.h"
#include "breathline/breath_stats.h"
#include "breathline/classifiers.h"
#include "breathline/features.h"
#include "breathline/manifest.h"
#include "breathline/metrics.h"
#include "breathline/nn/model.h"
#include "breathline/nn/train.h"
#include "breathline/postprocess.h"
#include "json.hpp"

namespace breathline {

// Experiment settings read from `key = value` lines (`#` starts a comment).
struct ExperimentConfig {
  std::string experiment = "test1";
  std::uint64_t seed = 0;
  int iterations = 100;
  int workers = 1;
  double window_ms = 20.0;
  double hop_ms = 2.5;
  int n_mels = 128;
  int epochs = 50;
  int patience = 5;
  int batch_size = 32;
  double learning_rate = 1e-3;
  int lstm_hidden = 64;
  double threshold = 0.5;
  double min_breath_ms = 150.0;
  std::string classifier = "svc";
  double svc_c = 1.0;
  std::optional<double> svc_gamma;  // unset: scaled by feature variance
  double svc_coef0 = 1.0;
  int tree_max_depth = 3;

  // Throws ConfigError on unknown keys or malformed values.
  void Set(const std::string& key, const std::string& value);
  void Validate() const;

  FeatureConfig features() const;
  nn::ModelConfig model() const;
  nn::TrainConfig training() const;
  DetectionConfig detection() const;
  SvcConfig svc() const;
  TreeConfig tree() const;

  // Every key in a fixed order; the digest hashes this text.
  std::string Canonical() const;
  std::string Digest() const;
};

ExperimentConfig ParseExperimentConfig(std::istream& in);
ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path);

enum class CorpusKind { kPodcast, kNews, kSynthetic };

struct CorpusItem {
  std::string id;
  std::optional<std::string> speaker_id;
  std::string outlet;
  SampleLabel label = SampleLabel::kUnlabeled;
  std::filesystem::path audio_path;
  // Filled for annotated corpora.
  std::shared_ptr<const FeatureMatrix> features;
  std::optional<FrameLabels> frame_labels;
};

struct CorpusIndex {
  CorpusKind kind = CorpusKind::kPodcast;
  std::vector<CorpusItem> items;
  // SHA-256 over ids and audio file digests, in manifest order.
  std::string digest;
};

// Loads audio, features and frame labels for every entry. Throws InputError
// naming the entry when an annotation is missing, ConfigError when a
// speaker id is missing.
CorpusIndex BuildAnnotatedIndex(const Manifest& manifest,
                                const FeatureConfig& features, int workers = 1);

// Records paths and labels only; requires real/fake labels and outlets.
CorpusIndex BuildLabeledIndex(const Manifest& manifest);

enum class SplitStrategy { kContiguousKfold, kLeaveOnePodcast, kLeaveOneSpeaker, kOutletDisjoint };
std::string ToString(SplitStrategy strategy);

struct SplitPlan {
  SplitStrategy strategy = SplitStrategy::kOutletDisjoint;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::vector<std::string> train_outlets;
  std::vector<std::string> test_outlets;
  std::uint64_t seed = 0;
};

// Whole outlets go to one side. Each outlet category (real-only, fake-only,
// mixed) is shuffled and split so that train gets max(1, floor(n/2)) of a
// category with n >= 2 outlets and all of a single-outlet category.
SplitPlan OutletDisjointSplit(const CorpusIndex& corpus, std::uint64_t seed);

struct FoldResult {
  std::string name;
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::uint64_t seed = 0;
  double auprc = 0.0;
  std::string parameter_digest;
  nn::TrainResult training;
  std::vector<ScoreRow> scores;  // step-level, id "<item>#<step>"

  nlohmann::json ToJson() const;
};

struct GeneralizationResult {
  std::string experiment;
  std::vector<FoldResult> folds;
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation

  nlohmann::json ToJson() const;
};

// Fraction of a podcast's frames held out per iteration in Test 1.
double Test1HoldoutFraction(int num_podcasts);

GeneralizationResult RunTest1(const CorpusIndex& corpus, const ExperimentConfig& config,
                              int iterations);
GeneralizationResult RunTest2(const CorpusIndex& corpus, const ExperimentConfig& config);
GeneralizationResult RunTest3(const CorpusIndex& corpus, const ExperimentConfig& config);

// Trains a fresh detector on every annotated item, without holdout.
nn::BreathDetector<float> TrainDetector(const CorpusIndex& corpus,
                                        const ExperimentConfig& config,
                                        nn::TrainResult* result = nullptr);

struct PipelineResult {
  EvalReport report;
  EvalReport train_report;
  std::vector<ScoreRow> scores;  // test items
  std::vector<StatsRow> stats;   // every item
  Classifier classifier;
};

// Detect -> stats for every item, train the classifier on split.train,
// score split.test.
PipelineResult RunPipelineEval(const nn::BreathDetector<float>& detector,
                               const CorpusIndex& corpus, const SplitPlan& split,
                               ClassifierKind kind, const ExperimentConfig& config);

// Stats for every item of a labeled corpus, in corpus order.
std::vector<StatsRow> DetectCorpusStats(const nn::BreathDetector<float>& detector,
                                        const CorpusIndex& corpus,
                                        const ExperimentConfig& config);

}  // namespace breathline

#endif  // BREATHLINE_EVAL_H_
