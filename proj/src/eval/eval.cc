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

#include "breathline/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "breathline/audio.h"
#include "breathline/digest.h"
#include "breathline/error.h"
#include "breathline/parallel.h"
#include "breathline/random.h"

namespace breathline {

namespace {

double ParseDouble(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

std::int64_t ParseInt(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" + v + "'");
  }
  return out;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::Set(const std::string& key, const std::string& value) {
  const std::string v = Trim(value);
  if (key == "experiment") experiment = v;
  else if (key == "seed") seed = static_cast<std::uint64_t>(ParseInt(key, v));
  else if (key == "iterations") iterations = static_cast<int>(ParseInt(key, v));
  else if (key == "workers") workers = static_cast<int>(ParseInt(key, v));
  else if (key == "window_ms") window_ms = ParseDouble(key, v);
  else if (key == "hop_ms") hop_ms = ParseDouble(key, v);
  else if (key == "n_mels") n_mels = static_cast<int>(ParseInt(key, v));
  else if (key == "epochs") epochs = static_cast<int>(ParseInt(key, v));
  else if (key == "patience") patience = static_cast<int>(ParseInt(key, v));
  else if (key == "batch_size") batch_size = static_cast<int>(ParseInt(key, v));
  else if (key == "learning_rate") learning_rate = ParseDouble(key, v);
  else if (key == "lstm_hidden") lstm_hidden = static_cast<int>(ParseInt(key, v));
  else if (key == "threshold") threshold = ParseDouble(key, v);
  else if (key == "min_breath_ms") min_breath_ms = ParseDouble(key, v);
  else if (key == "classifier") classifier = v;
  else if (key == "svc_c") svc_c = ParseDouble(key, v);
  else if (key == "svc_gamma") {
    if (v == "scale") svc_gamma.reset();
    else svc_gamma = ParseDouble(key, v);
  } else if (key == "svc_coef0") svc_coef0 = ParseDouble(key, v);
  else if (key == "tree_max_depth") tree_max_depth = static_cast<int>(ParseInt(key, v));
  else throw ConfigError("config: unknown key '" + key + "'");
}

void ExperimentConfig::Validate() const {
  if (experiment != "test1" && experiment != "test2" && experiment != "test3" &&
      experiment != "pipeline") {
    throw ConfigError("unknown experiment '" + experiment +
                      "' (expected test1, test2, test3 or pipeline)");
  }
  if (iterations < 1) throw ConfigError("config: iterations must be >= 1");
  if (workers < 1) throw ConfigError("config: workers must be >= 1");
  features().Validate(kCanonicalSampleRate);
  model().Validate();
  training().Validate();
  detection().Validate();
  ParseClassifierKind(classifier);
  if (!(svc_c > 0.0)) throw ConfigError("config: svc_c must be > 0");
  if (svc_gamma && !(*svc_gamma > 0.0)) throw ConfigError("config: svc_gamma must be > 0");
  if (tree_max_depth < 0) throw ConfigError("config: tree_max_depth must be >= 0");
}

FeatureConfig ExperimentConfig::features() const {
  FeatureConfig f;
  f.window_length_ms = window_ms;
  f.hop_length_ms = hop_ms;
  f.n_mels = n_mels;
  return f;
}

nn::ModelConfig ExperimentConfig::model() const {
  nn::ModelConfig m;
  m.n_features = n_mels + 2;
  m.lstm_hidden = lstm_hidden;
  return m;
}

nn::TrainConfig ExperimentConfig::training() const {
  nn::TrainConfig t;
  t.batch_size = batch_size;
  t.adam.lr = learning_rate;
  t.epochs = epochs;
  t.patience = patience;
  t.seed = seed;
  return t;
}

DetectionConfig ExperimentConfig::detection() const {
  DetectionConfig d;
  d.binarize_threshold = threshold;
  d.min_breath_ms = min_breath_ms;
  d.step_ms = hop_ms * model().FramesPerStep();
  return d;
}

SvcConfig ExperimentConfig::svc() const {
  SvcConfig s;
  s.c = svc_c;
  s.gamma = svc_gamma;
  s.coef0 = svc_coef0;
  return s;
}

TreeConfig ExperimentConfig::tree() const { return {tree_max_depth}; }

std::string ExperimentConfig::Canonical() const {
  std::ostringstream o;
  o << "experiment=" << experiment << "\n"
    << "seed=" << seed << "\n"
    << "iterations=" << iterations << "\n"
    << "window_ms=" << FormatDouble(window_ms) << "\n"
    << "hop_ms=" << FormatDouble(hop_ms) << "\n"
    << "n_mels=" << n_mels << "\n"
    << "epochs=" << epochs << "\n"
    << "patience=" << patience << "\n"
    << "batch_size=" << batch_size << "\n"
    << "learning_rate=" << FormatDouble(learning_rate) << "\n"
    << "lstm_hidden=" << lstm_hidden << "\n"
    << "threshold=" << FormatDouble(threshold) << "\n"
    << "min_breath_ms=" << FormatDouble(min_breath_ms) << "\n"
    << "classifier=" << classifier << "\n"
    << "svc_c=" << FormatDouble(svc_c) << "\n"
    << "svc_gamma=" << (svc_gamma ? FormatDouble(*svc_gamma) : "scale") << "\n"
    << "svc_coef0=" << FormatDouble(svc_coef0) << "\n"
    << "tree_max_depth=" << tree_max_depth << "\n";
  return o.str();
}

std::string ExperimentConfig::Digest() const { return Sha256Hex(Canonical()); }

ExperimentConfig ParseExperimentConfig(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    config.Set(Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return ParseExperimentConfig(in);
}

// ---------------------------------------------------------------------------

namespace {

std::string CorpusDigest(const std::vector<CorpusItem>& items) {
  Sha256 h;
  for (const auto& item : items) {
    h.Update(item.id);
    h.Update(std::string_view("\n"));
    h.Update(Sha256OfFile(item.audio_path.string()));
    h.Update(std::string_view("\n"));
  }
  return h.HexDigest();
}

CorpusItem ItemFromEntry(const Manifest& manifest, const ManifestEntry& e) {
  if (IsUrl(e.source)) {
    throw InputError("item " + e.id + ": source is a URL; fetch it first");
  }
  CorpusItem item;
  item.id = e.id;
  item.speaker_id = e.speaker_id;
  item.outlet = e.outlet;
  item.label = e.label;
  item.audio_path = manifest.ResolvePath(e.source);
  return item;
}

}  // namespace

CorpusIndex BuildAnnotatedIndex(const Manifest& manifest, const FeatureConfig& features,
                                int workers) {
  CorpusIndex index;
  index.kind = CorpusKind::kPodcast;
  index.items.resize(manifest.entries.size());
  ParallelFor(manifest.entries.size(), workers, [&](size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    CorpusItem item = ItemFromEntry(manifest, e);
    if (!e.annotation_path || e.annotation_path->empty()) {
      throw InputError("item " + e.id + ": no annotation file");
    }
    const AudioBuffer audio = LoadCanonical(item.audio_path.string());
    auto matrix = std::make_shared<FeatureMatrix>(ExtractFeatures(audio, features));
    BreathIntervalSet breaths;
    try {
      breaths = LoadAnnotations(manifest.ResolvePath(*e.annotation_path), audio.duration_ms());
    } catch (const Error& err) {
      throw InputError("item " + e.id + ": " + err.what());
    }
    item.frame_labels = FramesFromIntervals(breaths, features, matrix->rows);
    item.features = std::move(matrix);
    index.items[i] = std::move(item);
  });
  index.digest = CorpusDigest(index.items);
  return index;
}

CorpusIndex BuildLabeledIndex(const Manifest& manifest) {
  CorpusIndex index;
  index.kind = CorpusKind::kNews;
  for (const auto& e : manifest.entries) {
    if (e.label == SampleLabel::kUnlabeled) {
      throw ConfigError("item " + e.id + ": needs a real or fake label");
    }
    index.items.push_back(ItemFromEntry(manifest, e));
  }
  index.digest = CorpusDigest(index.items);
  return index;
}

std::string ToString(SplitStrategy strategy) {
  switch (strategy) {
    case SplitStrategy::kContiguousKfold: return "contiguous-kfold";
    case SplitStrategy::kLeaveOnePodcast: return "leave-one-podcast";
    case SplitStrategy::kLeaveOneSpeaker: return "leave-one-speaker";
    case SplitStrategy::kOutletDisjoint: return "outlet-disjoint";
  }
  return "unknown";
}

SplitPlan OutletDisjointSplit(const CorpusIndex& corpus, std::uint64_t seed) {
  std::map<std::string, std::pair<int, int>> outlets;  // outlet -> (real, fake)
  for (const auto& item : corpus.items) {
    if (item.outlet.empty()) throw ConfigError("item " + item.id + ": no outlet");
    auto& counts = outlets[item.outlet];
    if (item.label == SampleLabel::kReal) ++counts.first;
    else if (item.label == SampleLabel::kFake) ++counts.second;
    else throw ConfigError("item " + item.id + ": needs a real or fake label");
  }
  if (outlets.size() < 2) {
    throw ConfigError("outlet-disjoint split needs at least 2 outlets, found " +
                      std::to_string(outlets.size()));
  }
  std::vector<std::string> real_only, fake_only, mixed;
  for (const auto& [name, c] : outlets) {
    (c.first > 0 && c.second > 0 ? mixed : c.first > 0 ? real_only : fake_only).push_back(name);
  }
  SplitPlan plan;
  plan.strategy = SplitStrategy::kOutletDisjoint;
  plan.seed = seed;
  Rng rng(DeriveSeed(seed, 3));
  std::set<std::string> train;
  for (auto* group : {&real_only, &fake_only, &mixed}) {
    rng.Shuffle(*group);
    const size_t n = group->size();
    const size_t n_train = n <= 1 ? n : std::max<size_t>(1, n / 2);
    for (size_t i = 0; i < n; ++i) {
      (i < n_train ? plan.train_outlets : plan.test_outlets).push_back((*group)[i]);
      if (i < n_train) train.insert((*group)[i]);
    }
  }
  std::sort(plan.train_outlets.begin(), plan.train_outlets.end());
  std::sort(plan.test_outlets.begin(), plan.test_outlets.end());
  if (plan.test_outlets.empty()) {
    throw ConfigError("outlet-disjoint split is infeasible: no outlet left for testing");
  }
  for (const auto& item : corpus.items) {
    (train.count(item.outlet) ? plan.train_ids : plan.test_ids).push_back(item.id);
  }
  return plan;
}

// ---------------------------------------------------------------------------

namespace {

struct Segment {
  size_t item;
  std::int64_t begin, end;  // frames
};

FeatureMatrix SliceRows(const FeatureMatrix& m, std::int64_t begin, std::int64_t end) {
  FeatureMatrix out;
  out.rows = end - begin;
  out.cols = m.cols;
  out.config = m.config;
  out.sample_rate = m.sample_rate;
  out.source_duration_ms = static_cast<double>(out.rows) * m.config.hop_length_ms;
  out.data.assign(m.data.begin() + begin * m.cols, m.data.begin() + end * m.cols);
  return out;
}

const FrameLabels& LabelsOf(const CorpusItem& item) {
  if (!item.features || !item.frame_labels) {
    throw InputError("item " + item.id + ": no features or frame labels loaded");
  }
  return *item.frame_labels;
}

nn::BreathDetector<float> TrainOnSegments(const CorpusIndex& corpus,
                                          const std::vector<Segment>& segments,
                                          const ExperimentConfig& config,
                                          std::uint64_t seed, nn::TrainResult* result) {
  const auto model_config = config.model();
  nn::ChunkDataset data(model_config.chunk_frames, model_config.FramesPerStep());
  for (const auto& s : segments) {
    const auto& item = corpus.items[s.item];
    data.AddSegment(item.features, LabelsOf(item), s.begin, s.end);
  }
  if (data.empty()) throw InputError("training segments hold no full chunk");
  nn::BreathDetector<float> model(model_config);
  model.Initialize(DeriveSeed(seed, 1));
  auto train_config = config.training();
  train_config.seed = seed;
  auto r = nn::Train(&model, data, nullptr, train_config);
  if (result) *result = std::move(r);
  return model;
}

// Step-level scores over the given segments; segments start on step
// boundaries.
std::vector<ScoreRow> ScoreSegments(const nn::BreathDetector<float>& model,
                                    const CorpusIndex& corpus,
                                    const std::vector<Segment>& segments) {
  const int fps = model.config().FramesPerStep();
  std::vector<ScoreRow> rows;
  for (const auto& s : segments) {
    const auto& item = corpus.items[s.item];
    const auto& labels = LabelsOf(item);
    const auto slice = SliceRows(*item.features, s.begin, s.end);
    FrameLabels frame_slice = labels;
    frame_slice.labels.assign(labels.labels.begin() + s.begin, labels.labels.begin() + s.end);
    const auto probs = nn::PredictFile(model, slice);
    const auto truths = StepsFromFrames(frame_slice, fps);
    const std::int64_t first_step = s.begin / fps;
    for (size_t k = 0; k < probs.size(); ++k) {
      rows.push_back({item.id + "#" + std::to_string(first_step + static_cast<std::int64_t>(k)),
                      probs[k], truths[k] != 0});
    }
  }
  return rows;
}

double RowsAuprc(const std::vector<ScoreRow>& rows) {
  std::vector<Scored> scored;
  scored.reserve(rows.size());
  for (const auto& r : rows) scored.push_back({r.score, r.truth});
  return Auprc(scored);
}

struct FoldSpec {
  std::string name;
  std::vector<Segment> train;
  std::vector<Segment> test;
};

GeneralizationResult RunFolds(const std::string& experiment, const CorpusIndex& corpus,
                              const std::vector<FoldSpec>& specs,
                              const ExperimentConfig& config) {
  GeneralizationResult result;
  result.experiment = experiment;
  result.folds.resize(specs.size());
  ParallelFor(specs.size(), config.workers, [&](size_t f) {
    const FoldSpec& spec = specs[f];
    FoldResult& fold = result.folds[f];
    fold.name = spec.name;
    fold.seed = config.seed ^ static_cast<std::uint64_t>(f);
    std::set<std::string> train_ids, test_ids;
    for (const auto& s : spec.train) train_ids.insert(corpus.items[s.item].id);
    for (const auto& s : spec.test) test_ids.insert(corpus.items[s.item].id);
    fold.train_ids.assign(train_ids.begin(), train_ids.end());
    fold.test_ids.assign(test_ids.begin(), test_ids.end());
    const auto model = TrainOnSegments(corpus, spec.train, config, fold.seed, &fold.training);
    fold.parameter_digest = model.ParameterDigest();
    fold.scores = ScoreSegments(model, corpus, spec.test);
    fold.auprc = RowsAuprc(fold.scores);
  });
  double sum = 0.0;
  for (const auto& f : result.folds) sum += f.auprc;
  result.mean = sum / static_cast<double>(result.folds.size());
  double var = 0.0;
  for (const auto& f : result.folds) var += (f.auprc - result.mean) * (f.auprc - result.mean);
  result.stddev = std::sqrt(var / static_cast<double>(result.folds.size()));
  return result;
}

Segment Whole(const CorpusIndex& corpus, size_t i) {
  return {i, 0, corpus.items[i].features ? corpus.items[i].features->rows : 0};
}

}  // namespace

double Test1HoldoutFraction(int num_podcasts) { return 1.0 / num_podcasts; }

GeneralizationResult RunTest1(const CorpusIndex& corpus, const ExperimentConfig& config,
                              int iterations) {
  const int x = static_cast<int>(corpus.items.size());
  if (x < 2) throw ConfigError("test1 needs at least 2 podcasts");
  if (iterations < 1) throw ConfigError("test1 needs at least 1 iteration");
  const int fps = config.model().FramesPerStep();
  std::vector<FoldSpec> specs;
  for (int it = 0; it < iterations; ++it) {
    Rng rng(DeriveSeed(config.seed ^ static_cast<std::uint64_t>(it), 2));
    FoldSpec spec;
    spec.name = "iteration-" + std::to_string(it);
    for (size_t i = 0; i < corpus.items.size(); ++i) {
      const auto& item = corpus.items[i];
      LabelsOf(item);
      const std::int64_t rows = item.features->rows;
      const std::int64_t block =
          static_cast<std::int64_t>(std::floor(rows * Test1HoldoutFraction(x) / fps)) * fps;
      if (block < fps || block > rows) {
        throw ConfigError("test1: podcast " + item.id + " is too short for a " +
                          std::to_string(100.0 / x) + "% holdout block");
      }
      const std::int64_t positions = (rows - block) / fps + 1;
      const std::int64_t start =
          fps * static_cast<std::int64_t>(rng.Below(static_cast<std::uint64_t>(positions)));
      spec.test.push_back({i, start, start + block});
      if (start > 0) spec.train.push_back({i, 0, start});
      if (start + block < rows) spec.train.push_back({i, start + block, rows});
    }
    specs.push_back(std::move(spec));
  }
  return RunFolds("test1", corpus, specs, config);
}

GeneralizationResult RunTest2(const CorpusIndex& corpus, const ExperimentConfig& config) {
  if (corpus.items.size() < 2) throw ConfigError("test2 needs at least 2 podcasts");
  std::vector<FoldSpec> specs;
  for (size_t held = 0; held < corpus.items.size(); ++held) {
    FoldSpec spec;
    spec.name = corpus.items[held].id;
    for (size_t i = 0; i < corpus.items.size(); ++i) {
      (i == held ? spec.test : spec.train).push_back(Whole(corpus, i));
    }
    specs.push_back(std::move(spec));
  }
  return RunFolds("test2", corpus, specs, config);
}

GeneralizationResult RunTest3(const CorpusIndex& corpus, const ExperimentConfig& config) {
  std::vector<std::string> speakers;
  for (const auto& item : corpus.items) {
    if (!item.speaker_id || item.speaker_id->empty()) {
      throw ConfigError("test3: item " + item.id + " has no speaker id");
    }
    if (std::find(speakers.begin(), speakers.end(), *item.speaker_id) == speakers.end()) {
      speakers.push_back(*item.speaker_id);
    }
  }
  if (speakers.size() < 2) throw ConfigError("test3 needs at least 2 speakers");
  std::vector<FoldSpec> specs;
  for (const auto& speaker : speakers) {
    FoldSpec spec;
    spec.name = speaker;
    for (size_t i = 0; i < corpus.items.size(); ++i) {
      (*corpus.items[i].speaker_id == speaker ? spec.test : spec.train)
          .push_back(Whole(corpus, i));
    }
    specs.push_back(std::move(spec));
  }
  return RunFolds("test3", corpus, specs, config);
}

nlohmann::json FoldResult::ToJson() const {
  return {{"name", name},
          {"seed", seed},
          {"train_ids", train_ids},
          {"test_ids", test_ids},
          {"auprc", auprc},
          {"parameter_digest", parameter_digest},
          {"train_loss", training.train_loss},
          {"test_steps", scores.size()}};
}

nlohmann::json GeneralizationResult::ToJson() const {
  std::vector<double> values;
  for (const auto& f : folds) values.push_back(f.auprc);
  nlohmann::json fold_json = nlohmann::json::array();
  for (const auto& f : folds) fold_json.push_back(f.ToJson());
  return {{"experiment", experiment},
          {"auprc", values},
          {"mean", mean},
          {"std", stddev},
          {"folds", fold_json}};
}

nn::BreathDetector<float> TrainDetector(const CorpusIndex& corpus,
                                        const ExperimentConfig& config,
                                        nn::TrainResult* result) {
  std::vector<Segment> all;
  for (size_t i = 0; i < corpus.items.size(); ++i) {
    LabelsOf(corpus.items[i]);
    all.push_back(Whole(corpus, i));
  }
  return TrainOnSegments(corpus, all, config, config.seed, result);
}

// ---------------------------------------------------------------------------

std::vector<StatsRow> DetectCorpusStats(const nn::BreathDetector<float>& detector,
                                        const CorpusIndex& corpus,
                                        const ExperimentConfig& config) {
  const auto features = config.features();
  const auto detection = config.detection();
  std::vector<StatsRow> rows(corpus.items.size());
  ParallelFor(corpus.items.size(), config.workers, [&](size_t i) {
    const auto& item = corpus.items[i];
    const AudioBuffer audio = LoadCanonical(item.audio_path.string());
    const auto breaths = DetectBreaths(detector, audio, features, detection);
    rows[i] = {item.id, item.label, ComputeStats(breaths, audio.duration_ms())};
  });
  return rows;
}

namespace {

EvalReport Evaluate(const Classifier& classifier, const std::vector<LabeledSample>& samples,
                    std::vector<ScoreRow>* scores) {
  EvalReport report;
  report.classifier = ToString(classifier.kind);
  report.positive_class = "real";
  std::vector<Scored> scored;
  std::vector<std::uint8_t> predictions, truths;
  for (const auto& s : samples) {
    const double score = classifier.Score(s.stats);
    scored.push_back({score, s.real});
    predictions.push_back(classifier.Classify(s.stats) ? 1 : 0);
    truths.push_back(s.real ? 1 : 0);
    if (scores) scores->push_back({s.id, score, s.real});
  }
  if (samples.empty()) throw InputError("evaluation set is empty");
  report.point = ComputePointMetrics(predictions, truths);
  const bool both = report.point.counts.tp + report.point.counts.fn > 0 &&
                    report.point.counts.tn + report.point.counts.fp > 0;
  if (classifier.kind != ClassifierKind::kThreshold && both) {
    report.auprc = Auprc(scored);
    report.eer = Eer(scored);
  }
  return report;
}

}  // namespace

PipelineResult RunPipelineEval(const nn::BreathDetector<float>& detector,
                               const CorpusIndex& corpus, const SplitPlan& split,
                               ClassifierKind kind, const ExperimentConfig& config) {
  PipelineResult out;
  out.stats = DetectCorpusStats(detector, corpus, config);
  std::map<std::string, const StatsRow*> by_id;
  std::map<std::string, std::string> outlet_of;
  for (size_t i = 0; i < out.stats.size(); ++i) {
    by_id[out.stats[i].id] = &out.stats[i];
    outlet_of[corpus.items[i].id] = corpus.items[i].outlet;
  }
  auto samples = [&](const std::vector<std::string>& ids) {
    std::vector<LabeledSample> v;
    for (const auto& id : ids) {
      const auto it = by_id.find(id);
      if (it == by_id.end()) throw InputError("split references unknown item " + id);
      v.push_back({id, it->second->stats, it->second->label == SampleLabel::kReal});
    }
    return v;
  };
  const auto train = samples(split.train_ids);
  const auto test = samples(split.test_ids);
  out.classifier = TrainClassifier(kind, train, config.svc(), config.tree());

  std::set<std::string> train_outlets, test_outlets;
  for (const auto& id : split.train_ids) train_outlets.insert(outlet_of[id]);
  for (const auto& id : split.test_ids) test_outlets.insert(outlet_of[id]);
  int overlap = 0;
  for (const auto& o : test_outlets) overlap += train_outlets.count(o) ? 1 : 0;

  auto finish = [&](EvalReport& r, const std::string& side, size_t n_train, size_t n_test) {
    r.dataset_id = corpus.digest;
    r.model_id = detector.ParameterDigest();
    r.config_digest = config.Digest();
    r.seed = config.seed;
    r.extra["evaluated_split"] = side;
    r.extra["split"] = {{"strategy", ToString(split.strategy)},
                        {"seed", split.seed},
                        {"train_outlets", std::vector<std::string>(train_outlets.begin(), train_outlets.end())},
                        {"test_outlets", std::vector<std::string>(test_outlets.begin(), test_outlets.end())},
                        {"outlet_overlap", overlap},
                        {"train_samples", n_train},
                        {"test_samples", n_test}};
  };
  out.report = Evaluate(out.classifier, test, &out.scores);
  finish(out.report, "test", train.size(), test.size());
  out.train_report = Evaluate(out.classifier, train, nullptr);
  finish(out.train_report, "train", train.size(), test.size());
  return out;
}

}  // namespace breathline
