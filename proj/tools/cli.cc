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


#include "cli.h"

#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "breathline/audio.h"
#include "breathline/breath_stats.h"
#include "breathline/classifiers.h"
#include "breathline/digest.h"
#include "breathline/error.h"
#include "breathline/eval.h"
#include "breathline/fetch.h"
#include "breathline/manifest.h"
#include "breathline/metrics.h"
#include "breathline/nn/model.h"
#include "breathline/parallel.h"
#include "breathline/postprocess.h"
#include "breathline/synth.h"
#include "breathline/version.h"
#include "json.hpp"
#include "plots.h"

namespace breathline::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Installs the default logger for one invocation and restores the previous
// one afterwards. Timestamps go to <out>/run.log only.
class LogScope {
 public:
  LogScope() : previous_(spdlog::default_logger()) {
    level_ = spdlog::level::info;
    if (const char* env = std::getenv("BREATHLINE_LOG"); env != nullptr && *env != '\0') {
      const auto parsed = spdlog::level::from_str(env);
      if (parsed != spdlog::level::off || std::string(env) == "off") level_ = parsed;
    }
    auto console = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    console->set_pattern("%l: %v");
    logger_ = std::make_shared<spdlog::logger>("breathline", console);
    logger_->set_level(level_);
    spdlog::set_default_logger(logger_);
  }
  ~LogScope() {
    logger_->flush();
    spdlog::set_default_logger(previous_);
  }

  void AddRunLog(const fs::path& dir) {
    fs::create_directories(dir);
    auto file = std::make_shared<spdlog::sinks::basic_file_sink_mt>((dir / "run.log").string(),
                                                                    /*truncate=*/true);
    file->set_pattern("[%Y-%m-%d %H:%M:%S.%e] [%l] %v");
    logger_->sinks().push_back(file);
  }

 private:
  std::shared_ptr<spdlog::logger> previous_;
  std::shared_ptr<spdlog::logger> logger_;
  spdlog::level::level_enum level_;
};

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw Error("cannot write " + path.string());
}

void WriteJson(const fs::path& path, const json& j) { WriteText(path, j.dump(2) + "\n"); }

json Stamp(json j, const std::string& config_digest, const json& seed) {
  j["tool_version"] = kToolVersion;
  j["config_digest"] = config_digest;
  j["seed"] = seed;
  return j;
}

// Experiment settings shared by the subcommands. Precedence, lowest first:
// defaults, --config file, --set entries, dedicated flags.
struct Overrides {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<double> window_ms;
  std::optional<double> hop_ms;
  std::optional<int> n_mels;
  std::optional<double> threshold;
  std::optional<double> min_breath_ms;
  std::optional<std::string> classifier;
  std::optional<int> iterations;
  std::optional<int> epochs;
  std::optional<int> workers;
};

void AddConfigFlags(CLI::App* app, Overrides* o) {
  app->add_option("--config", o->config_path, "Experiment config file (key = value)")
      ->check(CLI::ExistingFile);
  app->add_option("--set", o->sets, "Override one config key: KEY=VALUE");
  app->add_option("--seed", o->seed, "Random seed");
  app->add_option("--window-ms", o->window_ms, "Analysis window length");
  app->add_option("--hop-ms", o->hop_ms, "Frame hop");
  app->add_option("--n-mels", o->n_mels, "Mel bands");
  app->add_option("--threshold", o->threshold, "Breath probability threshold");
  app->add_option("--min-breath-ms", o->min_breath_ms, "Shortest kept breath");
  app->add_option("--epochs", o->epochs, "Training epochs");
  app->add_option("--workers", o->workers, "Parallel workers");
}

ExperimentConfig BuildConfig(const Overrides& o) {
  ExperimentConfig c;
  if (!o.config_path.empty()) c = LoadExperimentConfig(o.config_path);
  for (const auto& entry : o.sets) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + entry + "'");
    c.Set(entry.substr(0, eq), entry.substr(eq + 1));
  }
  if (o.seed) c.seed = *o.seed;
  if (o.window_ms) c.window_ms = *o.window_ms;
  if (o.hop_ms) c.hop_ms = *o.hop_ms;
  if (o.n_mels) c.n_mels = *o.n_mels;
  if (o.threshold) c.threshold = *o.threshold;
  if (o.min_breath_ms) c.min_breath_ms = *o.min_breath_ms;
  if (o.classifier) c.classifier = *o.classifier;
  if (o.iterations) c.iterations = *o.iterations;
  if (o.epochs) c.epochs = *o.epochs;
  if (o.workers) c.workers = *o.workers;
  c.Validate();
  return c;
}

void SaveConfig(const fs::path& dir, const ExperimentConfig& config) {
  WriteText(dir / "config.txt", config.Canonical());
}

std::string ScoresCsv(const std::vector<ScoreRow>& rows) {
  std::ostringstream out;
  WriteScoresCsv(out, rows);
  return out.str();
}

std::string StatsCsv(const std::vector<StatsRow>& rows) {
  std::ostringstream out;
  WriteStatsCsv(out, rows);
  return out.str();
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string kind = "news";
  int real = 20;
  int fake = 20;
  int outlets = 2;
  int podcasts = 8;
  int speakers = 4;
  std::optional<double> min_bpm;
  std::optional<double> max_bpm;
  std::optional<double> min_duration_ms;
  std::optional<double> max_duration_ms;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;
};

int RunSynth(const SynthArgs& a, LogScope* log) {
  std::ostringstream canon;
  canon.precision(17);
  std::vector<SynthesisItem> plan;
  if (a.kind == "news") {
    NewsPlanOptions o;
    o.outlets_per_class = a.outlets;
    if (a.min_bpm) o.min_bpm = *a.min_bpm;
    if (a.max_bpm) o.max_bpm = *a.max_bpm;
    if (a.min_duration_ms) o.min_duration_ms = *a.min_duration_ms;
    if (a.max_duration_ms) o.max_duration_ms = *a.max_duration_ms;
    canon << "kind=news\nreal=" << a.real << "\nfake=" << a.fake << "\noutlets=" << o.outlets_per_class
          << "\nmin_bpm=" << o.min_bpm << "\nmax_bpm=" << o.max_bpm
          << "\nmin_duration_ms=" << o.min_duration_ms << "\nmax_duration_ms=" << o.max_duration_ms
          << "\nseed=" << a.seed << "\n";
    plan = NewsCorpusPlan(a.real, a.fake, a.seed, o);
  } else {
    PodcastPlanOptions o;
    if (a.min_bpm) o.min_bpm = *a.min_bpm;
    if (a.max_bpm) o.max_bpm = *a.max_bpm;
    if (a.min_duration_ms) o.duration_ms = *a.min_duration_ms;
    canon << "kind=podcast\npodcasts=" << a.podcasts << "\nspeakers=" << a.speakers
          << "\nmin_bpm=" << o.min_bpm << "\nmax_bpm=" << o.max_bpm
          << "\nduration_ms=" << o.duration_ms << "\nseed=" << a.seed << "\n";
    plan = PodcastCorpusPlan(a.podcasts, a.speakers, a.seed, o);
  }
  for (const auto& item : plan) {
    try {
      item.config.Validate();
    } catch (const ConfigError& e) {
      throw ConfigError("item " + item.id + ": " + e.what());
    }
  }
  const fs::path out(a.out);
  log->AddRunLog(out);
  spdlog::info("synthesizing {} {} items into {}", plan.size(), a.kind, out.string());
  const Manifest manifest = WriteCorpus(plan, out, a.workers);
  int n_real = 0, n_fake = 0;
  for (const auto& e : manifest.entries) {
    n_real += e.label == SampleLabel::kReal;
    n_fake += e.label == SampleLabel::kFake;
  }
  const std::string digest = Sha256Hex(canon.str());
  WriteJson(out / "corpus.json",
            Stamp({{"kind", a.kind},
                   {"items", manifest.entries.size()},
                   {"real", n_real},
                   {"fake", n_fake},
                   {"manifest_sha256", Sha256OfFile((out / "manifest.csv").string())}},
                  digest, a.seed));
  spdlog::info("wrote {} real and {} fake items", n_real, n_fake);
  return kExitOk;
}

// --- train-breath ----------------------------------------------------------

struct TrainArgs {
  std::string manifest;
  std::string out;
};

int RunTrainBreath(const TrainArgs& a, const Overrides& o, LogScope* log) {
  const ExperimentConfig config = BuildConfig(o);
  const fs::path out(a.out);
  log->AddRunLog(out);
  const Manifest manifest = ReadManifest(a.manifest);
  spdlog::info("extracting features for {} items", manifest.entries.size());
  const CorpusIndex corpus = BuildAnnotatedIndex(manifest, config.features(), config.workers);
  nn::TrainResult result;
  const auto model = TrainDetector(corpus, config, &result);
  for (size_t e = 0; e < result.train_loss.size(); ++e) {
    spdlog::info("epoch {} loss {:.6f}", e + 1, result.train_loss[e]);
  }
  SaveModel(model, out / "model.bin");
  SaveConfig(out, config);
  WriteJson(out / "train_report.json",
            Stamp({{"dataset_id", corpus.digest},
                   {"items", corpus.items.size()},
                   {"epochs", result.train_loss.size()},
                   {"train_loss", result.train_loss},
                   {"model_id", model.ParameterDigest()},
                   {"model_sha256", Sha256OfFile((out / "model.bin").string())}},
                  config.Digest(), config.seed));
  spdlog::info("model written to {}", (out / "model.bin").string());
  return kExitOk;
}

// --- detect ----------------------------------------------------------------

struct DetectArgs {
  std::string model;
  std::string manifest;
  std::vector<std::string> files;
  std::string out;
};

struct DetectInput {
  std::string id;
  SampleLabel label = SampleLabel::kUnlabeled;
  fs::path path;
};

struct DetectOutcome {
  std::string error;
  std::optional<BreathStats> stats;
  size_t breaths = 0;
};

int RunDetect(const DetectArgs& a, const Overrides& o, LogScope* log) {
  const ExperimentConfig config = BuildConfig(o);
  if (a.manifest.empty() == a.files.empty()) {
    throw ConfigError("detect: pass either --manifest or input files");
  }
  std::vector<DetectInput> inputs;
  if (!a.manifest.empty()) {
    const Manifest manifest = ReadManifest(a.manifest);
    for (const auto& e : manifest.entries) {
      inputs.push_back({e.id, e.label, IsUrl(e.source) ? fs::path(e.source)
                                                       : manifest.ResolvePath(e.source)});
    }
  } else {
    for (const auto& f : a.files) inputs.push_back({fs::path(f).stem().string(), {}, f});
  }
  std::sort(inputs.begin(), inputs.end(),
            [](const DetectInput& x, const DetectInput& y) { return x.id < y.id; });
  for (size_t i = 1; i < inputs.size(); ++i) {
    if (inputs[i].id == inputs[i - 1].id) throw ConfigError("detect: duplicate id " + inputs[i].id);
  }

  const auto model = nn::LoadModel(a.model);
  const FeatureConfig features = config.features();
  const DetectionConfig detection = config.detection();
  if (features.num_features() != model.config().n_features) {
    throw ConfigError("detect: model expects " + std::to_string(model.config().n_features) +
                      " features per frame, config gives " +
                      std::to_string(features.num_features()));
  }
  const fs::path out(a.out);
  log->AddRunLog(out);
  fs::create_directories(out / "intervals");
  std::vector<DetectOutcome> outcomes(inputs.size());
  ParallelFor(inputs.size(), config.workers, [&](size_t i) {
    auto& r = outcomes[i];
    try {
      const AudioBuffer audio = LoadCanonical(inputs[i].path.string());
      const auto breaths = DetectBreaths(model, audio, features, detection);
      const BreathStats stats = ComputeStats(breaths, audio.duration_ms());
      WriteAnnotations(out / "intervals" / (inputs[i].id + ".tsv"), breaths);
      r.stats = stats;
      r.breaths = breaths.size();
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });

  std::vector<StatsRow> rows;
  json files = json::array();
  int failed = 0;
  for (size_t i = 0; i < inputs.size(); ++i) {
    const auto& r = outcomes[i];
    json f = {{"id", inputs[i].id}};
    if (r.stats) {
      rows.push_back({inputs[i].id, inputs[i].label, *r.stats});
      f["status"] = "ok";
      f["breaths"] = r.breaths;
    } else {
      ++failed;
      spdlog::error("{}: {}", inputs[i].id, r.error);
      f["status"] = "failed";
      f["error"] = r.error;
    }
    files.push_back(std::move(f));
  }
  WriteText(out / "stats.csv", StatsCsv(rows));
  SaveConfig(out, config);
  WriteJson(out / "detect_report.json",
            Stamp({{"model_id", model.ParameterDigest()},
                   {"files", files},
                   {"succeeded", rows.size()},
                   {"failed", failed}},
                  config.Digest(), config.seed));
  spdlog::info("{} files processed, {} failed", inputs.size(), failed);
  return failed == 0 ? kExitOk : kExitFailure;
}

// --- evaluate --------------------------------------------------------------

struct EvalArgs {
  std::string experiment;
  std::string manifest;
  std::string out;
  std::string model;
  std::string detector_manifest;
};

std::string SafeName(std::string name) {
  for (char& c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }
  return name;
}

void WriteGeneralization(const fs::path& out, const GeneralizationResult& result,
                         const CorpusIndex& corpus, const ExperimentConfig& config) {
  std::ostringstream auprc_csv;
  auprc_csv.precision(17);
  auprc_csv << "fold,auprc\n";
  for (const auto& fold : result.folds) {
    const std::string name = SafeName(fold.name);
    json j = fold.ToJson();
    j["experiment"] = result.experiment;
    j["dataset_id"] = corpus.digest;
    WriteJson(out / "folds" / (name + ".json"), Stamp(j, config.Digest(), config.seed));
    WriteText(out / "scores" / (name + ".csv"), ScoresCsv(fold.scores));
    auprc_csv << CsvEscape(fold.name) << ',' << fold.auprc << '\n';
    spdlog::info("{} {}: AUPRC {:.4f}", result.experiment, fold.name, fold.auprc);
  }
  json agg = result.ToJson();
  agg["dataset_id"] = corpus.digest;
  WriteJson(out / "aggregate.json", Stamp(agg, config.Digest(), config.seed));
  WriteText(out / "auprc.csv", auprc_csv.str());
  std::vector<double> values;
  for (const auto& f : result.folds) values.push_back(f.auprc);
  WriteText(out / "auprc_boxplot.svg", BoxPlotSvg({{result.experiment, values}}, "AUPRC"));
  spdlog::info("{} mean AUPRC {:.4f} (std {:.4f}) over {} folds", result.experiment,
               result.mean, result.stddev, result.folds.size());
}

int RunEvaluate(const EvalArgs& a, const Overrides& o, LogScope* log) {
  ExperimentConfig config = BuildConfig(o);
  config.experiment = a.experiment;
  config.Validate();
  const fs::path out(a.out);
  log->AddRunLog(out);
  const Manifest manifest = ReadManifest(a.manifest);

  if (a.experiment != "pipeline") {
    const CorpusIndex corpus =
        BuildAnnotatedIndex(manifest, config.features(), config.workers);
    GeneralizationResult result;
    if (a.experiment == "test1") {
      result = RunTest1(corpus, config, config.iterations);
    } else if (a.experiment == "test2") {
      result = RunTest2(corpus, config);
    } else {
      result = RunTest3(corpus, config);
    }
    SaveConfig(out, config);
    WriteGeneralization(out, result, corpus, config);
    return kExitOk;
  }

  if (a.model.empty() == a.detector_manifest.empty()) {
    throw ConfigError("evaluate pipeline: pass exactly one of --model or --detector-manifest");
  }
  const ClassifierKind kind = ParseClassifierKind(config.classifier);
  const CorpusIndex corpus = BuildLabeledIndex(manifest);
  std::optional<nn::BreathDetector<float>> detector;
  if (!a.model.empty()) {
    detector = nn::LoadModel(a.model);
  } else {
    const CorpusIndex podcasts = BuildAnnotatedIndex(ReadManifest(a.detector_manifest),
                                                     config.features(), config.workers);
    spdlog::info("training detector on {} annotated items", podcasts.items.size());
    detector = TrainDetector(podcasts, config);
    SaveModel(*detector, out / "detector.bin");
  }
  const SplitPlan split = OutletDisjointSplit(corpus, config.seed);
  const PipelineResult result = RunPipelineEval(*detector, corpus, split, kind, config);
  SaveConfig(out, config);
  WriteJson(out / "report.json", result.report.ToJson());
  WriteJson(out / "train_report.json", result.train_report.ToJson());
  WriteText(out / "scores.csv", ScoresCsv(result.scores));
  WriteText(out / "stats.csv", StatsCsv(result.stats));
  WriteText(out / "stats_scatter.svg", StatsScatterSvg(result.stats));
  SaveClassifier(result.classifier,
                 out / (kind == ClassifierKind::kSvc ? "classifier.bin" : "classifier.json"));
  const auto& r = result.report;
  spdlog::info("test accuracy {:.4f} over {} samples", r.point.accuracy,
               r.point.counts.total());
  if (r.auprc) spdlog::info("test AUPRC {:.4f} EER {:.4f}", *r.auprc, r.eer.value_or(-1.0));
  return kExitOk;
}

// --- fetch -----------------------------------------------------------------

struct FetchArgs {
  std::string manifest;
  std::string out;
  int workers = 1;
  int timeout = 30;
};

int RunFetch(const FetchArgs& a, LogScope* log) {
  const fs::path out(a.out);
  log->AddRunLog(out);
  FetchOptions options;
  options.workers = a.workers;
  options.timeout_seconds = a.timeout;
  const auto records = FetchManifestSources(ReadManifest(a.manifest), out, options);
  int failed = 0;
  for (const auto& r : records) {
    if (!r.ok()) {
      ++failed;
      spdlog::error("{}: {}", r.id, r.status);
    }
  }
  const std::string digest = Sha256Hex("timeout_seconds=" + std::to_string(a.timeout) + "\n");
  WriteJson(out / "fetch_report.json",
            Stamp({{"records", json::parse(FetchReportJson(records))}}, digest, nullptr));
  spdlog::info("{} sources fetched, {} failed", records.size() - failed, failed);
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int Run(int argc, const char* const* argv) {
  LogScope log;
  CLI::App app{"Breath-based detection of synthetic speech", "breathline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic corpus with annotations");
  synth_cmd->add_option("--kind", synth.kind, "Corpus style")
      ->check(CLI::IsMember({"news", "podcast"}));
  synth_cmd->add_option("--real", synth.real, "Real-style news items")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--fake", synth.fake, "Fake-style news items")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--outlets", synth.outlets, "Outlets per class")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--podcasts", synth.podcasts, "Podcast items")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--speakers", synth.speakers, "Podcast speakers")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--min-bpm", synth.min_bpm, "Lowest breath rate of real items");
  synth_cmd->add_option("--max-bpm", synth.max_bpm, "Highest breath rate of real items");
  synth_cmd->add_option("--min-duration-ms", synth.min_duration_ms,
                        "Shortest item (podcast: every item)");
  synth_cmd->add_option("--max-duration-ms", synth.max_duration_ms, "Longest news item");
  synth_cmd->add_option("--seed", synth.seed, "Random seed");
  synth_cmd->add_option("--workers", synth.workers, "Parallel workers")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  TrainArgs train;
  Overrides train_o;
  auto* train_cmd = app.add_subcommand("train-breath", "Train the breath detector");
  train_cmd->add_option("--manifest", train.manifest, "Annotated corpus manifest")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train.out, "Output directory")->required();
  AddConfigFlags(train_cmd, &train_o);

  DetectArgs detect;
  Overrides detect_o;
  auto* detect_cmd = app.add_subcommand("detect", "Detect breaths and compute statistics");
  detect_cmd->add_option("--model", detect.model, "Detector model file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* detect_manifest = detect_cmd->add_option("--manifest", detect.manifest, "Input manifest")
                              ->check(CLI::ExistingFile);
  auto* detect_files = detect_cmd->add_option("files", detect.files, "Input WAV files");
  detect_manifest->excludes(detect_files);
  detect_cmd->add_option("--out", detect.out, "Output directory")->required();
  AddConfigFlags(detect_cmd, &detect_o);

  EvalArgs eval;
  Overrides eval_o;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run an experiment");
  eval_cmd->add_option("--experiment", eval.experiment, "Experiment")
      ->required()
      ->check(CLI::IsMember({"test1", "test2", "test3", "pipeline"}));
  eval_cmd->add_option("--manifest", eval.manifest, "Corpus manifest")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", eval.out, "Results directory")->required();
  eval_cmd->add_option("--model", eval.model, "Detector model (pipeline)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--detector-manifest", eval.detector_manifest,
                       "Annotated corpus to train the detector on (pipeline)")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--iterations", eval_o.iterations, "Test 1 iterations");
  eval_cmd->add_option("--classifier", eval_o.classifier, "Sample classifier (pipeline)")
      ->check(CLI::IsMember({"threshold", "svc", "tree"}));
  AddConfigFlags(eval_cmd, &eval_o);

  FetchArgs fetch;
  auto* fetch_cmd = app.add_subcommand("fetch", "Download manifest sources");
  fetch_cmd->add_option("--manifest", fetch.manifest, "Manifest with URL sources")
      ->required()
      ->check(CLI::ExistingFile);
  fetch_cmd->add_option("--out", fetch.out, "Download directory")->required();
  fetch_cmd->add_option("--workers", fetch.workers, "Parallel downloads")
      ->check(CLI::PositiveNumber);
  fetch_cmd->add_option("--timeout", fetch.timeout, "Per-request timeout in seconds")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth_cmd) return RunSynth(synth, &log);
    if (*train_cmd) return RunTrainBreath(train, train_o, &log);
    if (*detect_cmd) return RunDetect(detect, detect_o, &log);
    if (*eval_cmd) return RunEvaluate(eval, eval_o, &log);
    return RunFetch(fetch, &log);
  } catch (const ConfigError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitFailure;
  }
}

int Run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return Run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace breathline::cli
