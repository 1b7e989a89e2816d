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


// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// --only N runs a single one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "breathline/classifiers.h"
#include "breathline/digest.h"
#include "breathline/eval.h"
#include "breathline/features.h"
#include "breathline/metrics.h"
#include "breathline/postprocess.h"
#include "breathline/random.h"
#include "breathline/synth.h"
#include "cli.h"
#include "oracles/gradcheck.h"
#include "oracles/oracles.h"
#include "testing/test_util.h"

namespace breathline::testing {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// 1. Analytic gradients against central differences.
Outcome Gradients() {
  const std::vector<std::pair<std::string, std::function<double(std::uint64_t)>>> checks = {
      {"conv1d", ConvGradError},
      {"batchnorm", BatchNormGradError},
      {"maxpool4", [](std::uint64_t s) { return MaxPoolGradError(s, 4); }},
      {"maxpool5", [](std::uint64_t s) { return MaxPoolGradError(s, 5); }},
      {"dropout", DropoutGradError},
      {"bilstm", BiLstmGradError},
      {"dense_sigmoid", DenseSigmoidGradError},
      {"model", ModelGradError}};
  Outcome out{true, ""};
  for (const auto& [name, check] : checks) {
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) worst = std::max(worst, check(seed));
    out.pass = out.pass && worst < 1e-4;
    if (!out.detail.empty()) out.detail += ", ";
    out.detail += Format("%s %.1e", name.c_str(), worst);
  }
  return out;
}

double WorstRelative(const std::vector<double>& got, const std::vector<double>& want) {
  if (got.size() != want.size()) return INFINITY;
  double worst = 0.0;
  for (size_t i = 0; i < got.size(); ++i) {
    worst = std::max(worst, std::abs(got[i] - want[i]) / std::max(1e-12, std::abs(want[i])));
  }
  return worst;
}

// 2. Features against brute-force definitions.
Outcome Features() {
  const FeatureConfig config;
  Rng rng(2);
  double zcr = 0.0, rmse = 0.0, mel = 0.0;
  for (int i = 0; i < 50; ++i) {
    auto audio = Noise(rng.NextU64(), kCanonicalSampleRate, rng.Uniform(1e-3, 0.9));
    // Mix in a tone and a silent stretch on some buffers.
    const double hz = rng.Uniform(50.0, 7000.0);
    for (size_t n = 0; n < audio.samples.size(); ++n) {
      audio.samples[n] += static_cast<float>(0.05 * std::sin(2.0 * M_PI * hz * n / 16000.0));
    }
    if (i % 3 == 0) {
      const size_t from = rng.Below(12000);
      std::fill(audio.samples.begin() + from, audio.samples.begin() + from + 2000, 0.0f);
    }
    zcr = std::max(zcr, WorstRelative(Zcr(audio, config), OracleZcr(audio, config)));
    rmse = std::max(rmse, WorstRelative(RmseDb(audio, config), OracleRmseDb(audio, config)));
    mel = std::max(mel, WorstRelative(MelSpectrogramDb(audio, config), OracleMelDb(audio, config)));
  }
  int frame_mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const auto n = static_cast<std::int64_t>(rng.Below(20 * kCanonicalSampleRate));
    if (NumFrames(n, kCanonicalSampleRate, config) !=
        OracleNumFrames(n, kCanonicalSampleRate, config.hop_length_ms)) {
      ++frame_mismatches;
    }
  }
  const bool pass = zcr < 1e-6 && rmse < 1e-6 && mel < 1e-6 && frame_mismatches == 0;
  return {pass, Format("zcr %.1e rmse %.1e mel %.1e frame-count mismatches %d", zcr, rmse, mel,
                       frame_mismatches)};
}

// 3. AUPRC/EER against threshold enumeration, plus the perfect test row.
Outcome Metrics() {
  Rng rng(3);
  int auprc_mismatch = 0;
  double eer_worst = 0.0;
  for (int c = 0; c < 1000; ++c) {
    const int n = 2 + static_cast<int>(rng.Below(9));
    const int levels = 1 + static_cast<int>(rng.Below(10));
    std::vector<Scored> v(n);
    for (auto& s : v) {
      s.score = static_cast<double>(rng.Below(levels)) / levels;
      s.positive = rng.Uniform() < 0.5;
    }
    v[0].positive = true;
    v[1].positive = false;
    rng.Shuffle(v);
    auprc_mismatch += Auprc(v) != OracleAuprc(v);
    eer_worst = std::max(eer_worst, std::abs(Eer(v) - OracleEer(v)));
  }
  const auto m = MetricsFromCounts({205, 0, 27, 0});
  const bool row = m.accuracy == 1.0 && m.f1 == 1.0 && m.precision == 1.0 && m.recall == 1.0;
  return {auprc_mismatch == 0 && eer_worst <= 1e-9 && row,
          Format("AUPRC mismatches %d/1000, EER worst %.1e, table row %s", auprc_mismatch,
                 eer_worst, row ? "exact" : "wrong")};
}

// 4. SMO dual solution against a projected-gradient QP oracle.
Outcome Svc() {
  Rng rng(4);
  double gap = 0.0, kkt = 0.0;
  for (int d = 0; d < 20; ++d) {
    const int n = 2 + static_cast<int>(rng.Below(7));
    SvcModel shape;
    shape.gamma = 1.0 / kNumStats;
    std::vector<StatsVector> x(n);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (auto& v : x[i]) v = rng.Gaussian();
      y[i] = i == 0 ? 1.0 : i == 1 ? -1.0 : (rng.Uniform() < 0.5 ? 1.0 : -1.0);
    }
    Eigen::MatrixXd kernel(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) kernel(i, j) = shape.Kernel(x[i], x[j]);
    const SvcConfig config;
    const auto sol =
        SolveSvcDual(kernel, y, config.c, config.tolerance, config.max_iterations);
    const auto oracle = OracleSvcDual(kernel, y, config.c, 50000);
    gap = std::max(gap, std::abs(sol.objective - DualObjective(kernel, y, oracle)));
    kkt = std::max(kkt, DualKktViolation(kernel, y, sol.alpha, config.c));
  }
  return {gap < 1e-5 && kkt < 1e-6,
          Format("worst objective gap %.1e, worst KKT residual %.1e", gap, kkt)};
}

ExperimentConfig Full() {
  ExperimentConfig c;
  c.seed = 11;
  c.epochs = 30;
  return c;
}

// 5. Detector + classifiers on an outlet-disjoint synthetic news split.
Outcome Pipeline(const fs::path& work) {
  const auto config = Full();
  PodcastPlanOptions pods;
  pods.duration_ms = 60000.0;
  const auto podcasts = BuildAnnotatedIndex(
      WriteCorpus(PodcastCorpusPlan(16, 16, 1, pods), work / "podcasts", 2),
      config.features());
  const auto detector = TrainDetector(podcasts, config);
  const auto news = BuildLabeledIndex(WriteCorpus(NewsCorpusPlan(40, 40, 5), work / "news", 2));
  const auto split = OutletDisjointSplit(news, config.seed);
  const auto svc = RunPipelineEval(detector, news, split, ClassifierKind::kSvc, config);
  const auto thr = RunPipelineEval(detector, news, split, ClassifierKind::kThreshold, config);
  const double auprc = svc.report.auprc.value_or(-1.0);
  const double eer = svc.report.eer.value_or(-1.0);
  const double acc = thr.report.point.accuracy;
  return {auprc == 1.0 && eer == 0.0 && acc >= 0.95,
          Format("svc AUPRC %.6f EER %.6f, threshold accuracy %.4f on %zu test items", auprc,
                 eer, acc, split.test_ids.size())};
}

// 6. Generalization ordering on an 8-podcast, 4-speaker corpus.
Outcome Generalization(const fs::path& work) {
  const auto config = Full();
  const auto corpus = BuildAnnotatedIndex(
      WriteCorpus(PodcastCorpusPlan(8, 4, 3), work / "podcasts", 2), config.features());
  const auto t1 = RunTest1(corpus, config, 10);
  const auto t2 = RunTest2(corpus, config);
  const auto t3 = RunTest3(corpus, config);
  return {t1.mean >= t2.mean && t2.mean >= t3.mean && t1.mean >= 0.9,
          Format("test1 %.4f±%.4f test2 %.4f±%.4f test3 %.4f±%.4f", t1.mean, t1.stddev,
                 t2.mean, t2.stddev, t3.mean, t3.stddev)};
}

// 7. Post-processing invariants on random probability sequences.
Outcome Postprocess() {
  const DetectionConfig config;
  Rng rng(7);
  int violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<float> p(rng.Below(120));
    // Sticky random walk so that runs of every length appear.
    bool on = rng.Uniform() < 0.5;
    for (auto& v : p) {
      if (rng.Uniform() < 0.3) on = !on;
      v = static_cast<float>(on ? rng.Uniform(0.5, 1.0) : rng.Uniform(0.0, 0.5));
    }
    const auto set = SlicesToIntervals(p, config);
    double prev_end = -1.0;
    for (const auto& iv : set.intervals()) {
      const bool ok = iv.duration_ms() >= 150.0 && std::fmod(iv.start_ms, 50.0) == 0.0 &&
                      std::fmod(iv.end_ms, 50.0) == 0.0 && iv.start_ms > prev_end;
      violations += !ok;
      prev_end = iv.end_ms;
    }
  }
  const std::vector<float> three = {0.1f, 0.7f, 0.8f, 0.9f, 0.2f};
  const auto kept = SlicesToIntervals(three, config);
  const bool boundary = kept.size() == 1 && kept.intervals()[0] == Interval{50.0, 200.0};
  return {violations == 0 && boundary,
          Format("%d violations in 10000 sequences, 150 ms run %s", violations,
                 boundary ? "kept" : "dropped")};
}

std::string TreeDigest(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file() && e.path().filename() != "run.log") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    all += fs::relative(f, root).string() + '\0' + Sha256OfFile(f.string()) + '\n';
  }
  return Sha256Hex(all);
}

// 8. Two full runs of the tool with the same seeds produce identical bytes.
Outcome Determinism(const fs::path& work) {
  auto run = [&](const std::string& tag, const std::string& workers) {
    const fs::path root = work / tag;
    const std::string pods = (root / "pods").string(), news = (root / "news").string();
    const std::string model = (root / "model").string();
    const std::vector<std::vector<std::string>> steps = {
        {"synth", "--kind", "podcast", "--podcasts", "4", "--speakers", "2",
         "--min-duration-ms", "20000", "--seed", "8", "--workers", workers, "--out", pods},
        {"synth", "--real", "6", "--fake", "6", "--min-duration-ms", "15000",
         "--max-duration-ms", "18000", "--seed", "9", "--workers", workers, "--out", news},
        {"train-breath", "--manifest", pods + "/manifest.csv", "--epochs", "3", "--seed", "1",
         "--workers", workers, "--out", model},
        {"evaluate", "--experiment", "test2", "--epochs", "2", "--seed", "1", "--workers",
         workers, "--manifest", pods + "/manifest.csv", "--out", (root / "test2").string()},
        {"evaluate", "--experiment", "pipeline", "--classifier", "svc", "--model",
         model + "/model.bin", "--seed", "1", "--manifest", news + "/manifest.csv", "--out",
         (root / "pipeline").string()},
        {"detect", "--model", model + "/model.bin", "--manifest", news + "/manifest.csv",
         "--workers", workers, "--out", (root / "detect").string()}};
    for (auto args : steps) {
      args.insert(args.begin(), "breathline");
      if (cli::Run(args) != cli::kExitOk) return std::string("failed: ") + args[1];
    }
    return TreeDigest(root);
  };
  const std::string a = run("a", "1"), b = run("b", "1"), c = run("c", "2");
  return {a == b && b == c && a.size() == 64,
          Format("run digests %.12s %.12s %.12s (last with 2 workers)", a.c_str(), b.c_str(),
                 c.c_str())};
}

}  // namespace
}  // namespace breathline::testing

int main(int argc, char** argv) {
  using namespace breathline::testing;
  CLI::App app("Acceptance criteria");
  int only = 0;
  app.add_option("--only", only, "Run a single criterion")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  ScopedTempDir work("acceptance");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"gradient correctness", Gradients},
      {"feature oracle equivalence", Features},
      {"metric oracle equivalence", Metrics},
      {"svc dual solver", Svc},
      {"end-to-end synthetic pipeline", [&] { return Pipeline(work.path() / "c5"); }},
      {"generalization ordering", [&] { return Generalization(work.path() / "c6"); }},
      {"post-processing properties", Postprocess},
      {"determinism", [&] { return Determinism(work.path() / "c8"); }}};
  bool all = true;
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<size_t>(only) != i + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %zu (%s): %s - %s [%.1fs]\n", i + 1, criteria[i].first.c_str(),
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
