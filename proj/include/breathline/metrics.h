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

#ifndef BREATHLINE_METRICS_H_
#define BREATHLINE_METRICS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace breathline {

struct Scored {
  double score = 0.0;
  bool positive = false;
};

std::vector<Scored> ZipScores(std::span<const float> scores,
                              std::span<const std::uint8_t> truths);

// Average precision: sum over descending score groups of
// (recall_k - recall_{k-1}) * precision_k, with tied scores entering
// together. Throws UndefinedMetricError unless both classes are present.
double Auprc(std::span<const Scored> scored);

// Equal error rate over thresholds t (accept iff score >= t): the point
// where the false-acceptance rate on negatives equals the false-rejection
// rate on positives, interpolated linearly between adjacent operating points.
double Eer(std::span<const Scored> scored);

struct ConfusionCounts {
  std::int64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

struct PointMetrics {
  ConfusionCounts counts;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when the denominator was zero and the value was reported as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

PointMetrics MetricsFromCounts(const ConfusionCounts& counts);
// Throws InputError on length mismatch or empty input.
PointMetrics ComputePointMetrics(std::span<const std::uint8_t> predictions,
                                 std::span<const std::uint8_t> truths);

nlohmann::json ToJson(const PointMetrics& m);

struct EvalReport {
  std::string dataset_id;
  std::string model_id;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string positive_class;
  std::string classifier;
  std::optional<double> auprc;  // unset when undefined for this classifier
  std::optional<double> eer;
  PointMetrics point;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json ToJson() const;
};

struct ScoreRow {
  std::string id;
  double score = 0.0;
  bool truth = false;
};

// `id,score,truth` with truth 1 for the positive class.
void WriteScoresCsv(std::ostream& out, const std::vector<ScoreRow>& rows);
std::vector<ScoreRow> ReadScoresCsv(std::istream& in);

}  // namespace breathline

#endif  // BREATHLINE_METRICS_H_
