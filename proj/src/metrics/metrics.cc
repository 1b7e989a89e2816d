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

#include "breathline/metrics.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>

#include "breathline/error.h"
#include "breathline/manifest.h"
#include "breathline/version.h"

namespace breathline {

namespace {

void RequireBothClasses(std::span<const Scored> scored, const char* metric,
                        std::int64_t* positives, std::int64_t* negatives) {
  *positives = 0;
  for (const auto& s : scored) *positives += s.positive ? 1 : 0;
  *negatives = static_cast<std::int64_t>(scored.size()) - *positives;
  if (*positives == 0 || *negatives == 0) {
    throw UndefinedMetricError(std::string(metric) +
                               " is undefined unless both classes are present");
  }
}

std::vector<Scored> SortedDescending(std::span<const Scored> scored) {
  std::vector<Scored> v(scored.begin(), scored.end());
  std::stable_sort(v.begin(), v.end(),
                   [](const Scored& a, const Scored& b) { return a.score > b.score; });
  return v;
}

}  // namespace

std::vector<Scored> ZipScores(std::span<const float> scores,
                              std::span<const std::uint8_t> truths) {
  if (scores.size() != truths.size()) {
    throw InputError("scores and truths differ in length (" +
                     std::to_string(scores.size()) + " vs " +
                     std::to_string(truths.size()) + ")");
  }
  std::vector<Scored> out(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) out[i] = {scores[i], truths[i] != 0};
  return out;
}

double Auprc(std::span<const Scored> scored) {
  std::int64_t positives, negatives;
  RequireBothClasses(scored, "AUPRC", &positives, &negatives);
  const auto v = SortedDescending(scored);
  double ap = 0.0;
  std::int64_t tp = 0, fp = 0, prev_tp = 0;
  for (size_t i = 0; i < v.size();) {
    size_t j = i;
    while (j < v.size() && v[j].score == v[i].score) {
      (v[j].positive ? tp : fp)++;
      ++j;
    }
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    ap += static_cast<double>(tp - prev_tp) * precision;
    prev_tp = tp;
    i = j;
  }
  return ap / static_cast<double>(positives);
}

double Eer(std::span<const Scored> scored) {
  std::int64_t positives, negatives;
  RequireBothClasses(scored, "EER", &positives, &negatives);
  // Walk thresholds from the lowest score upwards; at threshold t everything
  // with score < t is rejected.
  std::vector<Scored> v(scored.begin(), scored.end());
  std::stable_sort(v.begin(), v.end(),
                   [](const Scored& a, const Scored& b) { return a.score < b.score; });
  std::int64_t rejected_pos = 0, rejected_neg = 0;
  double prev_far = 1.0, prev_frr = 0.0;
  size_t i = 0;
  while (true) {
    const double far = static_cast<double>(negatives - rejected_neg) / negatives;
    const double frr = static_cast<double>(rejected_pos) / positives;
    const double d = far - frr;
    if (d <= 0.0) {
      const double prev_d = prev_far - prev_frr;
      if (d == 0.0 || prev_d == 0.0) return d == 0.0 ? far : prev_far;
      const double s = prev_d / (prev_d - d);
      return prev_far + s * (far - prev_far);
    }
    if (i >= v.size()) break;
    prev_far = far;
    prev_frr = frr;
    const double t = v[i].score;
    while (i < v.size() && v[i].score == t) {
      (v[i].positive ? rejected_pos : rejected_neg)++;
      ++i;
    }
  }
  return prev_far;  // unreachable: the last point has far 0, frr 1
}

PointMetrics MetricsFromCounts(const ConfusionCounts& c) {
  PointMetrics m;
  m.counts = c;
  const auto n = c.total();
  m.accuracy = n > 0 ? static_cast<double>(c.tp + c.tn) / static_cast<double>(n) : 0.0;
  if (c.tp + c.fp > 0) {
    m.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  } else {
    m.precision_undefined = true;
  }
  if (c.tp + c.fn > 0) {
    m.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  } else {
    m.recall_undefined = true;
  }
  const auto f1_den = 2 * c.tp + c.fp + c.fn;
  if (f1_den > 0) {
    m.f1 = static_cast<double>(2 * c.tp) / static_cast<double>(f1_den);
  } else {
    m.f1_undefined = true;
  }
  return m;
}

PointMetrics ComputePointMetrics(std::span<const std::uint8_t> predictions,
                                 std::span<const std::uint8_t> truths) {
  if (predictions.size() != truths.size()) {
    throw InputError("point metrics: " + std::to_string(predictions.size()) +
                     " predictions for " + std::to_string(truths.size()) + " truths");
  }
  if (predictions.empty()) throw InputError("point metrics: empty input");
  ConfusionCounts c;
  for (size_t i = 0; i < truths.size(); ++i) {
    const bool p = predictions[i] != 0, t = truths[i] != 0;
    if (p && t) ++c.tp;
    else if (p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return MetricsFromCounts(c);
}

nlohmann::json ToJson(const PointMetrics& m) {
  return {{"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1},
          {"precision_undefined", m.precision_undefined},
          {"recall_undefined", m.recall_undefined},
          {"f1_undefined", m.f1_undefined},
          {"tp", m.counts.tp},
          {"fp", m.counts.fp},
          {"tn", m.counts.tn},
          {"fn", m.counts.fn}};
}

nlohmann::json EvalReport::ToJson() const {
  nlohmann::json j = {{"tool_version", kToolVersion},
                      {"config_digest", config_digest},
                      {"seed", seed},
                      {"dataset_id", dataset_id},
                      {"model_id", model_id},
                      {"classifier", classifier},
                      {"positive_class", positive_class},
                      {"samples", point.counts.total()},
                      {"auprc", auprc ? nlohmann::json(*auprc) : nlohmann::json()},
                      {"eer", eer ? nlohmann::json(*eer) : nlohmann::json()},
                      {"metrics", breathline::ToJson(point)}};
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

void WriteScoresCsv(std::ostream& out, const std::vector<ScoreRow>& rows) {
  out << "id,score,truth\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%.17g,%d\n", r.score, r.truth ? 1 : 0);
    out << CsvEscape(r.id) << buf;
  }
}

std::vector<ScoreRow> ReadScoresCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "id,score,truth") {
    throw FormatError("scores csv: missing or unexpected header");
  }
  std::vector<ScoreRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 3 || (f[2] != "0" && f[2] != "1")) {
      throw FormatError("scores csv line " + std::to_string(line_no) + ": malformed row");
    }
    try {
      rows.push_back({f[0], std::stod(f[1]), f[2] == "1"});
    } catch (const std::exception&) {
      throw FormatError("scores csv line " + std::to_string(line_no) + ": bad score");
    }
  }
  return rows;
}

}  // namespace breathline
