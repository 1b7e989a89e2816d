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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "breathline/error.h"
#include "breathline/random.h"
#include "oracles/oracles.h"

namespace breathline::testing {
namespace {

std::vector<Scored> RandomScored(Rng& rng, int n, int levels) {
  std::vector<Scored> v(n);
  for (auto& s : v) {
    s.positive = rng.Uniform() < 0.4;
    // Few distinct levels so that ties are common.
    const double base = static_cast<double>(rng.Below(levels)) / levels;
    s.score = base + (s.positive ? 0.15 : 0.0);
  }
  v[0].positive = true;
  v[1].positive = false;
  return v;
}

TEST(AuprcTest, HandComputedValues) {
  const std::vector<Scored> perfect = {{0.9, true}, {0.8, true}, {0.1, false}};
  EXPECT_DOUBLE_EQ(Auprc(perfect), 1.0);
  const std::vector<Scored> mixed = {{0.9, true}, {0.8, false}, {0.7, true}};
  EXPECT_DOUBLE_EQ(Auprc(mixed), 0.5 + 0.5 * 2.0 / 3.0);
  // A single tie group contributes once at its pooled precision.
  const std::vector<Scored> tied = {{0.5, true}, {0.5, false}, {0.5, false}, {0.5, true}};
  EXPECT_DOUBLE_EQ(Auprc(tied), 0.5);
}

TEST(AuprcTest, MatchesRecountingOracle) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = RandomScored(rng, 2 + static_cast<int>(rng.Below(80)), 1 + trial % 12);
    EXPECT_DOUBLE_EQ(Auprc(v), OracleAuprc(v)) << "trial " << trial;
  }
}

TEST(AuprcTest, InvariantUnderMonotoneRescoring) {
  Rng rng(18);
  auto v = RandomScored(rng, 60, 9);
  const double before = Auprc(v);
  for (auto& s : v) s.score = std::exp(3.0 * s.score) - 7.0;
  EXPECT_DOUBLE_EQ(Auprc(v), before);
}

TEST(EerTest, HandComputedValues) {
  EXPECT_DOUBLE_EQ(Eer(std::vector<Scored>{{0.9, true}, {0.1, false}}), 0.0);
  EXPECT_DOUBLE_EQ(Eer(std::vector<Scored>{{0.1, true}, {0.9, false}}), 1.0);
  EXPECT_DOUBLE_EQ(Eer(std::vector<Scored>{{0.5, true}, {0.5, false}}), 0.5);
  // Negatives at 0.2 and 0.6, positives at 0.4 and 0.8: FAR and FRR are
  // both 1/2 once the threshold passes 0.4.
  EXPECT_DOUBLE_EQ(
      Eer(std::vector<Scored>{{0.2, false}, {0.4, true}, {0.6, false}, {0.8, true}}), 0.5);
}

TEST(EerTest, MatchesPolylineOracle) {
  Rng rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = RandomScored(rng, 2 + static_cast<int>(rng.Below(80)), 1 + trial % 12);
    const double eer = Eer(v);
    EXPECT_NEAR(eer, OracleEer(v), 1e-12) << "trial " << trial;
    EXPECT_GE(eer, 0.0);
    EXPECT_LE(eer, 1.0);
  }
}

TEST(MetricsTest, SingleClassInputIsUndefined) {
  const std::vector<Scored> pos = {{0.3, true}, {0.9, true}};
  EXPECT_THROW(Auprc(pos), UndefinedMetricError);
  EXPECT_THROW(Eer(pos), UndefinedMetricError);
  EXPECT_THROW(Auprc(std::vector<Scored>{}), UndefinedMetricError);
}

TEST(PointMetricsTest, PerfectDetectionRow) {
  std::vector<std::uint8_t> truth(205, 1), pred(205, 1);
  truth.insert(truth.end(), 27, 0);
  pred.insert(pred.end(), 27, 0);
  const auto m = ComputePointMetrics(pred, truth);
  EXPECT_EQ(m.counts, (ConfusionCounts{205, 0, 27, 0}));
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(m.precision, 1.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.f1, 1.0);
  const auto j = ToJson(m);
  EXPECT_EQ(j["tp"], 205);
  EXPECT_EQ(j["tn"], 27);
}

TEST(PointMetricsTest, HandCountsAndZeroDenominators) {
  const auto m = MetricsFromCounts({3, 1, 4, 2});
  EXPECT_DOUBLE_EQ(m.accuracy, 0.7);
  EXPECT_DOUBLE_EQ(m.precision, 0.75);
  EXPECT_DOUBLE_EQ(m.recall, 0.6);
  EXPECT_DOUBLE_EQ(m.f1, 6.0 / 9.0);
  const auto none = MetricsFromCounts({0, 0, 5, 0});
  EXPECT_TRUE(none.precision_undefined);
  EXPECT_TRUE(none.recall_undefined);
  EXPECT_TRUE(none.f1_undefined);
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_DOUBLE_EQ(none.accuracy, 1.0);
  const std::vector<std::uint8_t> a = {1, 0};
  const std::vector<std::uint8_t> b = {1};
  EXPECT_THROW(ComputePointMetrics(a, b), InputError);
}

TEST(ScoresCsvTest, RoundTripIsExact) {
  const std::vector<ScoreRow> rows = {{"x#0", 0.1 + 0.2, true}, {"y,z#3", -1e-300, false}};
  std::ostringstream out;
  WriteScoresCsv(out, rows);
  std::istringstream in(out.str());
  const auto back = ReadScoresCsv(in);
  ASSERT_EQ(back.size(), 2u);
  for (size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back[i].id, rows[i].id);
    EXPECT_EQ(back[i].score, rows[i].score);
    EXPECT_EQ(back[i].truth, rows[i].truth);
  }
}

TEST(EvalReportTest, UndefinedScoresAreNull) {
  EvalReport r;
  r.classifier = "threshold";
  r.point = MetricsFromCounts({1, 0, 1, 0});
  const auto j = r.ToJson();
  EXPECT_TRUE(j["auprc"].is_null());
  EXPECT_TRUE(j["eer"].is_null());
  EXPECT_EQ(j["samples"], 2);
  r.auprc = 0.75;
  EXPECT_EQ(r.ToJson()["auprc"], 0.75);
}

}  // namespace
}  // namespace breathline::testing
