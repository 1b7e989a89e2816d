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


#include "breathline/postprocess.h"

#include <gtest/gtest.h>

#include <vector>

#include "breathline/error.h"
#include "breathline/random.h"

namespace breathline {
namespace {

TEST(SlicesToIntervalsTest, RunsBecomeStepAlignedIntervals) {
  const std::vector<float> p = {0.1f, 0.6f, 0.7f, 0.9f, 0.2f, 0.5f, 0.5f, 0.5f, 0.5f, 0.4f};
  const auto set = SlicesToIntervals(p, DetectionConfig{});
  ASSERT_EQ(set.size(), 2u);
  EXPECT_EQ(set.intervals()[0], (Interval{50.0, 200.0}));
  // The threshold itself counts as positive.
  EXPECT_EQ(set.intervals()[1], (Interval{250.0, 450.0}));
  EXPECT_DOUBLE_EQ(set.total_duration_ms(), 500.0);
}

TEST(SlicesToIntervalsTest, MinimumDurationBoundary) {
  DetectionConfig config;
  const std::vector<float> two = {0.9f, 0.9f, 0.1f};
  const std::vector<float> three = {0.9f, 0.9f, 0.9f, 0.1f};
  EXPECT_TRUE(SlicesToIntervals(two, config).empty());
  const auto kept = SlicesToIntervals(three, config);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_DOUBLE_EQ(kept.intervals()[0].duration_ms(), 150.0);
}

TEST(SlicesToIntervalsTest, ClipsToTheAudioBeforeFiltering) {
  const std::vector<float> p = {0.1f, 0.1f, 0.9f, 0.9f, 0.9f, 0.9f};
  // With 240 ms of audio the last run covers [100, 240) after clipping.
  EXPECT_TRUE(SlicesToIntervals(p, DetectionConfig{}, 240.0).empty());
  const auto kept = SlicesToIntervals(p, DetectionConfig{}, 260.0);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept.intervals()[0], (Interval{100.0, 260.0}));
}

TEST(SlicesToIntervalsTest, EmptyAndAllPositive) {
  EXPECT_TRUE(SlicesToIntervals(std::vector<float>{}, DetectionConfig{}).empty());
  const std::vector<float> all(10, 1.0f);
  const auto set = SlicesToIntervals(all, DetectionConfig{});
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.intervals()[0], (Interval{0.0, 500.0}));
}

TEST(SlicesToIntervalsTest, RandomSequencesKeepTheInvariants) {
  Rng rng(1);
  DetectionConfig config;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<float> p(rng.Below(60));
    for (auto& v : p) v = static_cast<float>(rng.Uniform());
    const auto set = SlicesToIntervals(p, config);
    double prev_end = -1.0;
    for (const auto& i : set.intervals()) {
      EXPECT_GE(i.duration_ms(), 150.0);
      EXPECT_GT(i.start_ms, prev_end);  // gaps of at least one step
      EXPECT_EQ(std::fmod(i.start_ms, 50.0), 0.0);
      EXPECT_EQ(std::fmod(i.end_ms, 50.0), 0.0);
      prev_end = i.end_ms;
    }
  }
}

TEST(DetectionConfigTest, Validation) {
  DetectionConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.binarize_threshold = 1.5;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.step_ms = 0.0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = {};
  c.min_breath_ms = -1.0;
  EXPECT_THROW(c.Validate(), ConfigError);
}

}  // namespace
}  // namespace breathline
