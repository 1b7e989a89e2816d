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

#include <gtest/gtest.h>

#include "oracles/gradcheck.h"

namespace breathline::testing {
namespace {

constexpr double kTolerance = 1e-4;

TEST(GradientCheckTest, Conv1d) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_LT(ConvGradError(s), kTolerance);
}

TEST(GradientCheckTest, BatchNormThroughBatchStatistics) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_LT(BatchNormGradError(s), kTolerance);
}

TEST(GradientCheckTest, Relu) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_LT(ReluGradError(s), kTolerance);
}

TEST(GradientCheckTest, MaxPoolBothStrides) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    EXPECT_LT(MaxPoolGradError(s, 4), kTolerance);
    EXPECT_LT(MaxPoolGradError(s, 5), kTolerance);
  }
}

TEST(GradientCheckTest, DropoutWithFixedMask) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_LT(DropoutGradError(s), kTolerance);
}

TEST(GradientCheckTest, BiLstmBothDirections) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_LT(BiLstmGradError(s), kTolerance);
}

TEST(GradientCheckTest, DenseSigmoidBce) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_LT(DenseSigmoidGradError(s), kTolerance);
}

TEST(GradientCheckTest, ComposedDetector) {
  for (std::uint64_t s = 0; s < 5; ++s) EXPECT_LT(ModelGradError(s), kTolerance) << s;
}

}  // namespace
}  // namespace breathline::testing
