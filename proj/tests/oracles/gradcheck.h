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

#ifndef BREATHLINE_TESTS_ORACLES_GRADCHECK_H_
#define BREATHLINE_TESTS_ORACLES_GRADCHECK_H_

#include <cstdint>
#include <string>

namespace breathline::testing {

// Each check draws random inputs and parameters from `seed`, computes
// analytic gradients of a scalar objective, and compares every entry with a
// float64 central difference. Returns the largest
// |analytic - numeric| / max(1, |analytic|) over all checked entries.
double ConvGradError(std::uint64_t seed);
double BatchNormGradError(std::uint64_t seed);
double ReluGradError(std::uint64_t seed);
double MaxPoolGradError(std::uint64_t seed, int stride);
double DropoutGradError(std::uint64_t seed);
double BiLstmGradError(std::uint64_t seed);
double DenseSigmoidGradError(std::uint64_t seed);
// Tiny composed detector: H=4, input 1 x 40 x 6, BCE objective.
double ModelGradError(std::uint64_t seed);

}  // namespace breathline::testing

#endif  // BREATHLINE_TESTS_ORACLES_GRADCHECK_H_
