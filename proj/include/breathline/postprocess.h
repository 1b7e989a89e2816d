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

#ifndef BREATHLINE_POSTPROCESS_H_
#define BREATHLINE_POSTPROCESS_H_

#include <span>

#include "breathline/annotations.h"
#include "breathline/audio.h"
#include "breathline/features.h"
#include "breathline/nn/model.h"

namespace breathline {

struct DetectionConfig {
  double binarize_threshold = 0.5;
  double step_ms = 50.0;
  // Runs shorter than this are dropped; a run of exactly this length stays.
  double min_breath_ms = 150.0;

  void Validate() const;
};

// Steps with p >= threshold are positive; each maximal positive run
// [i, i + k) becomes the interval [i * step_ms, (i + k) * step_ms).
BreathIntervalSet SlicesToIntervals(std::span<const float> probabilities,
                                    const DetectionConfig& config);

// As above, but intervals are clipped to [0, total_duration_ms] before the
// minimum-duration filter.
BreathIntervalSet SlicesToIntervals(std::span<const float> probabilities,
                                    const DetectionConfig& config,
                                    double total_duration_ms);

// Features -> detector -> intervals. The detection step must equal the
// detector's output step (frames per step times the hop).
BreathIntervalSet DetectBreaths(const nn::BreathDetector<float>& model,
                                const AudioBuffer& audio,
                                const FeatureConfig& feature_config,
                                const DetectionConfig& detection_config);

}  // namespace breathline

#endif  // BREATHLINE_POSTPROCESS_H_
