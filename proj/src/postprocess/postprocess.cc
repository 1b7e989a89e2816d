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

#include <algorithm>
#include <cmath>
#include <vector>

#include "breathline/error.h"

namespace breathline {

void DetectionConfig::Validate() const {
  if (!(binarize_threshold > 0.0 && binarize_threshold < 1.0)) {
    throw ConfigError("detection: threshold must lie in (0, 1)");
  }
  if (!(step_ms > 0.0)) throw ConfigError("detection: step_ms must be > 0");
  if (!(min_breath_ms >= 0.0)) throw ConfigError("detection: min_breath_ms must be >= 0");
}

BreathIntervalSet SlicesToIntervals(std::span<const float> probabilities,
                                    const DetectionConfig& config) {
  return SlicesToIntervals(probabilities, config,
                           config.step_ms * static_cast<double>(probabilities.size()));
}

BreathIntervalSet SlicesToIntervals(std::span<const float> probabilities,
                                    const DetectionConfig& config,
                                    double total_duration_ms) {
  config.Validate();
  std::vector<Interval> runs;
  const size_t n = probabilities.size();
  size_t i = 0;
  while (i < n) {
    if (!(probabilities[i] >= config.binarize_threshold)) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < n && probabilities[j] >= config.binarize_threshold) ++j;
    const double start = config.step_ms * static_cast<double>(i);
    const double end = std::min(config.step_ms * static_cast<double>(j), total_duration_ms);
    if (end > start && end - start >= config.min_breath_ms) runs.push_back({start, end});
    i = j;
  }
  return BreathIntervalSet::FromIntervals(std::move(runs), total_duration_ms);
}

BreathIntervalSet DetectBreaths(const nn::BreathDetector<float>& model,
                                const AudioBuffer& audio,
                                const FeatureConfig& feature_config,
                                const DetectionConfig& detection_config) {
  const double step =
      feature_config.hop_length_ms * model.config().FramesPerStep();
  if (std::abs(step - detection_config.step_ms) > 1e-9) {
    throw ConfigError("detection: step_ms " + std::to_string(detection_config.step_ms) +
                      " does not match the detector step of " + std::to_string(step) +
                      " ms");
  }
  const auto features = ExtractFeatures(audio, feature_config);
  const auto probs = nn::PredictFile(model, features);
  return SlicesToIntervals(probs, detection_config, audio.duration_ms());
}

}  // namespace breathline
