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

#ifndef BREATHLINE_ANNOTATIONS_H_
#define BREATHLINE_ANNOTATIONS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "breathline/features.h"

namespace breathline {

// Half-open time span [start_ms, end_ms).
struct Interval {
  double start_ms = 0.0;
  double end_ms = 0.0;

  double duration_ms() const { return end_ms - start_ms; }
  bool operator==(const Interval&) const = default;
};

// Sorted, non-overlapping breath intervals inside [0, total_duration_ms].
// Touching intervals (gap exactly 0) are merged on construction.
class BreathIntervalSet {
 public:
  BreathIntervalSet() = default;
  explicit BreathIntervalSet(double total_duration_ms)
      : total_duration_ms_(total_duration_ms) {}

  // Sorts, validates and merges. Throws ValidationError on reversed, empty,
  // out-of-range or overlapping intervals.
  static BreathIntervalSet FromIntervals(std::vector<Interval> intervals,
                                         double total_duration_ms);

  const std::vector<Interval>& intervals() const { return intervals_; }
  double total_duration_ms() const { return total_duration_ms_; }
  size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  // Total time covered by [a, b) ∩ (union of intervals).
  double Overlap(double a, double b) const;

 private:
  std::vector<Interval> intervals_;
  double total_duration_ms_ = 0.0;
};

// Audacity label-track TSV: `start_seconds<TAB>end_seconds<TAB>label`.
// Only rows labelled `breath` (any case) are kept. Validation errors name
// the offending line numbers.
BreathIntervalSet LoadAnnotations(const std::filesystem::path& path,
                                  double total_duration_ms);
BreathIntervalSet ParseAnnotations(std::istream& in, double total_duration_ms);
void WriteAnnotations(const std::filesystem::path& path,
                      const BreathIntervalSet& set);
void WriteAnnotations(std::ostream& out, const BreathIntervalSet& set);

struct FrameLabels {
  std::vector<std::uint8_t> labels;
  double window_length_ms = 20.0;
  double hop_length_ms = 2.5;

  std::int64_t size() const { return static_cast<std::int64_t>(labels.size()); }
};

// Frame t spans [t*hop, t*hop + window). It is positive iff more than half of
// that span (strictly) lies inside a breath interval.
FrameLabels FramesFromIntervals(const BreathIntervalSet& intervals,
                                const FeatureConfig& config,
                                std::int64_t num_frames);

// One label per group of `frames_per_step` frames: positive iff strictly more
// than half of the covered frames are positive. A trailing partial group is
// judged over the frames it covers.
std::vector<std::uint8_t> StepsFromFrames(const FrameLabels& frames,
                                          int frames_per_step = 20);

}  // namespace breathline

#endif  // BREATHLINE_ANNOTATIONS_H_
