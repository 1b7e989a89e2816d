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

#ifndef BREATHLINE_BREATH_STATS_H_
#define BREATHLINE_BREATH_STATS_H_

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "breathline/annotations.h"
#include "breathline/manifest.h"

namespace breathline {

struct BreathStats {
  double breaths_per_minute = 0.0;
  double avg_duration_ms = 0.0;
  // Mean gap from one breath's end to the next one's start.
  double avg_spacing_ms = 0.0;

  std::array<double, 3> ToArray() const {
    return {breaths_per_minute, avg_duration_ms, avg_spacing_ms};
  }
  bool operator==(const BreathStats&) const = default;
};

// Zero breaths give (0, 0, 0); a single breath gets spacing 0.
BreathStats ComputeStats(const BreathIntervalSet& intervals,
                         double total_duration_ms);

struct StatsRow {
  std::string id;
  SampleLabel label = SampleLabel::kUnlabeled;
  BreathStats stats;
};

// Header `id,label,bpm,avg_duration_ms,avg_spacing_ms`.
void WriteStatsCsv(std::ostream& out, const std::vector<StatsRow>& rows);
std::vector<StatsRow> ReadStatsCsv(std::istream& in);

}  // namespace breathline

#endif  // BREATHLINE_BREATH_STATS_H_
