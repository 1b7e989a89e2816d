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


#ifndef BREATHLINE_TOOLS_PLOTS_H_
#define BREATHLINE_TOOLS_PLOTS_H_

#include <string>
#include <utility>
#include <vector>

#include "breathline/breath_stats.h"

namespace breathline::cli {

struct BoxSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Quartiles by linear interpolation between order statistics. Requires a
// non-empty input.
BoxSummary Summarize(std::vector<double> values);

// Self-contained SVG documents. Output depends only on the arguments.
std::string BoxPlotSvg(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                       const std::string& y_label);
std::string StatsScatterSvg(const std::vector<StatsRow>& rows);

}  // namespace breathline::cli

#endif  // BREATHLINE_TOOLS_PLOTS_H_
