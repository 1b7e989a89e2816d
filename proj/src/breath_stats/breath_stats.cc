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

#include "breathline/breath_stats.h"

#include <cstdio>
#include <istream>
#include <ostream>

#include "breathline/error.h"

namespace breathline {

BreathStats ComputeStats(const BreathIntervalSet& intervals,
                         double total_duration_ms) {
  if (!(total_duration_ms > 0.0)) {
    throw InputError("breath stats: total duration must be > 0");
  }
  BreathStats s;
  const auto& v = intervals.intervals();
  if (v.empty()) return s;
  double duration = 0.0;
  for (const auto& i : v) duration += i.duration_ms();
  double spacing = 0.0;
  for (size_t i = 1; i < v.size(); ++i) spacing += v[i].start_ms - v[i - 1].end_ms;
  const double n = static_cast<double>(v.size());
  s.breaths_per_minute = n / (total_duration_ms / 60000.0);
  s.avg_duration_ms = duration / n;
  s.avg_spacing_ms = v.size() > 1 ? spacing / (n - 1.0) : 0.0;
  return s;
}

void WriteStatsCsv(std::ostream& out, const std::vector<StatsRow>& rows) {
  out << "id,label,bpm,avg_duration_ms,avg_spacing_ms\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g\n", r.stats.breaths_per_minute,
                  r.stats.avg_duration_ms, r.stats.avg_spacing_ms);
    out << CsvEscape(r.id) << ',' << ToString(r.label) << buf;
  }
}

std::vector<StatsRow> ReadStatsCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "id,label,bpm,avg_duration_ms,avg_spacing_ms") {
    throw FormatError("stats csv: missing or unexpected header");
  }
  std::vector<StatsRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 5) {
      throw FormatError("stats csv line " + std::to_string(line_no) + ": expected 5 fields");
    }
    StatsRow r;
    r.id = f[0];
    r.label = ParseSampleLabel(f[1]);
    try {
      r.stats = {std::stod(f[2]), std::stod(f[3]), std::stod(f[4])};
    } catch (const std::exception&) {
      throw FormatError("stats csv line " + std::to_string(line_no) + ": bad number");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace breathline
