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

#include "breathline/annotations.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "breathline/error.h"

namespace breathline {
namespace {

struct Row {
  Interval interval;
  int line = 0;
};

// Seconds -> ms, snapped to whole microseconds so that decimal inputs like
// 1.4 land exactly on 1400 ms.
double SecondsToMs(double seconds) {
  return std::nearbyint(seconds * 1e6) / 1e3;
}

BreathIntervalSet Build(std::vector<Row> rows, double total) {
  std::vector<std::string> problems;
  for (const auto& r : rows) {
    const auto& iv = r.interval;
    if (!(iv.start_ms < iv.end_ms)) {
      problems.push_back("line " + std::to_string(r.line) +
                         ": reversed or empty interval");
    } else if (iv.start_ms < 0.0 || iv.end_ms > total) {
      problems.push_back("line " + std::to_string(r.line) +
                         ": interval outside [0, duration]");
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return a.interval.start_ms < b.interval.start_ms;
  });
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].interval.start_ms < rows[i - 1].interval.end_ms) {
      problems.push_back("lines " + std::to_string(rows[i - 1].line) + " and " +
                         std::to_string(rows[i].line) + ": overlapping intervals");
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid breath intervals:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
  std::vector<Interval> intervals;
  intervals.reserve(rows.size());
  for (const auto& r : rows) intervals.push_back(r.interval);
  return BreathIntervalSet::FromIntervals(std::move(intervals), total);
}

}  // namespace

BreathIntervalSet BreathIntervalSet::FromIntervals(std::vector<Interval> intervals,
                                                   double total_duration_ms) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) {
              return a.start_ms < b.start_ms;
            });
  BreathIntervalSet set(total_duration_ms);
  for (size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    if (!(iv.start_ms < iv.end_ms)) {
      throw ValidationError("interval " + std::to_string(i) + " is empty or reversed");
    }
    if (iv.start_ms < 0.0 || iv.end_ms > total_duration_ms) {
      throw ValidationError("interval " + std::to_string(i) +
                            " lies outside [0, duration]");
    }
    if (!set.intervals_.empty()) {
      auto& last = set.intervals_.back();
      if (iv.start_ms < last.end_ms) {
        throw ValidationError("interval " + std::to_string(i) +
                              " overlaps its predecessor");
      }
      if (iv.start_ms == last.end_ms) {
        last.end_ms = iv.end_ms;
        continue;
      }
    }
    set.intervals_.push_back(iv);
  }
  return set;
}

double BreathIntervalSet::Overlap(double a, double b) const {
  auto it = std::lower_bound(
      intervals_.begin(), intervals_.end(), a,
      [](const Interval& iv, double t) { return iv.end_ms <= t; });
  double total = 0.0;
  for (; it != intervals_.end() && it->start_ms < b; ++it) {
    total += std::min(b, it->end_ms) - std::max(a, it->start_ms);
  }
  return total;
}

BreathIntervalSet ParseAnnotations(std::istream& in, double total_duration_ms) {
  std::vector<Row> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::istringstream ls(line);
    std::string start_s, end_s, label;
    if (!std::getline(ls, start_s, '\t') || !std::getline(ls, end_s, '\t')) {
      throw FormatError("annotation line " + std::to_string(lineno) +
                        ": expected start<TAB>end<TAB>label");
    }
    std::getline(ls, label);
    std::transform(label.begin(), label.end(), label.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    while (!label.empty() && std::isspace(static_cast<unsigned char>(label.back())))
      label.pop_back();
    if (label != "breath") continue;
    double start = 0, end = 0;
    try {
      size_t p1 = 0, p2 = 0;
      start = std::stod(start_s, &p1);
      end = std::stod(end_s, &p2);
    } catch (const std::exception&) {
      throw FormatError("annotation line " + std::to_string(lineno) +
                        ": non-numeric time");
    }
    rows.push_back({{SecondsToMs(start), SecondsToMs(end)}, lineno});
  }
  return Build(std::move(rows), total_duration_ms);
}

BreathIntervalSet LoadAnnotations(const std::filesystem::path& path,
                                  double total_duration_ms) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open annotations " + path.string());
  try {
    return ParseAnnotations(in, total_duration_ms);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WriteAnnotations(std::ostream& out, const BreathIntervalSet& set) {
  char buf[96];
  for (const auto& iv : set.intervals()) {
    std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\tbreath\n", iv.start_ms / 1000.0,
                  iv.end_ms / 1000.0);
    out << buf;
  }
}

void WriteAnnotations(const std::filesystem::path& path,
                      const BreathIntervalSet& set) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  WriteAnnotations(out, set);
}

FrameLabels FramesFromIntervals(const BreathIntervalSet& intervals,
                                const FeatureConfig& config,
                                std::int64_t num_frames) {
  FrameLabels out;
  out.window_length_ms = config.window_length_ms;
  out.hop_length_ms = config.hop_length_ms;
  out.labels.assign(static_cast<size_t>(std::max<std::int64_t>(num_frames, 0)), 0);
  const double half = config.window_length_ms / 2.0;
  for (std::int64_t t = 0; t < num_frames; ++t) {
    const double a = static_cast<double>(t) * config.hop_length_ms;
    const double b = a + config.window_length_ms;
    out.labels[t] = intervals.Overlap(a, b) > half ? 1 : 0;
  }
  return out;
}

std::vector<std::uint8_t> StepsFromFrames(const FrameLabels& frames,
                                          int frames_per_step) {
  if (frames_per_step < 1) throw InputError("frames_per_step must be >= 1");
  const std::int64_t n = frames.size();
  const std::int64_t steps = (n + frames_per_step - 1) / frames_per_step;
  std::vector<std::uint8_t> out(static_cast<size_t>(steps), 0);
  for (std::int64_t s = 0; s < steps; ++s) {
    const std::int64_t lo = s * frames_per_step;
    const std::int64_t hi = std::min(n, lo + frames_per_step);
    std::int64_t pos = 0;
    for (std::int64_t t = lo; t < hi; ++t) pos += frames.labels[t];
    out[s] = 2 * pos > (hi - lo) ? 1 : 0;
  }
  return out;
}

}  // namespace breathline
