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


#include "plots.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace breathline::cli {
namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 50.0;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string Escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Linear map from [lo, hi] onto the plot area; degenerate ranges are padded.
struct Axis {
  double lo, hi, from, to;
  Axis(double lo_in, double hi_in, double from_in, double to_in)
      : lo(lo_in), hi(hi_in), from(from_in), to(to_in) {
    if (!(hi > lo)) {
      const double pad = std::max(std::abs(lo) * 0.05, 0.5);
      lo -= pad;
      hi += pad;
    }
  }
  double operator()(double v) const { return from + (v - lo) / (hi - lo) * (to - from); }
};

std::string Header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + Num(kWidth) +
         "\" height=\"" + Num(kHeight) + "\" viewBox=\"0 0 " + Num(kWidth) + " " +
         Num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string Line(double x1, double y1, double x2, double y2, const char* extra = "") {
  return "<line x1=\"" + Num(x1) + "\" y1=\"" + Num(y1) + "\" x2=\"" + Num(x2) +
         "\" y2=\"" + Num(y2) + "\" stroke=\"black\"" + extra + "/>\n";
}

std::string Text(double x, double y, const std::string& s, const char* anchor,
                 const char* extra = "") {
  return "<text x=\"" + Num(x) + "\" y=\"" + Num(y) + "\" text-anchor=\"" + anchor +
         "\"" + extra + ">" + Escape(s) + "</text>\n";
}

std::string YAxis(const Axis& y, const std::string& label) {
  std::string out = Line(kLeft, kTop, kLeft, kHeight - kBottom);
  for (int i = 0; i <= 4; ++i) {
    const double v = y.lo + (y.hi - y.lo) * i / 4.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    out += Line(kLeft - 4, y(v), kLeft, y(v));
    out += Text(kLeft - 6, y(v) + 4, buf, "end");
  }
  out += Text(14, (kTop + kHeight - kBottom) / 2, label, "middle",
              (" transform=\"rotate(-90 14 " + Num((kTop + kHeight - kBottom) / 2) + ")\"")
                  .c_str());
  return out;
}

}  // namespace

BoxSummary Summarize(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("Summarize: no values");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto i = static_cast<size_t>(std::floor(pos));
    const size_t j = std::min(i + 1, values.size() - 1);
    return values[i] + (pos - static_cast<double>(i)) * (values[j] - values[i]);
  };
  return {values.front(), quantile(0.25), quantile(0.5), quantile(0.75), values.back()};
}

std::string BoxPlotSvg(const std::vector<std::pair<std::string, std::vector<double>>>& groups,
                       const std::string& y_label) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& [name, values] : groups) {
    for (double v : values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  const Axis y(lo, hi, kHeight - kBottom, kTop);
  std::string svg = Header() + YAxis(y, y_label);
  svg += Line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom);
  const double slot = (kWidth - kLeft - kRight) / std::max<size_t>(groups.size(), 1);
  for (size_t g = 0; g < groups.size(); ++g) {
    const double cx = kLeft + slot * (g + 0.5);
    svg += Text(cx, kHeight - kBottom + 16, groups[g].first, "middle");
    if (groups[g].second.empty()) continue;
    const BoxSummary s = Summarize(groups[g].second);
    const double half = std::min(slot * 0.3, 40.0);
    svg += Line(cx, y(s.min), cx, y(s.q1));
    svg += Line(cx, y(s.q3), cx, y(s.max));
    svg += Line(cx - half / 2, y(s.min), cx + half / 2, y(s.min));
    svg += Line(cx - half / 2, y(s.max), cx + half / 2, y(s.max));
    svg += "<rect x=\"" + Num(cx - half) + "\" y=\"" + Num(y(s.q3)) + "\" width=\"" +
           Num(2 * half) + "\" height=\"" + Num(y(s.q1) - y(s.q3)) +
           "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    svg += Line(cx - half, y(s.median), cx + half, y(s.median), " stroke-width=\"2\"");
  }
  return svg + "</svg>\n";
}

std::string StatsScatterSvg(const std::vector<StatsRow>& rows) {
  double x_hi = 0.0, y_hi = 0.0;
  for (const auto& r : rows) {
    x_hi = std::max(x_hi, r.stats.breaths_per_minute);
    y_hi = std::max(y_hi, r.stats.avg_duration_ms);
  }
  const Axis x(0.0, x_hi, kLeft, kWidth - kRight);
  const Axis y(0.0, y_hi, kHeight - kBottom, kTop);
  std::string svg = Header() + YAxis(y, "mean breath duration (ms)");
  svg += Line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom);
  for (int i = 0; i <= 4; ++i) {
    const double v = x.lo + (x.hi - x.lo) * i / 4.0;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    svg += Line(x(v), kHeight - kBottom, x(v), kHeight - kBottom + 4);
    svg += Text(x(v), kHeight - kBottom + 16, buf, "middle");
  }
  svg += Text((kLeft + kWidth - kRight) / 2, kHeight - 12, "breaths per minute", "middle");
  for (const auto& r : rows) {
    const char* color = r.label == SampleLabel::kReal   ? "#2ca02c"
                        : r.label == SampleLabel::kFake ? "#d62728"
                                                        : "#7f7f7f";
    svg += "<circle cx=\"" + Num(x(r.stats.breaths_per_minute)) + "\" cy=\"" +
           Num(y(r.stats.avg_duration_ms)) + "\" r=\"4\" fill=\"" + color +
           "\" fill-opacity=\"0.6\"><title>" + Escape(r.id) + "</title></circle>\n";
  }
  svg += "<circle cx=\"" + Num(kWidth - 90) + "\" cy=\"" + Num(kTop + 6) +
         "\" r=\"4\" fill=\"#2ca02c\"/>\n" + Text(kWidth - 80, kTop + 10, "real", "start");
  svg += "<circle cx=\"" + Num(kWidth - 90) + "\" cy=\"" + Num(kTop + 22) +
         "\" r=\"4\" fill=\"#d62728\"/>\n" + Text(kWidth - 80, kTop + 26, "fake", "start");
  return svg + "</svg>\n";
}

}  // namespace breathline::cli
