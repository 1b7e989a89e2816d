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

#include "breathline/manifest.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "breathline/error.h"

namespace breathline {
namespace {

constexpr const char* kHeader =
    "id,source,label,speaker_id,outlet,duration_ms,annotation_path";

std::string Lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string ToString(SampleLabel label) {
  switch (label) {
    case SampleLabel::kReal:
      return "real";
    case SampleLabel::kFake:
      return "fake";
    case SampleLabel::kUnlabeled:
      return "unlabeled";
  }
  return "unlabeled";
}

SampleLabel ParseSampleLabel(const std::string& text) {
  std::string t = Lower(Trim(text));
  if (t == "real") return SampleLabel::kReal;
  if (t == "fake") return SampleLabel::kFake;
  if (t == "unlabeled" || t.empty()) return SampleLabel::kUnlabeled;
  throw FormatError("unknown label '" + text + "'");
}

bool IsUrl(const std::string& source) {
  return source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0;
}

std::filesystem::path Manifest::ResolvePath(const std::string& relative) const {
  std::filesystem::path p(relative);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

const ManifestEntry* Manifest::Find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  if (quoted) throw FormatError("unterminated quoted field");
  fields.push_back(cur);
  return fields;
}

std::string CsvEscape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

Manifest ParseManifest(std::istream& in, const std::filesystem::path& base_dir) {
  Manifest m;
  m.base_dir = base_dir;
  std::string line;
  if (!std::getline(in, line)) throw FormatError("manifest: empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (Trim(line) != kHeader) {
    throw FormatError(std::string("manifest: expected header '") + kHeader + "'");
  }
  std::set<std::string> seen;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    auto where = "manifest line " + std::to_string(lineno) + ": ";
    std::vector<std::string> f;
    try {
      f = SplitCsvLine(line);
    } catch (const FormatError& e) {
      throw FormatError(where + e.what());
    }
    if (f.size() != 7) {
      throw FormatError(where + "expected 7 fields, got " + std::to_string(f.size()));
    }
    ManifestEntry e;
    e.id = Trim(f[0]);
    e.source = Trim(f[1]);
    if (e.id.empty()) throw ValidationError(where + "empty id");
    if (e.source.empty()) throw ValidationError(where + "empty source");
    try {
      e.label = ParseSampleLabel(f[2]);
    } catch (const FormatError& err) {
      throw ValidationError(where + err.what());
    }
    if (auto s = Trim(f[3]); !s.empty()) e.speaker_id = s;
    e.outlet = Trim(f[4]);
    if (e.outlet.empty()) throw ValidationError(where + "empty outlet");
    if (auto s = Trim(f[5]); !s.empty()) {
      double v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
        throw FormatError(where + "bad duration_ms '" + s + "'");
      }
      e.duration_ms = v;
    }
    if (auto s = Trim(f[6]); !s.empty()) e.annotation_path = s;
    if (!seen.insert(e.id).second) {
      throw ValidationError(where + "duplicate id '" + e.id + "'");
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

Manifest ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest " + path.string());
  return ParseManifest(in, path.parent_path());
}

void WriteManifest(std::ostream& out, const Manifest& manifest) {
  out << kHeader << "\n";
  for (const auto& e : manifest.entries) {
    out << CsvEscape(e.id) << ',' << CsvEscape(e.source) << ','
        << ToString(e.label) << ',' << CsvEscape(e.speaker_id.value_or(""))
        << ',' << CsvEscape(e.outlet) << ',';
    if (e.duration_ms) {
      std::ostringstream d;
      d.precision(17);
      d << *e.duration_ms;
      out << d.str();
    }
    out << ',' << CsvEscape(e.annotation_path.value_or("")) << "\n";
  }
}

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write manifest " + path.string());
  WriteManifest(out, manifest);
}

}  // namespace breathline
