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

#ifndef BREATHLINE_MANIFEST_H_
#define BREATHLINE_MANIFEST_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace breathline {

enum class SampleLabel { kReal, kFake, kUnlabeled };

std::string ToString(SampleLabel label);
// Accepts "real", "fake", "unlabeled" (case-insensitive); throws FormatError.
SampleLabel ParseSampleLabel(const std::string& text);

// One corpus item. `source` is a local path (relative paths resolve against
// the manifest's directory) or an http(s) URL.
struct ManifestEntry {
  std::string id;
  std::string source;
  SampleLabel label = SampleLabel::kUnlabeled;
  std::optional<std::string> speaker_id;
  std::string outlet;  // outlet for news items, show name for podcasts
  std::optional<double> duration_ms;
  std::optional<std::string> annotation_path;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  std::filesystem::path base_dir;

  std::filesystem::path ResolvePath(const std::string& relative) const;
  const ManifestEntry* Find(const std::string& id) const;
};

bool IsUrl(const std::string& source);

// CSV with header `id,source,label,speaker_id,outlet,duration_ms,annotation_path`.
// Fields may be RFC 4180 quoted. Throws FormatError on malformed rows and
// ValidationError on duplicate ids, unknown labels or empty outlets.
Manifest ReadManifest(const std::filesystem::path& path);
Manifest ParseManifest(std::istream& in, const std::filesystem::path& base_dir);
void WriteManifest(const std::filesystem::path& path, const Manifest& manifest);
void WriteManifest(std::ostream& out, const Manifest& manifest);

// Splits one CSV record; exposed for the other CSV readers in the project.
std::vector<std::string> SplitCsvLine(const std::string& line);
std::string CsvEscape(const std::string& field);

}  // namespace breathline

#endif  // BREATHLINE_MANIFEST_H_
