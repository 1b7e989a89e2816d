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

#ifndef BREATHLINE_FETCH_H_
#define BREATHLINE_FETCH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "breathline/manifest.h"

namespace breathline {

struct FetchRecord {
  std::string id;
  std::string url;
  std::string status;  // "ok" or "failed(<reason>)"
  std::string sha256;  // empty unless ok
  std::uint64_t bytes = 0;

  bool ok() const { return status == "ok"; }
};

struct FetchOptions {
  int timeout_seconds = 30;
  int workers = 1;
};

// Downloads every URL-sourced manifest entry into dest_dir as
// <id><extension>. Per-entry failures are recorded, never thrown. Records
// are ordered as in the manifest.
std::vector<FetchRecord> FetchManifestSources(const Manifest& manifest,
                                              const std::filesystem::path& dest_dir,
                                              const FetchOptions& options = {});

std::string FetchReportJson(const std::vector<FetchRecord>& records);

}  // namespace breathline

#endif  // BREATHLINE_FETCH_H_
