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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "breathline/fetch.h"

#include <fstream>

#include "breathline/digest.h"
#include "breathline/parallel.h"
#include "httplib.h"
#include "json.hpp"

namespace breathline {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

bool ParseUrl(const std::string& url, SplitUrl* out) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return false;
  const auto path_start = url.find('/', scheme_end + 3);
  out->origin = url.substr(0, path_start);
  out->path = path_start == std::string::npos ? "/" : url.substr(path_start);
  return out->origin.size() > scheme_end + 3;
}

std::string Extension(const std::string& path) {
  const auto q = path.find_first_of("?#");
  const std::filesystem::path p(path.substr(0, q));
  const std::string ext = p.extension().string();
  return ext.empty() || ext.size() > 8 ? ".bin" : ext;
}

FetchRecord FetchOne(const ManifestEntry& entry,
                     const std::filesystem::path& dest_dir,
                     const FetchOptions& options) {
  FetchRecord rec;
  rec.id = entry.id;
  rec.url = entry.source;
  SplitUrl url;
  if (!ParseUrl(entry.source, &url)) {
    rec.status = "failed(bad url)";
    return rec;
  }
  httplib::Client client(url.origin);
  client.set_follow_location(true);
  client.set_connection_timeout(options.timeout_seconds, 0);
  client.set_read_timeout(options.timeout_seconds, 0);
  auto res = client.Get(url.path);
  if (!res) {
    rec.status = "failed(" + httplib::to_string(res.error()) + ")";
    return rec;
  }
  if (res->status < 200 || res->status >= 300) {
    rec.status = "failed(" + std::to_string(res->status) + ")";
    return rec;
  }
  const auto target = dest_dir / (entry.id + Extension(url.path));
  std::ofstream out(target, std::ios::binary);
  out.write(res->body.data(), static_cast<std::streamsize>(res->body.size()));
  if (!out) {
    rec.status = "failed(write " + target.string() + ")";
    return rec;
  }
  rec.status = "ok";
  rec.sha256 = Sha256Hex(std::string_view(res->body));
  rec.bytes = res->body.size();
  return rec;
}

}  // namespace

std::vector<FetchRecord> FetchManifestSources(const Manifest& manifest,
                                              const std::filesystem::path& dest_dir,
                                              const FetchOptions& options) {
  std::vector<const ManifestEntry*> remote;
  for (const auto& e : manifest.entries) {
    if (IsUrl(e.source)) remote.push_back(&e);
  }
  std::vector<FetchRecord> records(remote.size());
  if (remote.empty()) return records;
  std::filesystem::create_directories(dest_dir);
  ParallelFor(remote.size(), options.workers, [&](size_t i) {
    records[i] = FetchOne(*remote[i], dest_dir, options);
  });
  return records;
}

std::string FetchReportJson(const std::vector<FetchRecord>& records) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : records) {
    out.push_back({{"id", r.id},
                   {"url", r.url},
                   {"status", r.status},
                   {"sha256", r.ok() ? nlohmann::json(r.sha256) : nlohmann::json()},
                   {"bytes", r.bytes}});
  }
  return out.dump(2) + "\n";
}

}  // namespace breathline
