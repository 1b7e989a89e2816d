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

#include <gtest/gtest.h>

#include <thread>

#include "breathline/digest.h"
#include "httplib.h"
#include "json.hpp"
#include "testing/test_util.h"

namespace breathline::testing {
namespace {

class FetchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Get("/audio/one.wav", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("RIFF-one", "audio/wav");
    });
    server_.Get("/moved", [](const httplib::Request&, httplib::Response& res) {
      res.set_redirect("/audio/one.wav");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  std::string Url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

Manifest Make(const std::vector<std::pair<std::string, std::string>>& rows) {
  Manifest m;
  for (const auto& [id, source] : rows) {
    ManifestEntry e;
    e.id = id;
    e.source = source;
    e.outlet = "o";
    m.entries.push_back(e);
  }
  return m;
}

TEST_F(FetchTest, DownloadsAndRecordsFailures) {
  ScopedTempDir dir("fetch");
  const auto m = Make({{"one", Url("/audio/one.wav")},
                       {"local", "audio/local.wav"},
                       {"gone", Url("/missing.wav")},
                       {"redirected", Url("/moved")}});
  FetchOptions options;
  options.workers = 2;
  const auto records = FetchManifestSources(m, dir.path(), options);
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0].id, "one");
  EXPECT_TRUE(records[0].ok());
  EXPECT_EQ(records[0].sha256, Sha256Hex(std::string_view("RIFF-one")));
  EXPECT_EQ(records[0].bytes, 8u);
  EXPECT_EQ(ReadFile(dir.path() / "one.wav"), "RIFF-one");
  EXPECT_EQ(records[1].status, "failed(404)");
  EXPECT_TRUE(records[2].ok());
  EXPECT_EQ(ReadFile(dir.path() / "redirected.bin"), "RIFF-one");

  const auto report = nlohmann::json::parse(FetchReportJson(records));
  ASSERT_EQ(report.size(), 3u);
  EXPECT_TRUE(report[1]["sha256"].is_null());
  EXPECT_EQ(report[0]["sha256"], records[0].sha256);
}

TEST_F(FetchTest, UnreachableHostIsRecordedNotThrown) {
  ScopedTempDir dir("fetch-down");
  FetchOptions options;
  options.timeout_seconds = 2;
  // Port 9 (discard) on localhost is closed in the test environment.
  const auto records =
      FetchManifestSources(Make({{"down", "http://127.0.0.1:9/x.wav"}, {"bad", "http://"}}),
                           dir.path(), options);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_FALSE(records[0].ok());
  EXPECT_EQ(records[0].status.rfind("failed(", 0), 0u);
  EXPECT_EQ(records[1].status, "failed(bad url)");
}

}  // namespace
}  // namespace breathline::testing
