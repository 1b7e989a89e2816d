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

#ifndef BREATHLINE_DIGEST_H_
#define BREATHLINE_DIGEST_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace breathline {

// Lower-case hex SHA-256 of a byte range.
std::string Sha256Hex(std::span<const std::uint8_t> bytes);
std::string Sha256Hex(std::string_view text);

// SHA-256 of a file's contents; throws InputError if unreadable.
std::string Sha256OfFile(const std::string& path);

// Incremental hashing for digests assembled from many pieces.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void Update(std::span<const std::uint8_t> bytes);
  void Update(std::string_view text);
  std::string HexDigest();

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace breathline

#endif  // BREATHLINE_DIGEST_H_
