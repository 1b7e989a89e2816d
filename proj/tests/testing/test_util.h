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


#ifndef BREATHLINE_TESTS_TESTING_TEST_UTIL_H_
#define BREATHLINE_TESTS_TESTING_TEST_UTIL_H_

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "breathline/audio.h"
#include "breathline/random.h"

namespace breathline::testing {

// A fresh directory removed on destruction.
class ScopedTempDir {
 public:
  explicit ScopedTempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("breathline-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScopedTempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScopedTempDir(const ScopedTempDir&) = delete;
  ScopedTempDir& operator=(const ScopedTempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline AudioBuffer Sine(double hz, double seconds, int rate = kCanonicalSampleRate,
                        double amplitude = 0.5) {
  AudioBuffer b;
  b.sample_rate = rate;
  const auto n = static_cast<size_t>(std::llround(seconds * rate));
  b.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    b.samples[i] = static_cast<float>(amplitude * std::sin(2.0 * M_PI * hz * i / rate));
  }
  return b;
}

inline AudioBuffer Noise(std::uint64_t seed, size_t n, double amplitude = 0.5,
                         int rate = kCanonicalSampleRate) {
  Rng rng(seed);
  AudioBuffer b;
  b.sample_rate = rate;
  b.samples.resize(n);
  for (auto& s : b.samples) s = static_cast<float>(rng.Uniform(-amplitude, amplitude));
  return b;
}

// Absolute difference for magnitudes below 1, relative above.
inline double RelativeError(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace breathline::testing

#endif  // BREATHLINE_TESTS_TESTING_TEST_UTIL_H_
