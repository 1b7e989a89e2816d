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

#ifndef BREATHLINE_AUDIO_H_
#define BREATHLINE_AUDIO_H_

#include <cstdint>
#include <string>
#include <vector>

namespace breathline {

// Every pipeline stage operates at this rate; inputs are resampled on ingest.
inline constexpr int kCanonicalSampleRate = 16000;

// Mono samples in [-1, 1] at a positive integer sample rate.
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate = kCanonicalSampleRate;

  std::int64_t num_samples() const {
    return static_cast<std::int64_t>(samples.size());
  }
  double duration_ms() const {
    return 1000.0 * static_cast<double>(samples.size()) / sample_rate;
  }
};

enum class WavEncoding { kPcm16, kFloat32 };

// Reads a RIFF/WAVE file holding PCM16 or IEEE float32 audio with one or two
// channels. Channels are averaged to mono. PCM16 is scaled by 1/32768, so
// -32768 maps to exactly -1.0. Throws FormatError on a malformed container
// and UnsupportedError (naming the encoding) for anything else.
AudioBuffer LoadWav(const std::string& path);
AudioBuffer ParseWav(const std::vector<std::uint8_t>& bytes);

// PCM16 output rounds to nearest and saturates at the int16 range.
void WriteWav(const std::string& path, const AudioBuffer& buffer,
              WavEncoding encoding = WavEncoding::kPcm16);
std::vector<std::uint8_t> EncodeWav(const AudioBuffer& buffer,
                                    WavEncoding encoding);

// Band-limited (Kaiser-windowed sinc) sample-rate conversion. The output has
// round(n * target / source) samples; equal rates return a copy.
AudioBuffer Resample(const AudioBuffer& buffer, int target_rate);

// LoadWav followed by Resample to the canonical rate.
AudioBuffer LoadCanonical(const std::string& path);

}  // namespace breathline

#endif  // BREATHLINE_AUDIO_H_
