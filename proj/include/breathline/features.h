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

#ifndef BREATHLINE_FEATURES_H_
#define BREATHLINE_FEATURES_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "breathline/audio.h"

namespace breathline {

// Framing and spectral settings. Defaults give 20 ms windows every 2.5 ms
// with 128 mel bands. fft_size = 0 selects the next power of two at or above
// the window length; mel_fmax = 0 selects the Nyquist frequency.
struct FeatureConfig {
  double window_length_ms = 20.0;
  double hop_length_ms = 2.5;
  int n_mels = 128;
  int fft_size = 0;
  double mel_fmin = 0.0;
  double mel_fmax = 0.0;
  double db_floor = -100.0;

  // Throws ConfigError when the settings are inconsistent at `sample_rate`.
  void Validate(int sample_rate) const;

  int WindowSamples(int sample_rate) const;
  int FftSize(int sample_rate) const;
  double MelFmax(int sample_rate) const;
  int num_features() const { return n_mels + 2; }
  int zcr_column() const { return n_mels; }
  int rmse_column() const { return n_mels + 1; }
};

// floor(duration_ms / hop_ms) computed exactly from integer sample counts.
std::int64_t NumFrames(std::int64_t num_samples, int sample_rate,
                       const FeatureConfig& config);
// First sample of frame t.
std::int64_t FrameStart(std::int64_t frame, int sample_rate,
                        const FeatureConfig& config);

// Slaney mel scale: linear below 1 kHz, logarithmic above.
double HzToMel(double hz);
double MelToHz(double mel);

// Triangular filters with unit peak, stored sparsely per band.
class MelFilterbank {
 public:
  MelFilterbank(int n_mels, int fft_size, int sample_rate, double fmin,
                double fmax);

  int n_mels() const { return n_mels_; }
  int num_bins() const { return num_bins_; }
  // Center frequency (Hz) of each band.
  const std::vector<double>& centers_hz() const { return centers_hz_; }
  // Dense weight of band m at FFT bin k.
  double Weight(int m, int k) const;
  // Sum of weights of band m (its effective bandwidth in bins).
  double Bandwidth(int m) const;
  void Apply(std::span<const double> power, std::span<double> bands) const;

 private:
  int n_mels_;
  int num_bins_;
  std::vector<double> centers_hz_;
  std::vector<int> first_bin_;
  std::vector<std::vector<double>> weights_;
};

// Rows are frames; columns are n_mels mel-dB values, then ZCR, then RMSE-dB.
struct FeatureMatrix {
  std::int64_t rows = 0;
  int cols = 0;
  std::vector<float> data;
  FeatureConfig config;
  int sample_rate = kCanonicalSampleRate;
  double source_duration_ms = 0.0;

  std::span<const float> Row(std::int64_t r) const {
    return {data.data() + r * cols, static_cast<size_t>(cols)};
  }
  float at(std::int64_t r, int c) const { return data[r * cols + c]; }
};

// Per-frame fraction of adjacent sample pairs whose signs differ (zero
// counts as positive). The denominator is window_samples - 1 for every
// frame, including zero-padded tail frames.
std::vector<double> Zcr(const AudioBuffer& buffer, const FeatureConfig& config);

// Per-frame 20*log10(max(RMS, 10^(db_floor/20))).
std::vector<double> RmseDb(const AudioBuffer& buffer,
                           const FeatureConfig& config);

// Per-frame mel band power in dB, row-major num_frames x n_mels:
// Hann window -> |DFT|^2 -> mel filterbank -> 10*log10(max(p, 10^(floor/10))).
std::vector<double> MelSpectrogramDb(const AudioBuffer& buffer,
                                     const FeatureConfig& config);

// All three families in one pass. Throws InputError if the buffer is shorter
// than one window.
FeatureMatrix ExtractFeatures(const AudioBuffer& buffer,
                              const FeatureConfig& config = {});

// One feature row for digital silence under `config` (used for padding).
std::vector<float> SilenceRow(const FeatureConfig& config);

// Binary container: 8-byte little-endian header length, JSON header
// {rows, cols, dtype:"f32", config, sample_rate, source_duration_ms}, then the
// row-major little-endian float32 payload.
void SaveFeatureMatrix(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix LoadFeatureMatrix(const std::filesystem::path& path);
void WriteFeatureCsv(std::ostream& out, const FeatureMatrix& m);

}  // namespace breathline

#endif  // BREATHLINE_FEATURES_H_
