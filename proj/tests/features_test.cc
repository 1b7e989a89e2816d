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


#include "breathline/features.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "breathline/error.h"
#include "oracles/oracles.h"
#include "testing/test_util.h"

namespace breathline::testing {
namespace {

double MaxRelativeError(const std::vector<double>& a, const std::vector<double>& b) {
  EXPECT_EQ(a.size(), b.size());
  double worst = 0.0;
  for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1e-12, std::abs(b[i])));
  }
  return worst;
}

TEST(FeaturesTest, MatchesBruteForceOracles) {
  FeatureConfig config;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    // Quiet and loud segments so the floor is exercised too.
    auto audio = Noise(seed, 4000, 0.8);
    for (size_t i = 1000; i < 1600; ++i) audio.samples[i] = 0.0f;
    EXPECT_LT(MaxRelativeError(Zcr(audio, config), OracleZcr(audio, config)), 1e-12);
    EXPECT_LT(MaxRelativeError(RmseDb(audio, config), OracleRmseDb(audio, config)), 1e-9);
    EXPECT_LT(MaxRelativeError(MelSpectrogramDb(audio, config), OracleMelDb(audio, config)), 1e-6);
  }
}

TEST(FeaturesTest, NonDefaultConfigMatchesOracles) {
  FeatureConfig config;
  config.window_length_ms = 25.0;
  config.hop_length_ms = 10.0;
  config.n_mels = 40;
  config.mel_fmin = 80.0;
  config.mel_fmax = 7000.0;
  const auto audio = Noise(9, 5000, 0.3);
  EXPECT_LT(MaxRelativeError(MelSpectrogramDb(audio, config), OracleMelDb(audio, config)), 1e-6);
  EXPECT_LT(MaxRelativeError(Zcr(audio, config), OracleZcr(audio, config)), 1e-12);
}

TEST(FeaturesTest, FrameCountIsFloorOfDurationOverHop) {
  FeatureConfig config;
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const int rate = i % 2 == 0 ? 16000 : 44100;
    const auto n = static_cast<std::int64_t>(rng.Below(200000));
    EXPECT_EQ(NumFrames(n, rate, config), OracleNumFrames(n, rate, config.hop_length_ms));
  }
  EXPECT_EQ(NumFrames(16000, 16000, config), 400);
  EXPECT_EQ(NumFrames(16039, 16000, config), 400);
  EXPECT_EQ(NumFrames(16040, 16000, config), 401);
}

TEST(FeaturesTest, ExtractFeaturesLayout) {
  const auto audio = Noise(7, 8000);
  const auto m = ExtractFeatures(audio);
  EXPECT_EQ(m.rows, 200);
  EXPECT_EQ(m.cols, 130);
  const auto mel = MelSpectrogramDb(audio, m.config);
  const auto zcr = Zcr(audio, m.config);
  const auto rmse = RmseDb(audio, m.config);
  for (std::int64_t t = 0; t < m.rows; t += 37) {
    EXPECT_FLOAT_EQ(m.at(t, 5), static_cast<float>(mel[t * 128 + 5]));
    EXPECT_FLOAT_EQ(m.at(t, 128), static_cast<float>(zcr[t]));
    EXPECT_FLOAT_EQ(m.at(t, 129), static_cast<float>(rmse[t]));
  }
  EXPECT_DOUBLE_EQ(m.source_duration_ms, 500.0);
}

TEST(FeaturesTest, ToneLandsInTheBandAroundItsFrequency) {
  FeatureConfig config;
  const auto mel = MelSpectrogramDb(Sine(440.0, 0.5), config);
  const MelFilterbank bank(128, 512, 16000, 0.0, 8000.0);
  const int frames = static_cast<int>(mel.size() / 128);
  const int t = frames / 2;
  const auto row = mel.begin() + t * 128;
  const int best = static_cast<int>(std::max_element(row, row + 128) - row);
  // The loudest band's triangle covers 440 Hz.
  EXPECT_GT(bank.Weight(best, static_cast<int>(std::lround(440.0 * 512 / 16000))), 0.0);
  EXPECT_NEAR(bank.centers_hz()[best], 440.0, 40.0);
}

TEST(FeaturesTest, WhiteNoiseBandPowerTracksBandwidth) {
  FeatureConfig config;
  const auto audio = Noise(11, 16000 * 4, 0.5);
  const auto mel = MelSpectrogramDb(audio, config);
  const MelFilterbank bank(128, 512, 16000, 0.0, 8000.0);
  const auto frames = static_cast<int>(mel.size() / 128);
  std::vector<double> normalized;
  for (int m = 0; m < 128; ++m) {
    if (bank.Bandwidth(m) <= 0.0) continue;
    double power = 0.0;
    for (int t = 0; t < frames; ++t) power += std::pow(10.0, mel[t * 128 + m] / 10.0);
    normalized.push_back(10.0 * std::log10(power / frames / bank.Bandwidth(m)));
  }
  ASSERT_GT(normalized.size(), 120u);
  const auto [lo, hi] = std::minmax_element(normalized.begin(), normalized.end());
  EXPECT_LT(*hi - *lo, 1.5);
}

TEST(FeaturesTest, ZeroCrossingRateDefinition) {
  FeatureConfig config;
  AudioBuffer alternating;
  alternating.samples.resize(1600);
  for (size_t i = 0; i < 1600; ++i) alternating.samples[i] = i % 2 ? -0.5f : 0.5f;
  for (double z : Zcr(alternating, config)) {
    if (z != 1.0) {
      // Only zero-padded tail frames may cross fewer times.
      EXPECT_LT(z, 1.0);
    }
  }
  EXPECT_DOUBLE_EQ(Zcr(alternating, config).front(), 1.0);

  AudioBuffer silence;
  silence.samples.assign(1600, 0.0f);
  for (double z : Zcr(silence, config)) EXPECT_EQ(z, 0.0);
}

TEST(FeaturesTest, RmseOfConstantAndSilence) {
  FeatureConfig config;
  AudioBuffer dc;
  dc.samples.assign(3200, 0.25f);
  EXPECT_NEAR(RmseDb(dc, config).front(), 20.0 * std::log10(0.25), 1e-9);
  AudioBuffer silence;
  silence.samples.assign(3200, 0.0f);
  for (double v : RmseDb(silence, config)) EXPECT_EQ(v, config.db_floor);
}

TEST(FeaturesTest, ScalingShiftsLevelsAndKeepsZcr) {
  FeatureConfig config;
  const auto a = Noise(21, 4000, 0.2);
  auto b = a;
  for (auto& s : b.samples) s *= 2.0f;
  const auto ra = RmseDb(a, config), rb = RmseDb(b, config);
  const auto ma = MelSpectrogramDb(a, config), mb = MelSpectrogramDb(b, config);
  const double gain_db = 20.0 * std::log10(2.0);
  for (size_t t = 0; t < ra.size(); ++t) EXPECT_NEAR(rb[t] - ra[t], gain_db, 1e-5);
  for (size_t i = 0; i < ma.size(); ++i) {
    if (ma[i] > config.db_floor + 10.0) {
      EXPECT_NEAR(mb[i] - ma[i], gain_db, 1e-5);
    }
  }
  EXPECT_EQ(Zcr(a, config), Zcr(b, config));
}

TEST(FeaturesTest, ShiftingByOneHopShiftsFramesByOne) {
  FeatureConfig config;
  const auto a = Noise(31, 4000);
  AudioBuffer b;
  b.samples.assign(a.samples.begin() + 40, a.samples.end());
  const auto ma = ExtractFeatures(a, config), mb = ExtractFeatures(b, config);
  ASSERT_EQ(mb.rows, ma.rows - 1);
  // Tail frames differ through zero padding; compare the fully covered ones.
  for (std::int64_t t = 0; t + 8 < mb.rows; ++t) {
    for (int c = 0; c < ma.cols; ++c) ASSERT_NEAR(mb.at(t, c), ma.at(t + 1, c), 1e-3) << t;
  }
}

TEST(FeaturesTest, SilenceRowMatchesDigitalSilence) {
  FeatureConfig config;
  AudioBuffer silence;
  silence.samples.assign(1600, 0.0f);
  const auto m = ExtractFeatures(silence, config);
  const auto row = SilenceRow(config);
  for (int c = 0; c < m.cols; ++c) EXPECT_EQ(m.at(3, c), row[c]) << c;
}

TEST(FeaturesTest, RejectsShortAudioAndBadConfig) {
  AudioBuffer tiny;
  tiny.samples.assign(100, 0.1f);
  EXPECT_THROW(ExtractFeatures(tiny), InputError);
  FeatureConfig bad;
  bad.hop_length_ms = 30.0;
  EXPECT_THROW(ExtractFeatures(Noise(1, 4000), bad), ConfigError);
  bad = {};
  bad.fft_size = 128;
  EXPECT_THROW(ExtractFeatures(Noise(1, 4000), bad), ConfigError);
  bad = {};
  bad.mel_fmax = 9000.0;
  EXPECT_THROW(ExtractFeatures(Noise(1, 4000), bad), ConfigError);
}

TEST(FeaturesTest, MelScaleRoundTrip) {
  for (double hz : {0.0, 200.0, 999.0, 1000.0, 1001.0, 4000.0, 8000.0}) {
    EXPECT_NEAR(MelToHz(HzToMel(hz)), hz, 1e-9);
  }
  EXPECT_DOUBLE_EQ(HzToMel(1000.0), 15.0);
}

TEST(FeaturesTest, MatrixFileRoundTrip) {
  const auto m = ExtractFeatures(Noise(41, 2000));
  ScopedTempDir dir("features");
  SaveFeatureMatrix(dir.path() / "m.bin", m);
  const auto back = LoadFeatureMatrix(dir.path() / "m.bin");
  EXPECT_EQ(back.rows, m.rows);
  EXPECT_EQ(back.cols, m.cols);
  EXPECT_EQ(back.data, m.data);
  EXPECT_EQ(back.config.n_mels, m.config.n_mels);
  std::ostringstream csv;
  WriteFeatureCsv(csv, m);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), m.rows + 1);
}

}  // namespace
}  // namespace breathline::testing
