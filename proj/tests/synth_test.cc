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


#include "breathline/synth.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "breathline/annotations.h"
#include "breathline/error.h"
#include "breathline/manifest.h"
#include "testing/test_util.h"

namespace breathline::testing {
namespace {

SynthesisConfig Short(std::uint64_t seed) {
  SynthesisConfig c;
  c.duration_ms = 30000.0;
  c.breaths_per_minute = 12.0;
  c.rng_seed = seed;
  return c;
}

TEST(SynthesizeTest, PlacesTheRequestedBreaths) {
  const auto c = Short(1);
  const auto s = Synthesize(c);
  EXPECT_EQ(c.BreathCount(), 6);
  ASSERT_EQ(s.breaths.size(), 6u);
  EXPECT_EQ(s.audio.num_samples(), 480000);
  double prev_end = -1.0;
  for (const auto& b : s.breaths.intervals()) {
    EXPECT_GE(b.duration_ms(), c.breath_min_ms);
    EXPECT_LE(b.duration_ms(), c.breath_max_ms);
    EXPECT_GE(b.start_ms, c.margin_ms);
    EXPECT_LE(b.end_ms, c.duration_ms - c.margin_ms);
    EXPECT_GT(b.start_ms, prev_end);
    prev_end = b.end_ms;
  }
  for (float v : s.audio.samples) {
    ASSERT_LE(std::abs(v), 1.0f);
  }
}

TEST(SynthesizeTest, BreathsAreAudibleAgainstTheirSurroundings) {
  auto c = Short(2);
  c.speech_band_level_db = -20.0;
  c.breath_band_level_db = -30.0;
  const auto s = Synthesize(c);
  for (const auto& b : s.breaths.intervals()) {
    double energy = 0.0;
    const auto from = static_cast<size_t>(b.start_ms * 16) + 320;
    const auto to = static_cast<size_t>(b.end_ms * 16) - 320;
    for (size_t i = from; i < to; ++i) energy += s.audio.samples[i] * s.audio.samples[i];
    const double rms_db = 10.0 * std::log10(energy / (to - from));
    EXPECT_GT(rms_db, c.noise_floor_db + 20.0);
  }
}

TEST(SynthesizeTest, ZeroRateGivesNoBreaths) {
  auto c = Short(3);
  c.breaths_per_minute = 0.0;
  EXPECT_TRUE(Synthesize(c).breaths.empty());
}

TEST(SynthesizeTest, DeterministicInTheSeed) {
  const auto a = Synthesize(Short(4)), b = Synthesize(Short(4)), c = Synthesize(Short(5));
  EXPECT_EQ(a.audio.samples, b.audio.samples);
  EXPECT_EQ(a.breaths.intervals(), b.breaths.intervals());
  EXPECT_NE(a.audio.samples, c.audio.samples);
}

TEST(SynthesizeTest, InfeasibleRatesAreConfigErrors) {
  auto c = Short(6);
  c.breaths_per_minute = 120.0;  // 60 breaths of up to 500 ms in 30 s
  EXPECT_THROW(c.Validate(), ConfigError);
  EXPECT_THROW(Synthesize(c), ConfigError);
  c = Short(6);
  c.breath_min_ms = 600.0;
  EXPECT_THROW(Synthesize(c), ConfigError);
  c = Short(6);
  c.breath_high_hz = 9000.0;
  EXPECT_THROW(Synthesize(c), ConfigError);
}

TEST(SynthesizeTest, ChannelAndAmbienceOptionsAreApplied) {
  auto c = Short(7);
  c.channel_highpass_hz = 200.0;
  c.channel_lowpass_hz = 3000.0;
  c.ambience_low_hz = 300.0;
  c.ambience_high_hz = 900.0;
  c.ambience_level_db = -50.0;
  const auto colored = Synthesize(c);
  EXPECT_NE(colored.audio.samples, Synthesize(Short(7)).audio.samples);
  c.ambience_low_hz = 0.0;
  EXPECT_THROW(Synthesize(c), ConfigError);
}

TEST(CorpusPlanTest, NewsPlanLabelsAndOutlets) {
  const auto plan = NewsCorpusPlan(5, 4, 9);
  ASSERT_EQ(plan.size(), 9u);
  std::set<std::string> real_outlets, fake_outlets, ids;
  for (const auto& item : plan) {
    ids.insert(item.id);
    if (item.label == SampleLabel::kReal) {
      real_outlets.insert(item.outlet);
      EXPECT_GT(item.config.breaths_per_minute, 0.0);
    } else {
      fake_outlets.insert(item.outlet);
      EXPECT_EQ(item.config.breaths_per_minute, 0.0);
    }
    EXPECT_NO_THROW(item.config.Validate());
  }
  EXPECT_EQ(ids.size(), 9u);
  EXPECT_EQ(real_outlets.size(), 2u);
  EXPECT_EQ(fake_outlets.size(), 2u);
  for (const auto& o : real_outlets) EXPECT_EQ(fake_outlets.count(o), 0u);
}

TEST(CorpusPlanTest, PodcastSpeakersShareAVoice) {
  const auto plan = PodcastCorpusPlan(8, 4, 10);
  ASSERT_EQ(plan.size(), 8u);
  for (int p = 0; p < 8; ++p) {
    EXPECT_EQ(*plan[p].speaker_id, "speaker-" + std::to_string(p % 4 + 1));
    EXPECT_EQ(plan[p].label, SampleLabel::kReal);
    if (p >= 4) {
      EXPECT_EQ(plan[p].config.f0_min_hz, plan[p - 4].config.f0_min_hz);
      EXPECT_EQ(plan[p].config.breath_low_hz, plan[p - 4].config.breath_low_hz);
      EXPECT_NE(plan[p].config.rng_seed, plan[p - 4].config.rng_seed);
    }
  }
  EXPECT_NE(plan[0].config.f0_min_hz, plan[1].config.f0_min_hz);
}

TEST(WriteCorpusTest, WritesAudioAnnotationsAndManifest) {
  auto plan = NewsCorpusPlan(2, 1, 11);
  for (auto& item : plan) item.config.duration_ms = 12000.0;
  ScopedTempDir one("corpus1"), two("corpus2");
  const auto manifest = WriteCorpus(plan, one.path(), 1);
  WriteCorpus(plan, two.path(), 2);
  ASSERT_EQ(manifest.entries.size(), 3u);
  const auto reread = ReadManifest(one.path() / "manifest.csv");
  ASSERT_EQ(reread.entries.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    const auto& e = reread.entries[i];
    EXPECT_EQ(e.id, plan[i].id);
    EXPECT_EQ(e.label, plan[i].label);
    ASSERT_TRUE(e.annotation_path.has_value());
    const auto sample = Synthesize(plan[i].config);
    const auto labels = LoadAnnotations(reread.ResolvePath(*e.annotation_path), 12000.0);
    EXPECT_EQ(labels.size(), sample.breaths.size());
    const auto audio_path = reread.ResolvePath(e.source);
    EXPECT_EQ(ReadFile(audio_path), ReadFile(two.path() / e.source));
    EXPECT_EQ(LoadWav(audio_path.string()).num_samples(), 12000 * 16);
  }
  EXPECT_EQ(ReadFile(one.path() / "manifest.csv"), ReadFile(two.path() / "manifest.csv"));
}

TEST(ManifestTest, RoundTripAndValidation) {
  const std::string text =
      "id,source,label,speaker_id,outlet,duration_ms,annotation_path\n"
      "a,audio/a.wav,real,s1,show,1000,ann/a.txt\n"
      "b,https://example.org/b.mp3,fake,,\"outlet, inc\",,\n";
  std::istringstream in(text);
  const auto m = ParseManifest(in, "/data");
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_EQ(*m.entries[0].speaker_id, "s1");
  EXPECT_EQ(*m.entries[0].duration_ms, 1000.0);
  EXPECT_FALSE(m.entries[1].speaker_id.has_value());
  EXPECT_EQ(m.entries[1].outlet, "outlet, inc");
  EXPECT_TRUE(IsUrl(m.entries[1].source));
  EXPECT_EQ(m.ResolvePath("audio/a.wav"), std::filesystem::path("/data/audio/a.wav"));
  std::ostringstream out;
  WriteManifest(out, m);
  EXPECT_EQ(out.str(), text);

  auto parse = [](const std::string& body) {
    std::istringstream s("id,source,label,speaker_id,outlet,duration_ms,annotation_path\n" + body);
    return ParseManifest(s, "");
  };
  EXPECT_THROW(parse("a,x.wav,maybe,,o,,\n"), ValidationError);
  EXPECT_THROW(parse("a,x.wav,real,,o,,\na,y.wav,real,,o,,\n"), ValidationError);
  EXPECT_THROW(parse("a,x.wav,real,,o\n"), FormatError);
  EXPECT_THROW(parse("a,x.wav,real,,o,abc,\n"), FormatError);
  std::istringstream bad_header("id,path\n");
  EXPECT_THROW(ParseManifest(bad_header, ""), FormatError);
}

}  // namespace
}  // namespace breathline::testing
