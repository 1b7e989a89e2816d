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

#ifndef BREATHLINE_SYNTH_H_
#define BREATHLINE_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "breathline/annotations.h"
#include "breathline/audio.h"
#include "breathline/manifest.h"

namespace breathline {

// Parameters of one synthetic recording: a speech proxy (harmonic syllables
// and fricative noise) interrupted by breath proxies (band-passed Gaussian
// noise with 10 ms linear fades) and by silent pauses. Levels are RMS dBFS.
struct SynthesisConfig {
  double duration_ms = 60000.0;
  double breaths_per_minute = 10.0;
  double breath_min_ms = 250.0;
  double breath_max_ms = 500.0;
  double speech_band_level_db = -20.0;
  double breath_band_level_db = -36.0;
  double breath_low_hz = 300.0;
  double breath_high_hz = 2000.0;
  double f0_min_hz = 100.0;
  double f0_max_hz = 180.0;
  double noise_floor_db = -65.0;
  // Recording-channel coloration: second-order Butterworth high- and
  // low-pass applied to the mix before the noise floor; 0 disables.
  double channel_highpass_hz = 0.0;
  double channel_lowpass_hz = 0.0;
  // Stationary band-limited room tone under the whole recording; a zero
  // upper edge disables it.
  double ambience_low_hz = 0.0;
  double ambience_high_hz = 0.0;
  double ambience_level_db = -60.0;
  // Silent pauses (no breath) per minute, placed like breaths.
  double pauses_per_minute = 6.0;
  // Silence kept on both sides of each breath or pause.
  double margin_ms = 60.0;
  std::uint64_t rng_seed = 0;
  int sample_rate = kCanonicalSampleRate;

  void Validate() const;
  // round(breaths_per_minute * duration in minutes).
  int BreathCount() const;
};

struct SynthesizedSample {
  AudioBuffer audio;
  BreathIntervalSet breaths;
};

// Deterministic in the config, including rng_seed. Throws ConfigError when
// the breaths cannot be placed.
SynthesizedSample Synthesize(const SynthesisConfig& config);

struct SynthesisItem {
  std::string id;
  SampleLabel label = SampleLabel::kReal;
  std::optional<std::string> speaker_id;
  std::string outlet;
  SynthesisConfig config;
};

// Writes audio/<id>.wav (PCM16), annotations/<id>.txt and manifest.csv under
// out_dir and returns the manifest.
Manifest WriteCorpus(const std::vector<SynthesisItem>& items,
                     const std::filesystem::path& out_dir,
                     int workers = 1);

struct NewsPlanOptions {
  double min_duration_ms = 30000.0;
  double max_duration_ms = 45000.0;
  double min_bpm = 8.0;
  double max_bpm = 14.0;
  int outlets_per_class = 2;
};

// Human-read ("real", breathing) and TTS-style ("fake", breathless) items
// spread round-robin over outlets per class.
std::vector<SynthesisItem> NewsCorpusPlan(int n_real, int n_fake,
                                          std::uint64_t seed,
                                          const NewsPlanOptions& options = {});

struct PodcastPlanOptions {
  double duration_ms = 90000.0;
  double min_bpm = 8.0;
  double max_bpm = 14.0;
};

// Podcast-style items; podcast i belongs to speaker i % n_speakers. Each
// speaker has its own voice and breath timbre, each podcast its own channel
// gain, coloration, room tone and noise floor.
std::vector<SynthesisItem> PodcastCorpusPlan(int n_podcasts, int n_speakers,
                                             std::uint64_t seed,
                                             const PodcastPlanOptions& options = {});

}  // namespace breathline

#endif  // BREATHLINE_SYNTH_H_
