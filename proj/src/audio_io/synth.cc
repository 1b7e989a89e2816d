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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "breathline/error.h"
#include "breathline/parallel.h"
#include "breathline/random.h"

namespace breathline {

namespace {

constexpr int kFilterTaps = 255;
constexpr double kFadeMs = 10.0;

double DbToAmplitude(double db) { return std::pow(10.0, db / 20.0); }

// Blackman-windowed sinc band-pass.
std::vector<double> BandpassKernel(double low_hz, double high_hz, int sample_rate) {
  const double fl = low_hz / sample_rate;
  const double fh = high_hz / sample_rate;
  const int half = kFilterTaps / 2;
  std::vector<double> h(kFilterTaps);
  for (int i = 0; i < kFilterTaps; ++i) {
    const int n = i - half;
    const double ideal = n == 0 ? 2.0 * (fh - fl)
                                : (std::sin(2.0 * M_PI * fh * n) -
                                   std::sin(2.0 * M_PI * fl * n)) / (M_PI * n);
    const double x = 2.0 * M_PI * i / (kFilterTaps - 1);
    h[i] = ideal * (0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x));
  }
  return h;
}

std::vector<double> FilteredNoise(Rng& rng, size_t n, const std::vector<double>& h) {
  std::vector<double> white(n + h.size() - 1);
  for (auto& v : white) v = rng.Gaussian();
  std::vector<double> out(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (size_t k = 0; k < h.size(); ++k) acc += h[k] * white[i + k];
    out[i] = acc;
  }
  return out;
}

void ScaleToRms(std::vector<double>* x, double level_db) {
  double energy = 0.0;
  for (double v : *x) energy += v * v;
  if (x->empty() || energy <= 0.0) return;
  const double gain =
      DbToAmplitude(level_db) / std::sqrt(energy / static_cast<double>(x->size()));
  for (double& v : *x) v *= gain;
}

// RBJ biquad, direct form I.
void ApplyBiquad(std::vector<double>* x, double cutoff_hz, int sample_rate, bool highpass) {
  const double w = 2.0 * M_PI * cutoff_hz / sample_rate;
  const double alpha = std::sin(w) / (2.0 * M_SQRT1_2);
  const double cw = std::cos(w);
  const double b1 = highpass ? -(1.0 + cw) : 1.0 - cw;
  const double b0 = highpass ? (1.0 + cw) / 2.0 : (1.0 - cw) / 2.0;
  const double a0 = 1.0 + alpha, a1 = -2.0 * cw, a2 = 1.0 - alpha;
  double x1 = 0, x2 = 0, y1 = 0, y2 = 0;
  for (double& v : *x) {
    const double y = (b0 * v + b1 * x1 + b0 * x2 - a1 * y1 - a2 * y2) / a0;
    x2 = x1;
    x1 = v;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

void ApplyHann(std::vector<double>* x) {
  const size_t n = x->size();
  if (n < 2) return;
  for (size_t i = 0; i < n; ++i) {
    (*x)[i] *= 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / (n - 1));
  }
}

class Synthesizer {
 public:
  explicit Synthesizer(const SynthesisConfig& c)
      : c_(c),
        rng_(c.rng_seed),
        per_ms_(c.sample_rate / 1000.0),
        breath_kernel_(BandpassKernel(c.breath_low_hz, c.breath_high_hz, c.sample_rate)),
        fricative_kernel_(BandpassKernel(
            3000.0, std::min(7000.0, 0.45 * c.sample_rate), c.sample_rate)) {}

  SynthesizedSample Run() {
    const auto total = static_cast<std::int64_t>(std::llround(c_.duration_ms * per_ms_));
    signal_.assign(static_cast<size_t>(total), 0.0);
    PlaceEvents();

    // Speech fills everything outside event regions (event plus margins).
    std::int64_t cursor = 0;
    for (const auto& e : events_) {
      FillSpeech(cursor, Sample(e.start_ms - margin_ms_));
      cursor = Sample(e.end_ms + margin_ms_);
      if (e.breath) AddBreath(Sample(e.start_ms), Sample(e.end_ms));
    }
    FillSpeech(cursor, total);
    if (c_.ambience_high_hz > 0.0) {
      auto room = FilteredNoise(
          rng_, signal_.size(),
          BandpassKernel(c_.ambience_low_hz, c_.ambience_high_hz, c_.sample_rate));
      ScaleToRms(&room, c_.ambience_level_db);
      Mix(0, room);
    }
    if (c_.channel_highpass_hz > 0.0) {
      ApplyBiquad(&signal_, c_.channel_highpass_hz, c_.sample_rate, true);
    }
    if (c_.channel_lowpass_hz > 0.0) {
      ApplyBiquad(&signal_, c_.channel_lowpass_hz, c_.sample_rate, false);
    }

    const double floor = DbToAmplitude(c_.noise_floor_db);
    SynthesizedSample out;
    out.audio.sample_rate = c_.sample_rate;
    out.audio.samples.resize(signal_.size());
    for (size_t i = 0; i < signal_.size(); ++i) {
      const double v = signal_[i] + floor * rng_.Gaussian();
      out.audio.samples[i] = static_cast<float>(std::clamp(v, -1.0, 1.0));
    }
    std::vector<Interval> intervals;
    for (const auto& e : events_) {
      if (e.breath) intervals.push_back({static_cast<double>(e.start_ms),
                                         static_cast<double>(e.end_ms)});
    }
    out.breaths = BreathIntervalSet::FromIntervals(std::move(intervals),
                                                   out.audio.duration_ms());
    return out;
  }

 private:
  struct Event {
    std::int64_t start_ms, end_ms;
    bool breath;
  };

  std::int64_t Sample(std::int64_t ms) const {
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::llround(ms * per_ms_)),
                                    0, static_cast<std::int64_t>(signal_.size()));
  }
  std::int64_t UniformMs(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng_.Below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  void PlaceEvents() {
    const double minutes = c_.duration_ms / 60000.0;
    const int breaths = c_.BreathCount();
    int pauses = static_cast<int>(std::llround(c_.pauses_per_minute * minutes));
    margin_ms_ = static_cast<std::int64_t>(std::ceil(c_.margin_ms));
    const auto min_len = static_cast<std::int64_t>(std::ceil(c_.breath_min_ms));
    const auto max_len = static_cast<std::int64_t>(std::floor(c_.breath_max_ms));
    const auto total_ms = static_cast<std::int64_t>(std::floor(c_.duration_ms));
    const std::int64_t need = max_len + 2 * margin_ms_;
    auto fits = [&](int events) {
      return events == 0 || total_ms / events - 1 >= need;
    };
    while (pauses > 0 && !fits(breaths + pauses)) --pauses;
    std::vector<bool> kinds(static_cast<size_t>(breaths), true);
    kinds.resize(static_cast<size_t>(breaths + pauses), false);
    rng_.Shuffle(kinds);
    const int n = static_cast<int>(kinds.size());
    for (int i = 0; i < n; ++i) {
      const std::int64_t slot_begin = total_ms * i / n;
      const std::int64_t slot_end = total_ms * (i + 1) / n;
      const std::int64_t len = UniformMs(min_len, max_len);
      const std::int64_t start =
          UniformMs(slot_begin + margin_ms_, slot_end - margin_ms_ - len);
      events_.push_back({start, start + len, kinds[static_cast<size_t>(i)]});
    }
  }

  void FillSpeech(std::int64_t begin, std::int64_t end) {
    const auto min_syllable = static_cast<std::int64_t>(30 * per_ms_);
    std::int64_t t = begin;
    while (t < end) {
      std::int64_t len = static_cast<std::int64_t>(rng_.Uniform(100.0, 280.0) * per_ms_);
      len = std::min(len, end - t);
      if (len < min_syllable) break;
      if (rng_.Uniform() < 0.2) {
        AddFricative(t, len);
      } else {
        AddVoiced(t, len);
      }
      t += len + static_cast<std::int64_t>(rng_.Uniform(15.0, 60.0) * per_ms_);
    }
  }

  void AddVoiced(std::int64_t at, std::int64_t len) {
    const double f0 = rng_.Uniform(c_.f0_min_hz, c_.f0_max_hz);
    const double glide = rng_.Uniform(-0.08, 0.08);
    const double f1 = rng_.Uniform(300.0, 900.0);
    const double f2 = rng_.Uniform(1000.0, 2500.0);
    const double level = c_.speech_band_level_db + rng_.Uniform(-4.0, 4.0);
    const double top = std::min(4000.0, 0.45 * c_.sample_rate);
    const int harmonics = std::max(1, static_cast<int>(top / (f0 * (1.0 + std::abs(glide)))));
    std::vector<double> amp(static_cast<size_t>(harmonics));
    for (int k = 1; k <= harmonics; ++k) {
      const double f = k * f0;
      amp[k - 1] = (1.0 / k) * (1.0 + 3.0 * std::exp(-std::pow((f - f1) / 150.0, 2)) +
                                2.0 * std::exp(-std::pow((f - f2) / 250.0, 2)));
    }
    std::vector<double> x(static_cast<size_t>(len));
    double phase = 0.0;
    for (std::int64_t i = 0; i < len; ++i) {
      const double f = f0 * (1.0 + glide * static_cast<double>(i) / len);
      phase += 2.0 * M_PI * f / c_.sample_rate;
      double v = 0.0;
      for (int k = 1; k <= harmonics; ++k) v += amp[k - 1] * std::sin(k * phase);
      x[i] = v;
    }
    ApplyHann(&x);
    ScaleToRms(&x, level);
    Mix(at, x);
  }

  void AddFricative(std::int64_t at, std::int64_t len) {
    auto x = FilteredNoise(rng_, static_cast<size_t>(len), fricative_kernel_);
    ApplyHann(&x);
    ScaleToRms(&x, c_.speech_band_level_db - 6.0 + rng_.Uniform(-3.0, 3.0));
    Mix(at, x);
  }

  void AddBreath(std::int64_t begin, std::int64_t end) {
    auto x = FilteredNoise(rng_, static_cast<size_t>(end - begin), breath_kernel_);
    ScaleToRms(&x, c_.breath_band_level_db + rng_.Uniform(-2.0, 2.0));
    const auto fade = std::min<std::int64_t>(static_cast<std::int64_t>(kFadeMs * per_ms_),
                                             static_cast<std::int64_t>(x.size() / 2));
    for (std::int64_t i = 0; i < fade; ++i) {
      const double g = static_cast<double>(i) / fade;
      x[i] *= g;
      x[x.size() - 1 - i] *= g;
    }
    Mix(begin, x);
  }

  void Mix(std::int64_t at, const std::vector<double>& x) {
    for (size_t i = 0; i < x.size() && at + static_cast<std::int64_t>(i) <
                                           static_cast<std::int64_t>(signal_.size());
         ++i) {
      signal_[at + i] += x[i];
    }
  }

  const SynthesisConfig& c_;
  Rng rng_;
  double per_ms_;
  std::vector<double> breath_kernel_;
  std::vector<double> fricative_kernel_;
  std::vector<double> signal_;
  std::vector<Event> events_;
  std::int64_t margin_ms_ = 0;
};

}  // namespace

void SynthesisConfig::Validate() const {
  if (!(duration_ms > 0.0)) throw ConfigError("synthesis: duration_ms must be > 0");
  if (!(breaths_per_minute >= 0.0)) {
    throw ConfigError("synthesis: breaths_per_minute must be >= 0");
  }
  if (!(pauses_per_minute >= 0.0)) {
    throw ConfigError("synthesis: pauses_per_minute must be >= 0");
  }
  if (!(breath_min_ms > 0.0) || std::ceil(breath_min_ms) > std::floor(breath_max_ms)) {
    throw ConfigError("synthesis: breath duration range is empty");
  }
  if (!(margin_ms >= 0.0)) throw ConfigError("synthesis: margin_ms must be >= 0");
  if (sample_rate < 8000 || sample_rate % 1000 != 0) {
    throw ConfigError("synthesis: sample_rate must be a multiple of 1000 Hz, >= 8000");
  }
  if (!(breath_low_hz > 0.0 && breath_low_hz < breath_high_hz &&
        breath_high_hz < sample_rate / 2.0)) {
    throw ConfigError("synthesis: breath band must satisfy 0 < low < high < nyquist");
  }
  if (!(channel_highpass_hz >= 0.0 && channel_highpass_hz < sample_rate / 2.0) ||
      !(channel_lowpass_hz >= 0.0 && channel_lowpass_hz < sample_rate / 2.0)) {
    throw ConfigError("synthesis: channel filter cutoffs must lie in [0, nyquist)");
  }
  if (ambience_high_hz != 0.0 &&
      !(ambience_low_hz > 0.0 && ambience_low_hz < ambience_high_hz &&
        ambience_high_hz < sample_rate / 2.0)) {
    throw ConfigError("synthesis: ambience band must satisfy 0 < low < high < nyquist");
  }
  if (!(f0_min_hz > 0.0 && f0_min_hz <= f0_max_hz)) {
    throw ConfigError("synthesis: f0 range is invalid");
  }
  const int breaths = BreathCount();
  const auto margin = static_cast<std::int64_t>(std::ceil(margin_ms));
  const auto max_len = static_cast<std::int64_t>(std::floor(breath_max_ms));
  const auto total_ms = static_cast<std::int64_t>(std::floor(duration_ms));
  if (breaths > 0 && total_ms / breaths - 1 < max_len + 2 * margin) {
    throw ConfigError("synthesis: " + std::to_string(breaths) + " breaths of up to " +
                      std::to_string(max_len) + " ms plus " + std::to_string(margin) +
                      " ms margins do not fit in " + std::to_string(total_ms) + " ms");
  }
}

int SynthesisConfig::BreathCount() const {
  return static_cast<int>(std::llround(breaths_per_minute * duration_ms / 60000.0));
}

SynthesizedSample Synthesize(const SynthesisConfig& config) {
  config.Validate();
  return Synthesizer(config).Run();
}

Manifest WriteCorpus(const std::vector<SynthesisItem>& items,
                     const std::filesystem::path& out_dir, int workers) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir / "audio");
  fs::create_directories(out_dir / "annotations");
  for (const auto& item : items) item.config.Validate();
  Manifest manifest;
  manifest.base_dir = out_dir;
  manifest.entries.resize(items.size());
  ParallelFor(items.size(), workers, [&](size_t i) {
    const auto& item = items[i];
    const auto sample = Synthesize(item.config);
    const std::string audio = "audio/" + item.id + ".wav";
    const std::string labels = "annotations/" + item.id + ".txt";
    WriteWav((out_dir / audio).string(), sample.audio, WavEncoding::kPcm16);
    WriteAnnotations(out_dir / labels, sample.breaths);
    ManifestEntry& e = manifest.entries[i];
    e.id = item.id;
    e.source = audio;
    e.label = item.label;
    e.speaker_id = item.speaker_id;
    e.outlet = item.outlet;
    e.duration_ms = sample.audio.duration_ms();
    e.annotation_path = labels;
  });
  WriteManifest(out_dir / "manifest.csv", manifest);
  return manifest;
}

namespace {

std::string NumberedId(const char* prefix, int i) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-%03d", prefix, i);
  return buf;
}

double RoundTo(double v, double unit) { return std::round(v / unit) * unit; }

}  // namespace

std::vector<SynthesisItem> NewsCorpusPlan(int n_real, int n_fake, std::uint64_t seed,
                                          const NewsPlanOptions& options) {
  if (n_real < 0 || n_fake < 0) throw ConfigError("news plan: negative item count");
  if (options.outlets_per_class < 1) {
    throw ConfigError("news plan: outlets_per_class must be >= 1");
  }
  Rng rng(seed);
  std::vector<SynthesisItem> items;
  auto add = [&](bool real, int index) {
    SynthesisItem item;
    item.id = NumberedId(real ? "real" : "fake", index);
    item.label = real ? SampleLabel::kReal : SampleLabel::kFake;
    item.outlet = std::string(real ? "human-outlet-" : "tts-outlet-") +
                  std::to_string(index % options.outlets_per_class + 1);
    SynthesisConfig& c = item.config;
    c.duration_ms =
        RoundTo(rng.Uniform(options.min_duration_ms, options.max_duration_ms), 100.0);
    const double bpm = rng.Uniform(options.min_bpm, options.max_bpm);
    c.breaths_per_minute = real ? bpm : 0.0;
    const double f0 = rng.Uniform(85.0, 220.0);
    c.f0_min_hz = f0;
    c.f0_max_hz = 1.4 * f0;
    c.breath_low_hz = rng.Uniform(250.0, 400.0);
    c.breath_high_hz = rng.Uniform(1700.0, 2300.0);
    c.breath_band_level_db = rng.Uniform(-40.0, -32.0);
    c.speech_band_level_db = rng.Uniform(-23.0, -17.0);
    c.noise_floor_db = rng.Uniform(-70.0, -60.0);
    c.pauses_per_minute = rng.Uniform(4.0, 10.0);
    c.rng_seed = DeriveSeed(seed, items.size());
    items.push_back(std::move(item));
  };
  for (int i = 0; i < n_real; ++i) add(true, i);
  for (int i = 0; i < n_fake; ++i) add(false, i);
  return items;
}

std::vector<SynthesisItem> PodcastCorpusPlan(int n_podcasts, int n_speakers,
                                             std::uint64_t seed,
                                             const PodcastPlanOptions& options) {
  if (n_podcasts < 1 || n_speakers < 1 || n_speakers > n_podcasts) {
    throw ConfigError("podcast plan: need 1 <= speakers <= podcasts");
  }
  struct Voice {
    double f0, breath_low, breath_high, breath_level, speech_level;
  };
  std::vector<Voice> voices;
  for (int s = 0; s < n_speakers; ++s) {
    Rng r(DeriveSeed(seed, 1000 + static_cast<std::uint64_t>(s)));
    Voice v;
    v.f0 = r.Uniform(85.0, 230.0);
    v.breath_low = r.Uniform(200.0, 600.0);
    v.breath_high = r.Uniform(1200.0, 3000.0);
    v.breath_level = r.Uniform(-44.0, -30.0);
    v.speech_level = r.Uniform(-23.0, -17.0);
    voices.push_back(v);
  }
  Rng rng(seed);
  std::vector<SynthesisItem> items;
  for (int p = 0; p < n_podcasts; ++p) {
    const Voice& v = voices[static_cast<size_t>(p % n_speakers)];
    SynthesisItem item;
    item.id = NumberedId("podcast", p);
    item.label = SampleLabel::kReal;
    item.speaker_id = "speaker-" + std::to_string(p % n_speakers + 1);
    item.outlet = NumberedId("show", p);
    SynthesisConfig& c = item.config;
    c.duration_ms = options.duration_ms;
    c.breaths_per_minute = rng.Uniform(options.min_bpm, options.max_bpm);
    const double gain = rng.Uniform(-3.0, 3.0);
    c.f0_min_hz = v.f0;
    c.f0_max_hz = 1.4 * v.f0;
    c.breath_low_hz = v.breath_low;
    c.breath_high_hz = v.breath_high;
    c.breath_band_level_db = v.breath_level + gain + rng.Uniform(-2.0, 2.0);
    c.speech_band_level_db = v.speech_level + gain;
    c.noise_floor_db = rng.Uniform(-72.0, -56.0);
    c.channel_highpass_hz = rng.Uniform(60.0, 350.0);
    c.channel_lowpass_hz = rng.Uniform(2500.0, 7500.0);
    c.ambience_low_hz = rng.Uniform(150.0, 1200.0);
    c.ambience_high_hz = std::min(7000.0, c.ambience_low_hz * rng.Uniform(2.0, 5.0));
    c.ambience_level_db = rng.Uniform(-58.0, -44.0);
    c.pauses_per_minute = rng.Uniform(4.0, 10.0);
    c.rng_seed = DeriveSeed(seed, static_cast<std::uint64_t>(p));
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace breathline
