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

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <ostream>

#include "breathline/error.h"
#include "json.hpp"

namespace breathline {
namespace {

// The FFTW planner is not re-entrant; execution on distinct plans is.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

std::int64_t HopMicros(const FeatureConfig& c) {
  return std::llround(c.hop_length_ms * 1000.0);
}

// Power spectrum of a Hann-windowed, zero-padded frame.
class PowerSpectrum {
 public:
  PowerSpectrum(int window, int fft_size)
      : window_(window), fft_size_(fft_size), hann_(window) {
    for (int n = 0; n < window; ++n) {
      hann_[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / window);
    }
    in_ = fftw_alloc_real(fft_size);
    out_ = fftw_alloc_complex(fft_size / 2 + 1);
    std::lock_guard<std::mutex> lock(PlannerMutex());
    // FFTW_ESTIMATE keeps the chosen algorithm, and hence the rounding,
    // identical across runs.
    plan_ = fftw_plan_dft_r2c_1d(fft_size, in_, out_, FFTW_ESTIMATE);
  }
  ~PowerSpectrum() {
    {
      std::lock_guard<std::mutex> lock(PlannerMutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  PowerSpectrum(const PowerSpectrum&) = delete;
  PowerSpectrum& operator=(const PowerSpectrum&) = delete;

  void Compute(std::span<const double> frame, std::span<double> power) {
    for (int n = 0; n < window_; ++n) in_[n] = frame[n] * hann_[n];
    std::fill(in_ + window_, in_ + fft_size_, 0.0);
    fftw_execute(plan_);
    for (int k = 0; k <= fft_size_ / 2; ++k) {
      power[k] = out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1];
    }
  }

 private:
  int window_;
  int fft_size_;
  std::vector<double> hann_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

struct FrameLoop {
  FrameLoop(const AudioBuffer& buffer, const FeatureConfig& config)
      : buffer(buffer), config(config) {
    config.Validate(buffer.sample_rate);
    window = config.WindowSamples(buffer.sample_rate);
    if (buffer.num_samples() < window) {
      throw InputError("features: audio shorter than one analysis window");
    }
    num_frames = NumFrames(buffer.num_samples(), buffer.sample_rate, config);
    frame.resize(window);
  }

  // Copies frame t into `frame`, zero-padding past the end of the buffer.
  void Load(std::int64_t t) {
    const std::int64_t start = FrameStart(t, buffer.sample_rate, config);
    const std::int64_t n = buffer.num_samples();
    for (int i = 0; i < window; ++i) {
      const std::int64_t s = start + i;
      frame[i] = s < n ? static_cast<double>(buffer.samples[s]) : 0.0;
    }
  }

  const AudioBuffer& buffer;
  const FeatureConfig& config;
  int window = 0;
  std::int64_t num_frames = 0;
  std::vector<double> frame;
};

double FrameZcr(std::span<const double> frame) {
  int changes = 0;
  for (size_t i = 1; i < frame.size(); ++i) {
    const bool a = frame[i - 1] >= 0.0;
    const bool b = frame[i] >= 0.0;
    changes += a != b;
  }
  return static_cast<double>(changes) / static_cast<double>(frame.size() - 1);
}

double FrameRmseDb(std::span<const double> frame, double db_floor) {
  double acc = 0.0;
  for (double s : frame) acc += s * s;
  const double rms = std::sqrt(acc / static_cast<double>(frame.size()));
  const double eps = std::pow(10.0, db_floor / 20.0);
  return std::max(20.0 * std::log10(std::max(rms, eps)), db_floor);
}

double PowerDb(double p, double db_floor) {
  const double eps = std::pow(10.0, db_floor / 10.0);
  return std::max(10.0 * std::log10(std::max(p, eps)), db_floor);
}

}  // namespace

void FeatureConfig::Validate(int sample_rate) const {
  if (sample_rate <= 0) throw ConfigError("features: sample rate must be > 0");
  if (!(hop_length_ms > 0.0)) throw ConfigError("features: hop must be > 0");
  if (!(window_length_ms > hop_length_ms)) {
    throw ConfigError("features: window must be longer than hop");
  }
  if (std::abs(hop_length_ms * 1000.0 - static_cast<double>(HopMicros(*this))) > 1e-6) {
    throw ConfigError("features: hop must be a whole number of microseconds");
  }
  if (n_mels < 1) throw ConfigError("features: n_mels must be >= 1");
  const int window = WindowSamples(sample_rate);
  if (window < 2) throw ConfigError("features: window shorter than 2 samples");
  if (fft_size != 0 && fft_size < window) {
    throw ConfigError("features: fft_size " + std::to_string(fft_size) +
                      " smaller than window of " + std::to_string(window) +
                      " samples");
  }
  const double fmax = MelFmax(sample_rate);
  if (mel_fmin < 0.0 || !(fmax > mel_fmin) || fmax > sample_rate / 2.0 + 1e-9) {
    throw ConfigError("features: need 0 <= mel_fmin < mel_fmax <= nyquist");
  }
}

int FeatureConfig::WindowSamples(int sample_rate) const {
  return static_cast<int>(std::llround(window_length_ms * sample_rate / 1000.0));
}

int FeatureConfig::FftSize(int sample_rate) const {
  if (fft_size > 0) return fft_size;
  int n = 1;
  while (n < WindowSamples(sample_rate)) n <<= 1;
  return n;
}

double FeatureConfig::MelFmax(int sample_rate) const {
  return mel_fmax > 0.0 ? mel_fmax : sample_rate / 2.0;
}

std::int64_t NumFrames(std::int64_t num_samples, int sample_rate,
                       const FeatureConfig& config) {
  // duration_ms / hop_ms = (n * 1000 / sr) / (hop_us / 1000)
  return (num_samples * 1000000) /
         (static_cast<std::int64_t>(sample_rate) * HopMicros(config));
}

std::int64_t FrameStart(std::int64_t frame, int sample_rate,
                        const FeatureConfig& config) {
  return (frame * HopMicros(config) * sample_rate) / 1000000;
}

double HzToMel(double hz) {
  constexpr double kFSp = 200.0 / 3.0;
  constexpr double kMinLogHz = 1000.0;
  constexpr double kMinLogMel = kMinLogHz / kFSp;
  const double logstep = std::log(6.4) / 27.0;
  if (hz < kMinLogHz) return hz / kFSp;
  return kMinLogMel + std::log(hz / kMinLogHz) / logstep;
}

double MelToHz(double mel) {
  constexpr double kFSp = 200.0 / 3.0;
  constexpr double kMinLogHz = 1000.0;
  constexpr double kMinLogMel = kMinLogHz / kFSp;
  const double logstep = std::log(6.4) / 27.0;
  if (mel < kMinLogMel) return mel * kFSp;
  return kMinLogHz * std::exp(logstep * (mel - kMinLogMel));
}

MelFilterbank::MelFilterbank(int n_mels, int fft_size, int sample_rate,
                             double fmin, double fmax)
    : n_mels_(n_mels), num_bins_(fft_size / 2 + 1) {
  const double mel_lo = HzToMel(fmin);
  const double mel_hi = HzToMel(fmax);
  std::vector<double> edges(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i) {
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1));
  }
  centers_hz_.assign(edges.begin() + 1, edges.end() - 1);
  first_bin_.resize(n_mels);
  weights_.resize(n_mels);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    int first = -1;
    std::vector<double> w;
    for (int k = 0; k < num_bins_; ++k) {
      const double f = static_cast<double>(k) * sample_rate / fft_size;
      const double rise = (f - lo) / (mid - lo);
      const double fall = (hi - f) / (hi - mid);
      const double v = std::max(0.0, std::min(rise, fall));
      if (v > 0.0) {
        if (first < 0) first = k;
        w.resize(static_cast<size_t>(k - first + 1), 0.0);
        w.back() = v;
      }
    }
    first_bin_[m] = std::max(first, 0);
    weights_[m] = std::move(w);
  }
}

double MelFilterbank::Weight(int m, int k) const {
  const int off = k - first_bin_[m];
  if (off < 0 || off >= static_cast<int>(weights_[m].size())) return 0.0;
  return weights_[m][off];
}

double MelFilterbank::Bandwidth(int m) const {
  double s = 0.0;
  for (double w : weights_[m]) s += w;
  return s;
}

void MelFilterbank::Apply(std::span<const double> power,
                          std::span<double> bands) const {
  for (int m = 0; m < n_mels_; ++m) {
    const auto& w = weights_[m];
    const double* p = power.data() + first_bin_[m];
    double acc = 0.0;
    for (size_t i = 0; i < w.size(); ++i) acc += w[i] * p[i];
    bands[m] = acc;
  }
}

std::vector<double> Zcr(const AudioBuffer& buffer, const FeatureConfig& config) {
  FrameLoop loop(buffer, config);
  std::vector<double> out(loop.num_frames);
  for (std::int64_t t = 0; t < loop.num_frames; ++t) {
    loop.Load(t);
    out[t] = FrameZcr(loop.frame);
  }
  return out;
}

std::vector<double> RmseDb(const AudioBuffer& buffer,
                           const FeatureConfig& config) {
  FrameLoop loop(buffer, config);
  std::vector<double> out(loop.num_frames);
  for (std::int64_t t = 0; t < loop.num_frames; ++t) {
    loop.Load(t);
    out[t] = FrameRmseDb(loop.frame, config.db_floor);
  }
  return out;
}

std::vector<double> MelSpectrogramDb(const AudioBuffer& buffer,
                                     const FeatureConfig& config) {
  FrameLoop loop(buffer, config);
  const int sr = buffer.sample_rate;
  const int fft = config.FftSize(sr);
  PowerSpectrum spectrum(loop.window, fft);
  MelFilterbank bank(config.n_mels, fft, sr, config.mel_fmin,
                     config.MelFmax(sr));
  std::vector<double> power(fft / 2 + 1), bands(config.n_mels);
  std::vector<double> out(static_cast<size_t>(loop.num_frames) * config.n_mels);
  for (std::int64_t t = 0; t < loop.num_frames; ++t) {
    loop.Load(t);
    spectrum.Compute(loop.frame, power);
    bank.Apply(power, bands);
    for (int m = 0; m < config.n_mels; ++m) {
      out[t * config.n_mels + m] = PowerDb(bands[m], config.db_floor);
    }
  }
  return out;
}

FeatureMatrix ExtractFeatures(const AudioBuffer& buffer,
                              const FeatureConfig& config) {
  FrameLoop loop(buffer, config);
  const int sr = buffer.sample_rate;
  const int fft = config.FftSize(sr);
  PowerSpectrum spectrum(loop.window, fft);
  MelFilterbank bank(config.n_mels, fft, sr, config.mel_fmin,
                     config.MelFmax(sr));

  FeatureMatrix m;
  m.rows = loop.num_frames;
  m.cols = config.num_features();
  m.config = config;
  m.sample_rate = sr;
  m.source_duration_ms = buffer.duration_ms();
  m.data.resize(static_cast<size_t>(m.rows) * m.cols);

  std::vector<double> power(fft / 2 + 1), bands(config.n_mels);
  for (std::int64_t t = 0; t < loop.num_frames; ++t) {
    loop.Load(t);
    spectrum.Compute(loop.frame, power);
    bank.Apply(power, bands);
    float* row = m.data.data() + t * m.cols;
    for (int k = 0; k < config.n_mels; ++k) {
      row[k] = static_cast<float>(PowerDb(bands[k], config.db_floor));
    }
    row[config.zcr_column()] = static_cast<float>(FrameZcr(loop.frame));
    row[config.rmse_column()] =
        static_cast<float>(FrameRmseDb(loop.frame, config.db_floor));
  }
  return m;
}

std::vector<float> SilenceRow(const FeatureConfig& config) {
  std::vector<float> row(config.num_features(),
                         static_cast<float>(config.db_floor));
  row[config.zcr_column()] = 0.0f;
  return row;
}

namespace {

nlohmann::json ConfigToJson(const FeatureConfig& c) {
  return {{"window_length_ms", c.window_length_ms},
          {"hop_length_ms", c.hop_length_ms},
          {"n_mels", c.n_mels},
          {"fft_size", c.fft_size},
          {"mel_fmin", c.mel_fmin},
          {"mel_fmax", c.mel_fmax},
          {"db_floor", c.db_floor}};
}

FeatureConfig ConfigFromJson(const nlohmann::json& j) {
  FeatureConfig c;
  c.window_length_ms = j.at("window_length_ms").get<double>();
  c.hop_length_ms = j.at("hop_length_ms").get<double>();
  c.n_mels = j.at("n_mels").get<int>();
  c.fft_size = j.at("fft_size").get<int>();
  c.mel_fmin = j.at("mel_fmin").get<double>();
  c.mel_fmax = j.at("mel_fmax").get<double>();
  c.db_floor = j.at("db_floor").get<double>();
  return c;
}

}  // namespace

void SaveFeatureMatrix(const std::filesystem::path& path, const FeatureMatrix& m) {
  nlohmann::json header = {{"rows", m.rows},
                           {"cols", m.cols},
                           {"dtype", "f32"},
                           {"config", ConfigToJson(m.config)},
                           {"sample_rate", m.sample_rate},
                           {"source_duration_ms", m.source_duration_ms}};
  const std::string text = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  std::uint64_t len = text.size();
  unsigned char len_bytes[8];
  for (int i = 0; i < 8; ++i) len_bytes[i] = static_cast<unsigned char>(len >> (8 * i));
  out.write(reinterpret_cast<const char*>(len_bytes), 8);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  static_assert(std::endian::native == std::endian::little);
  out.write(reinterpret_cast<const char*>(m.data.data()),
            static_cast<std::streamsize>(m.data.size() * sizeof(float)));
}

FeatureMatrix LoadFeatureMatrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  unsigned char len_bytes[8];
  if (!in.read(reinterpret_cast<char*>(len_bytes), 8)) {
    throw FormatError(path.string() + ": truncated header");
  }
  std::uint64_t len = 0;
  for (int i = 7; i >= 0; --i) len = (len << 8) | len_bytes[i];
  if (len > (1u << 20)) throw FormatError(path.string() + ": header too large");
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len))) {
    throw FormatError(path.string() + ": truncated header");
  }
  FeatureMatrix m;
  try {
    auto header = nlohmann::json::parse(text);
    if (header.at("dtype") != "f32") throw FormatError("unsupported dtype");
    m.rows = header.at("rows").get<std::int64_t>();
    m.cols = header.at("cols").get<int>();
    m.config = ConfigFromJson(header.at("config"));
    m.sample_rate = header.at("sample_rate").get<int>();
    m.source_duration_ms = header.at("source_duration_ms").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": bad header: " + e.what());
  }
  m.data.resize(static_cast<size_t>(m.rows) * m.cols);
  if (!in.read(reinterpret_cast<char*>(m.data.data()),
               static_cast<std::streamsize>(m.data.size() * sizeof(float)))) {
    throw FormatError(path.string() + ": truncated payload");
  }
  return m;
}

void WriteFeatureCsv(std::ostream& out, const FeatureMatrix& m) {
  for (int c = 0; c < m.config.n_mels; ++c) out << "mel" << c << ',';
  out << "zcr,rmse_db\n";
  out.precision(9);
  for (std::int64_t r = 0; r < m.rows; ++r) {
    auto row = m.Row(r);
    for (int c = 0; c < m.cols; ++c) {
      out << row[c] << (c + 1 == m.cols ? '\n' : ',');
    }
  }
}

}  // namespace breathline
