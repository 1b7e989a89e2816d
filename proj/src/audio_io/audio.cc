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

#include "breathline/audio.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "breathline/error.h"

namespace breathline {
namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  bool Has(size_t n) const { return pos_ + n <= bytes_.size(); }
  size_t pos() const { return pos_; }
  void Seek(size_t pos) { pos_ = pos; }

  std::string Tag() {
    Require(4);
    std::string s(reinterpret_cast<const char*>(&bytes_[pos_]), 4);
    pos_ += 4;
    return s;
  }
  std::uint16_t U16() {
    Require(2);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] |
                                                 (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t U32() {
    Require(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 4;
    return v;
  }

 private:
  void Require(size_t n) const {
    if (!Has(n)) throw FormatError("wav: truncated header");
  }
  const std::vector<std::uint8_t>& bytes_;
  size_t pos_ = 0;
};

std::string DescribeFormat(std::uint16_t tag, std::uint16_t bits) {
  std::ostringstream os;
  switch (tag) {
    case kFormatPcm:
      os << "PCM " << bits << "-bit";
      break;
    case kFormatFloat:
      os << "IEEE float " << bits << "-bit";
      break;
    case 0x0055:
      os << "MPEG layer 3 (format tag 0x0055)";
      break;
    case 0x0006:
      os << "A-law (format tag 0x0006)";
      break;
    case 0x0007:
      os << "mu-law (format tag 0x0007)";
      break;
    default:
      os << "format tag 0x" << std::hex << tag << std::dec << " " << bits
         << "-bit";
  }
  return os.str();
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

AudioBuffer ParseWav(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  if (r.Tag() != "RIFF") throw FormatError("wav: missing RIFF tag");
  r.U32();
  if (r.Tag() != "WAVE") throw FormatError("wav: missing WAVE tag");

  bool have_fmt = false;
  std::uint16_t tag = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  size_t data_size = 0;

  while (r.Has(8)) {
    std::string id = r.Tag();
    std::uint32_t size = r.U32();
    size_t body = r.pos();
    if (!r.Has(size)) {
      // Streaming writers sometimes leave a bogus data size; clamp to EOF.
      if (id != "data") throw FormatError("wav: chunk '" + id + "' truncated");
      size = static_cast<std::uint32_t>(bytes.size() - body);
    }
    if (id == "fmt ") {
      if (size < 16) throw FormatError("wav: fmt chunk too small");
      tag = r.U16();
      channels = r.U16();
      rate = r.U32();
      r.U32();
      block_align = r.U16();
      bits = r.U16();
      if (tag == kFormatExtensible) {
        if (size < 40) throw FormatError("wav: extensible fmt chunk too small");
        r.U16();  // cbSize
        r.U16();  // valid bits
        r.U32();  // channel mask
        tag = r.U16();  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.data() + body;
      data_size = size;
    }
    r.Seek(body + size + (size & 1));
  }
  if (!have_fmt) throw FormatError("wav: missing fmt chunk");
  if (data == nullptr) throw FormatError("wav: missing data chunk");
  if (rate == 0) throw FormatError("wav: zero sample rate");
  if (channels == 0) throw FormatError("wav: zero channels");

  const bool pcm16 = tag == kFormatPcm && bits == 16;
  const bool f32 = tag == kFormatFloat && bits == 32;
  if (!pcm16 && !f32) {
    throw UnsupportedError("wav: unsupported encoding " +
                           DescribeFormat(tag, bits));
  }
  if (channels > 2) {
    throw UnsupportedError("wav: unsupported channel count " +
                           std::to_string(channels));
  }
  const size_t bytes_per_sample = bits / 8;
  if (block_align != bytes_per_sample * channels) {
    throw FormatError("wav: block align inconsistent with format");
  }
  const size_t frames = data_size / block_align;

  AudioBuffer out;
  out.sample_rate = static_cast<int>(rate);
  out.samples.resize(frames);
  for (size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data + i * block_align + c * bytes_per_sample;
      if (pcm16) {
        auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
        acc += static_cast<double>(v) / 32768.0;
      } else {
        std::uint32_t u = static_cast<std::uint32_t>(p[0]) |
                          (static_cast<std::uint32_t>(p[1]) << 8) |
                          (static_cast<std::uint32_t>(p[2]) << 16) |
                          (static_cast<std::uint32_t>(p[3]) << 24);
        float f = std::bit_cast<float>(u);
        if (!std::isfinite(f)) throw FormatError("wav: non-finite sample");
        acc += static_cast<double>(f);
      }
    }
    double mono = acc / channels;
    out.samples[i] = static_cast<float>(std::clamp(mono, -1.0, 1.0));
  }
  return out;
}

AudioBuffer LoadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return ParseWav(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  } catch (const UnsupportedError& e) {
    throw UnsupportedError(path + ": " + e.what());
  }
}

std::vector<std::uint8_t> EncodeWav(const AudioBuffer& buffer,
                                    WavEncoding encoding) {
  const std::uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const std::uint16_t block = bits / 8;
  const auto data_bytes = static_cast<std::uint32_t>(buffer.samples.size() * block);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(buffer.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(buffer.sample_rate) * block);
  PutU16(out, block);
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (float s : buffer.samples) {
    if (encoding == WavEncoding::kPcm16) {
      double q = std::nearbyint(static_cast<double>(s) * 32768.0);
      auto v = static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
      PutU16(out, static_cast<std::uint16_t>(v));
    } else {
      PutU32(out, std::bit_cast<std::uint32_t>(s));
    }
  }
  return out;
}

void WriteWav(const std::string& path, const AudioBuffer& buffer,
              WavEncoding encoding) {
  auto bytes = EncodeWav(buffer, encoding);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path);
}

AudioBuffer Resample(const AudioBuffer& buffer, int target_rate) {
  if (target_rate <= 0) throw InputError("resample: target rate must be > 0");
  if (buffer.sample_rate <= 0) throw InputError("resample: bad source rate");
  if (target_rate == buffer.sample_rate) return buffer;

  const std::int64_t n_in = buffer.num_samples();
  const std::int64_t src = buffer.sample_rate;
  const std::int64_t dst = target_rate;
  const std::int64_t n_out = (n_in * dst + src / 2) / src;

  // Cutoff relative to the input Nyquist; narrower when decimating.
  const double cutoff = std::min(1.0, static_cast<double>(dst) / src) * 0.97;
  constexpr int kZeroCrossings = 24;
  const double half_width = kZeroCrossings / cutoff;
  constexpr double kBeta = 8.6;
  const double i0_beta = std::cyl_bessel_i(0.0, kBeta);

  // Output positions fall on dst/g distinct fractional phases of the input
  // grid, so the kernel is tabulated once per phase.
  const std::int64_t g = std::gcd(src, dst);
  const std::int64_t phases = dst / g;
  const int reach = static_cast<int>(std::ceil(half_width)) + 1;
  const int taps = 2 * reach + 1;
  std::vector<double> table(static_cast<size_t>(phases * taps), 0.0);
  for (std::int64_t p = 0; p < phases; ++p) {
    const double frac = static_cast<double>(p * g) / dst;
    for (int j = -reach; j <= reach; ++j) {
      const double u = frac - j;
      const double r = u / half_width;
      if (r <= -1.0 || r >= 1.0) continue;
      const double arg = M_PI * cutoff * u;
      const double sinc = u == 0.0 ? 1.0 : std::sin(arg) / arg;
      const double win =
          std::cyl_bessel_i(0.0, kBeta * std::sqrt(1.0 - r * r)) / i0_beta;
      table[static_cast<size_t>(p * taps + j + reach)] = cutoff * sinc * win;
    }
  }

  AudioBuffer out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<size_t>(n_out));
  const float* x = buffer.samples.data();
  for (std::int64_t n = 0; n < n_out; ++n) {
    const std::int64_t num = n * src;
    const std::int64_t base = num / dst;
    const std::int64_t phase = (num % dst) / g;
    const double* w = &table[static_cast<size_t>(phase * taps)];
    const std::int64_t lo = std::max<std::int64_t>(0, base - reach);
    const std::int64_t hi = std::min<std::int64_t>(n_in - 1, base + reach);
    double acc = 0.0;
    for (std::int64_t k = lo; k <= hi; ++k) acc += x[k] * w[k - base + reach];
    out.samples[static_cast<size_t>(n)] =
        static_cast<float>(std::clamp(acc, -1.0, 1.0));
  }
  return out;
}

AudioBuffer LoadCanonical(const std::string& path) {
  return Resample(LoadWav(path), kCanonicalSampleRate);
}

}  // namespace breathline
