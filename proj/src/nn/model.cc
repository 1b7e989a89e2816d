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

#include "breathline/nn/model.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include "breathline/digest.h"
#include "breathline/error.h"
#include "breathline/random.h"
#include "json.hpp"

namespace breathline::nn {

namespace {

constexpr const char* kParamNames[kNumTensors] = {
    "conv1.weight",     "conv1.bias",       "bn1.gamma",       "bn1.beta",
    "conv2.weight",     "conv2.bias",       "bn2.gamma",       "bn2.beta",
    "lstm_fwd.w_ih",    "lstm_fwd.w_hh",    "lstm_fwd.bias",   "lstm_bwd.w_ih",
    "lstm_bwd.w_hh",    "lstm_bwd.bias",    "dense.weight",    "dense.bias",
    "bn1.running_mean", "bn1.running_var",  "bn2.running_mean", "bn2.running_var",
};

nlohmann::json ConfigToJson(const ModelConfig& c) {
  return {{"n_features", c.n_features},       {"chunk_frames", c.chunk_frames},
          {"conv1_filters", c.conv1_filters}, {"conv1_kernel", c.conv1_kernel},
          {"conv2_filters", c.conv2_filters}, {"conv2_kernel", c.conv2_kernel},
          {"pool_size", c.pool_size},         {"pool1_stride", c.pool1_stride},
          {"pool2_stride", c.pool2_stride},   {"dropout", c.dropout},
          {"lstm_hidden", c.lstm_hidden},     {"bn_eps", c.bn_eps},
          {"bn_momentum", c.bn_momentum}};
}

ModelConfig ConfigFromJson(const nlohmann::json& j) {
  ModelConfig c;
  c.n_features = j.at("n_features");
  c.chunk_frames = j.at("chunk_frames");
  c.conv1_filters = j.at("conv1_filters");
  c.conv1_kernel = j.at("conv1_kernel");
  c.conv2_filters = j.at("conv2_filters");
  c.conv2_kernel = j.at("conv2_kernel");
  c.pool_size = j.at("pool_size");
  c.pool1_stride = j.at("pool1_stride");
  c.pool2_stride = j.at("pool2_stride");
  c.dropout = j.at("dropout");
  c.lstm_hidden = j.at("lstm_hidden");
  c.bn_eps = j.at("bn_eps");
  c.bn_momentum = j.at("bn_momentum");
  return c;
}

std::vector<std::vector<int>> TensorShapes(const ModelConfig& c) {
  const int H = c.lstm_hidden;
  std::vector<std::vector<int>> s(kNumTensors);
  s[kConv1Weight] = {c.conv1_kernel * c.n_features, c.conv1_filters};
  s[kConv1Bias] = {c.conv1_filters};
  s[kBn1Gamma] = s[kBn1Beta] = {c.conv1_filters};
  s[kConv2Weight] = {c.conv2_kernel * c.conv1_filters, c.conv2_filters};
  s[kConv2Bias] = {c.conv2_filters};
  s[kBn2Gamma] = s[kBn2Beta] = {c.conv2_filters};
  s[kLstmFwdWih] = s[kLstmBwdWih] = {c.conv2_filters, 4 * H};
  s[kLstmFwdWhh] = s[kLstmBwdWhh] = {H, 4 * H};
  s[kLstmFwdBias] = s[kLstmBwdBias] = {4 * H};
  s[kDenseWeight] = {2 * H};
  s[kDenseBias] = {1};
  s[kBn1RunningMean] = s[kBn1RunningVar] = {c.conv1_filters};
  s[kBn2RunningMean] = s[kBn2RunningVar] = {c.conv2_filters};
  return s;
}

}  // namespace

const char* ParamName(int index) { return kParamNames[index]; }

void ModelConfig::Validate() const {
  if (n_features < 1 || chunk_frames < 1 || conv1_filters < 1 ||
      conv2_filters < 1 || lstm_hidden < 1) {
    throw ConfigError("model: sizes must be positive");
  }
  if (conv1_kernel < 1 || conv2_kernel < 1 || pool_size < 1 ||
      pool1_stride < 1 || pool2_stride < 1) {
    throw ConfigError("model: kernel, pool size and strides must be positive");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw ConfigError("model: dropout must lie in [0, 1)");
  }
  if (OutputSteps() < 1) {
    throw ConfigError("model: chunk too short for the pooling layers");
  }
}

int ModelConfig::OutputSteps() const {
  return PooledLength(PooledLength(chunk_frames, pool_size, pool1_stride),
                      pool_size, pool2_stride);
}

int ModelConfig::FramesPerStep() const {
  return pool1_stride * pool2_stride;
}

template <typename T>
BreathDetector<T>::BreathDetector(const ModelConfig& config) : config_(config) {
  config_.Validate();
  const auto shapes = TensorShapes(config_);
  tensors_.reserve(kNumTensors);
  for (const auto& s : shapes) tensors_.emplace_back(s);
  tensors_[kBn1Gamma].Fill(T(1));
  tensors_[kBn2Gamma].Fill(T(1));
  tensors_[kBn1RunningVar].Fill(T(1));
  tensors_[kBn2RunningVar].Fill(T(1));
}

template <typename T>
void BreathDetector<T>::Initialize(std::uint64_t seed) {
  Rng rng(seed);
  auto fill = [&rng](Tensor<T>& t, double bound) {
    for (auto& v : t.data) v = static_cast<T>(rng.Uniform(-bound, bound));
  };
  const auto& c = config_;
  const int H = c.lstm_hidden;
  fill(tensors_[kConv1Weight], 1.0 / std::sqrt(c.conv1_kernel * c.n_features));
  tensors_[kConv1Bias].Fill(T(0));
  fill(tensors_[kConv2Weight], 1.0 / std::sqrt(c.conv2_kernel * c.conv1_filters));
  tensors_[kConv2Bias].Fill(T(0));
  for (int p : {kLstmFwdWih, kLstmFwdWhh, kLstmBwdWih, kLstmBwdWhh}) {
    fill(tensors_[p], 1.0 / std::sqrt(static_cast<double>(H)));
  }
  for (int p : {kLstmFwdBias, kLstmBwdBias}) {
    auto& b = tensors_[p];
    b.Fill(T(0));
    for (int j = H; j < 2 * H; ++j) b.data[j] = T(1);
  }
  fill(tensors_[kDenseWeight], 1.0 / std::sqrt(2.0 * H));
  tensors_[kDenseBias].Fill(T(0));
  tensors_[kBn1Gamma].Fill(T(1));
  tensors_[kBn1Beta].Fill(T(0));
  tensors_[kBn2Gamma].Fill(T(1));
  tensors_[kBn2Beta].Fill(T(0));
  tensors_[kBn1RunningMean].Fill(T(0));
  tensors_[kBn1RunningVar].Fill(T(1));
  tensors_[kBn2RunningMean].Fill(T(0));
  tensors_[kBn2RunningVar].Fill(T(1));
}

template <typename T>
void BreathDetector<T>::CheckInput(const Tensor<T>& x) const {
  if (x.shape.size() != 3 || x.dim(1) != config_.chunk_frames ||
      x.dim(2) != config_.n_features || x.dim(0) < 1) {
    throw ShapeError("detector input: expected (B x " +
                     std::to_string(config_.chunk_frames) + " x " +
                     std::to_string(config_.n_features) + "), got " +
                     ShapeString(x.shape));
  }
}

template <typename T>
Tensor<T> BreathDetector<T>::Infer(const Tensor<T>& x) const {
  CheckInput(x);
  const auto& c = config_;
  const auto& p = tensors_;
  Tensor<T> a, b;
  std::vector<std::int32_t> argmax;
  BatchNormParams<T> bn1{&p[kBn1Gamma], &p[kBn1Beta],
                         const_cast<Tensor<T>*>(&p[kBn1RunningMean]),
                         const_cast<Tensor<T>*>(&p[kBn1RunningVar]), c.bn_eps,
                         c.bn_momentum};
  BatchNormParams<T> bn2{&p[kBn2Gamma], &p[kBn2Beta],
                         const_cast<Tensor<T>*>(&p[kBn2RunningMean]),
                         const_cast<Tensor<T>*>(&p[kBn2RunningVar]), c.bn_eps,
                         c.bn_momentum};
  Conv1dForward(x, p[kConv1Weight], p[kConv1Bias], c.conv1_kernel, &a);
  BatchNormInferForward(a, bn1, &b);
  ReluForward(&b);
  MaxPoolForward(b, c.pool_size, c.pool1_stride, &a, &argmax);
  Conv1dForward(a, p[kConv2Weight], p[kConv2Bias], c.conv2_kernel, &b);
  BatchNormInferForward(b, bn2, &a);
  ReluForward(&a);
  MaxPoolForward(a, c.pool_size, c.pool2_stride, &b, &argmax);
  LstmCache<T> fc, bc;
  BiLstmForward(b, {&p[kLstmFwdWih], &p[kLstmFwdWhh], &p[kLstmFwdBias]},
                {&p[kLstmBwdWih], &p[kLstmBwdWhh], &p[kLstmBwdBias]}, &a, &fc,
                &bc);
  Tensor<T> logits, probs;
  DenseSigmoidForward(a, p[kDenseWeight], p[kDenseBias], &logits, &probs);
  return probs;
}

template <typename T>
Tensor<T> BreathDetector<T>::ForwardTrain(const Tensor<T>& x,
                                          std::uint64_t dropout_seed,
                                          ForwardCache<T>* cache,
                                          bool update_running_stats) {
  CheckInput(x);
  const auto& c = config_;
  auto& p = tensors_;
  ForwardCache<T>& k = *cache;
  k.input = x;
  BatchNormParams<T> bn1{&p[kBn1Gamma], &p[kBn1Beta],
                         update_running_stats ? &p[kBn1RunningMean] : nullptr,
                         update_running_stats ? &p[kBn1RunningVar] : nullptr,
                         c.bn_eps, c.bn_momentum};
  BatchNormParams<T> bn2{&p[kBn2Gamma], &p[kBn2Beta],
                         update_running_stats ? &p[kBn2RunningMean] : nullptr,
                         update_running_stats ? &p[kBn2RunningVar] : nullptr,
                         c.bn_eps, c.bn_momentum};
  Conv1dForward(x, p[kConv1Weight], p[kConv1Bias], c.conv1_kernel, &k.conv1);
  BatchNormTrainForward(k.conv1, bn1, &k.bn1_out, &k.bn1);
  ReluForward(&k.bn1_out);
  MaxPoolForward(k.bn1_out, c.pool_size, c.pool1_stride, &k.pool1, &k.pool1_argmax);
  DropoutForward(k.pool1, c.dropout, DeriveSeed(dropout_seed, 1), &k.drop1,
                 &k.drop1_mask);
  Conv1dForward(k.drop1, p[kConv2Weight], p[kConv2Bias], c.conv2_kernel, &k.conv2);
  BatchNormTrainForward(k.conv2, bn2, &k.bn2_out, &k.bn2);
  ReluForward(&k.bn2_out);
  MaxPoolForward(k.bn2_out, c.pool_size, c.pool2_stride, &k.pool2, &k.pool2_argmax);
  DropoutForward(k.pool2, c.dropout, DeriveSeed(dropout_seed, 2), &k.drop2,
                 &k.drop2_mask);
  BiLstmForward(k.drop2, {&p[kLstmFwdWih], &p[kLstmFwdWhh], &p[kLstmFwdBias]},
                {&p[kLstmBwdWih], &p[kLstmBwdWhh], &p[kLstmBwdBias]},
                &k.lstm_out, &k.lstm_fwd, &k.lstm_bwd);
  DenseSigmoidForward(k.lstm_out, p[kDenseWeight], p[kDenseBias], &k.logits,
                      &k.probs);
  return k.probs;
}

template <typename T>
std::vector<Tensor<T>> BreathDetector<T>::ZeroGradients() const {
  std::vector<Tensor<T>> g;
  g.reserve(kNumTrainable);
  for (int i = 0; i < kNumTrainable; ++i) g.emplace_back(tensors_[i].shape);
  return g;
}

template <typename T>
void BreathDetector<T>::Backward(const ForwardCache<T>& k,
                                 const Tensor<T>& dlogits,
                                 std::vector<Tensor<T>>* grads) const {
  const auto& c = config_;
  const auto& p = tensors_;
  auto& g = *grads;
  RequireShape(dlogits, k.logits.shape, "backward dlogits");
  Tensor<T> d, e;
  DenseBackward(k.lstm_out, p[kDenseWeight], dlogits, &g[kDenseWeight],
                &g[kDenseBias], &d);
  BiLstmBackward(k.lstm_fwd, k.lstm_bwd,
                 {&p[kLstmFwdWih], &p[kLstmFwdWhh], &p[kLstmFwdBias]},
                 {&p[kLstmBwdWih], &p[kLstmBwdWhh], &p[kLstmBwdBias]}, d,
                 {&g[kLstmFwdWih], &g[kLstmFwdWhh], &g[kLstmFwdBias]},
                 {&g[kLstmBwdWih], &g[kLstmBwdWhh], &g[kLstmBwdBias]}, &e);
  DropoutBackward(k.drop2_mask, e, &d);
  MaxPoolBackward(k.pool2_argmax, k.bn2_out.shape, d, &e);
  ReluBackward(k.bn2_out, &e);
  BatchNormBackward(k.bn2, p[kBn2Gamma], e, &g[kBn2Gamma], &g[kBn2Beta], &d);
  Conv1dBackward(k.drop1, p[kConv2Weight], c.conv2_kernel, d, &g[kConv2Weight],
                 &g[kConv2Bias], &e);
  DropoutBackward(k.drop1_mask, e, &d);
  MaxPoolBackward(k.pool1_argmax, k.bn1_out.shape, d, &e);
  ReluBackward(k.bn1_out, &e);
  BatchNormBackward(k.bn1, p[kBn1Gamma], e, &g[kBn1Gamma], &g[kBn1Beta], &d);
  Conv1dBackward(k.input, p[kConv1Weight], c.conv1_kernel, d, &g[kConv1Weight],
                 &g[kConv1Bias], static_cast<Tensor<T>*>(nullptr));
}

template <typename T>
std::string BreathDetector<T>::ParameterDigest() const {
  Sha256 h;
  for (const auto& t : tensors_) {
    for (T v : t.data) {
      const float f = static_cast<float>(v);
      h.Update(std::string_view(reinterpret_cast<const char*>(&f), sizeof f));
    }
  }
  return h.HexDigest();
}

template class BreathDetector<float>;
template class BreathDetector<double>;

std::vector<float> PredictFile(const BreathDetector<float>& model,
                               const FeatureMatrix& features, int max_batch) {
  const auto& c = model.config();
  if (features.cols != c.n_features) {
    throw ShapeError("predict: feature matrix has " + std::to_string(features.cols) +
                     " columns, model expects " + std::to_string(c.n_features));
  }
  if (features.rows < 1) throw InputError("predict: empty feature matrix");
  const std::int64_t frames = features.rows;
  const int fps = c.FramesPerStep();
  const int steps_per_chunk = c.OutputSteps();
  const std::int64_t num_chunks = (frames + c.chunk_frames - 1) / c.chunk_frames;
  const std::int64_t valid_steps = (frames + fps - 1) / fps;
  const auto silence = SilenceRow(features.config);

  std::vector<float> out;
  out.reserve(static_cast<size_t>(num_chunks * steps_per_chunk));
  const size_t row_floats = static_cast<size_t>(c.n_features);
  for (std::int64_t first = 0; first < num_chunks; first += max_batch) {
    const int batch = static_cast<int>(std::min<std::int64_t>(max_batch, num_chunks - first));
    Tensor<float> x({batch, c.chunk_frames, c.n_features});
    for (int b = 0; b < batch; ++b) {
      for (int t = 0; t < c.chunk_frames; ++t) {
        const std::int64_t src = (first + b) * c.chunk_frames + t;
        float* dst = x.ptr() + (static_cast<size_t>(b) * c.chunk_frames + t) * row_floats;
        if (src < frames) {
          std::copy_n(features.data.data() + src * row_floats, row_floats, dst);
        } else {
          std::copy(silence.begin(), silence.end(), dst);
        }
      }
    }
    const auto probs = model.Infer(x);
    out.insert(out.end(), probs.data.begin(), probs.data.end());
  }
  out.resize(static_cast<size_t>(valid_steps));
  return out;
}

std::vector<std::uint8_t> SerializeModel(const BreathDetector<float>& model) {
  nlohmann::json index = nlohmann::json::array();
  size_t offset = 0;
  for (int i = 0; i < kNumTensors; ++i) {
    const auto& t = model.param(i);
    index.push_back({{"name", kParamNames[i]}, {"shape", t.shape}, {"offset", offset}});
    offset += t.size();
  }
  nlohmann::json header = {{"version", kModelVersion},
                           {"architecture", ConfigToJson(model.config())},
                           {"tensors", index},
                           {"payload_floats", offset}};
  const std::string text = header.dump();
  std::vector<std::uint8_t> out;
  out.reserve(8 + text.size() + offset * 4);
  const std::uint64_t len = text.size();
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
  out.insert(out.end(), text.begin(), text.end());
  for (int i = 0; i < kNumTensors; ++i) {
    for (float v : model.param(i).data) {
      const auto u = std::bit_cast<std::uint32_t>(v);
      for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
    }
  }
  return out;
}

BreathDetector<float> DeserializeModel(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8) throw FormatError("model: truncated header");
  std::uint64_t len = 0;
  for (int i = 7; i >= 0; --i) len = (len << 8) | bytes[i];
  if (len > bytes.size() - 8) throw FormatError("model: truncated header");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(len));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model: bad header: ") + e.what());
  }
  const std::string version = header.value("version", "");
  if (version != kModelVersion) {
    throw UnsupportedError("model: unsupported version '" + version +
                           "' (expected '" + kModelVersion + "')");
  }
  ModelConfig config;
  size_t payload_floats = 0;
  try {
    config = ConfigFromJson(header.at("architecture"));
    payload_floats = header.at("payload_floats").get<size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model: bad header: ") + e.what());
  }
  BreathDetector<float> model(config);
  const size_t payload_bytes = bytes.size() - 8 - len;
  if (payload_bytes != payload_floats * 4) {
    throw FormatError("model: payload has " + std::to_string(payload_bytes) +
                      " bytes, header declares " + std::to_string(payload_floats * 4));
  }
  const auto& index = header.at("tensors");
  if (!index.is_array() || index.size() != static_cast<size_t>(kNumTensors)) {
    throw FormatError("model: tensor index does not match the architecture");
  }
  const std::uint8_t* payload = bytes.data() + 8 + len;
  for (int i = 0; i < kNumTensors; ++i) {
    auto& t = model.param(i);
    const auto& entry = index[static_cast<size_t>(i)];
    if (entry.at("name") != kParamNames[i] ||
        entry.at("shape").get<std::vector<int>>() != t.shape) {
      throw FormatError(std::string("model: unexpected tensor entry for ") +
                        kParamNames[i]);
    }
    const size_t off = entry.at("offset").get<size_t>();
    if (off + t.size() > payload_floats) throw FormatError("model: tensor out of range");
    for (size_t j = 0; j < t.size(); ++j) {
      const std::uint8_t* q = payload + 4 * (off + j);
      const std::uint32_t u = static_cast<std::uint32_t>(q[0]) |
                              (static_cast<std::uint32_t>(q[1]) << 8) |
                              (static_cast<std::uint32_t>(q[2]) << 16) |
                              (static_cast<std::uint32_t>(q[3]) << 24);
      t.data[j] = std::bit_cast<float>(u);
    }
  }
  return model;
}

void SaveModel(const BreathDetector<float>& model,
               const std::filesystem::path& path) {
  const auto bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

BreathDetector<float> LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return DeserializeModel(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace breathline::nn
