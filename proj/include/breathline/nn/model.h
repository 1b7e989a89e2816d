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

#ifndef BREATHLINE_NN_MODEL_H_
#define BREATHLINE_NN_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "breathline/features.h"
#include "breathline/nn/layers.h"
#include "breathline/nn/tensor.h"

namespace breathline::nn {

inline constexpr const char* kModelVersion = "breathline-detector/1";

// Architecture of the breath detector:
//   conv(k=3, 16) -> BN -> ReLU -> maxpool(3, /4) -> dropout
//   conv(k=1, 8)  -> BN -> ReLU -> maxpool(3, /5) -> dropout
//   BiLSTM(H per direction) -> dense(2H -> 1) -> sigmoid
// With 800-frame chunks the two pools leave 40 output steps of 20 frames.
struct ModelConfig {
  int n_features = 130;
  int chunk_frames = 800;
  int conv1_filters = 16;
  int conv1_kernel = 3;
  int conv2_filters = 8;
  int conv2_kernel = 1;
  int pool_size = 3;
  int pool1_stride = 4;
  int pool2_stride = 5;
  double dropout = 0.2;
  int lstm_hidden = 64;
  double bn_eps = 1e-5;
  double bn_momentum = 0.1;

  void Validate() const;
  int OutputSteps() const;
  // chunk_frames / OutputSteps(); 20 for the defaults.
  int FramesPerStep() const;
  bool operator==(const ModelConfig&) const = default;
};

// Parameter slots. The running batch-norm statistics are stored alongside
// the trainable tensors but are never touched by the optimiser.
enum Param : int {
  kConv1Weight,
  kConv1Bias,
  kBn1Gamma,
  kBn1Beta,
  kConv2Weight,
  kConv2Bias,
  kBn2Gamma,
  kBn2Beta,
  kLstmFwdWih,
  kLstmFwdWhh,
  kLstmFwdBias,
  kLstmBwdWih,
  kLstmBwdWhh,
  kLstmBwdBias,
  kDenseWeight,
  kDenseBias,
  kNumTrainable,
  kBn1RunningMean = kNumTrainable,
  kBn1RunningVar,
  kBn2RunningMean,
  kBn2RunningVar,
  kNumTensors,
};

const char* ParamName(int index);

// Activations kept by a training-mode forward pass for the backward pass.
template <typename T>
struct ForwardCache {
  Tensor<T> input;
  Tensor<T> conv1, bn1_out, pool1, drop1;
  Tensor<T> conv2, bn2_out, pool2, drop2;
  Tensor<T> lstm_out, logits, probs;
  BatchNormCache<T> bn1, bn2;
  std::vector<std::int32_t> pool1_argmax, pool2_argmax;
  std::vector<T> drop1_mask, drop2_mask;
  LstmCache<T> lstm_fwd, lstm_bwd;
};

template <typename T>
class BreathDetector {
 public:
  explicit BreathDetector(const ModelConfig& config = {});

  const ModelConfig& config() const { return config_; }

  // Seeded uniform fan-in initialisation: every weight ~ U(-1/sqrt(fan_in),
  // 1/sqrt(fan_in)); conv and dense biases zero; BN gamma 1, beta 0; LSTM
  // forget-gate bias 1.
  void Initialize(std::uint64_t seed);

  // Inference: dropout off, running statistics. x is {B, chunk_frames,
  // n_features}; returns probabilities {B, OutputSteps()}.
  Tensor<T> Infer(const Tensor<T>& x) const;

  // Training-mode forward pass: batch statistics, dropout masks drawn from
  // `dropout_seed`. Running statistics are updated when requested.
  Tensor<T> ForwardTrain(const Tensor<T>& x, std::uint64_t dropout_seed,
                         ForwardCache<T>* cache,
                         bool update_running_stats = true);

  // Accumulates d(objective)/d(param) into grads given d(objective)/d(logit).
  // grads must come from ZeroGradients().
  void Backward(const ForwardCache<T>& cache, const Tensor<T>& dlogits,
                std::vector<Tensor<T>>* grads) const;

  std::vector<Tensor<T>> ZeroGradients() const;

  std::vector<Tensor<T>>& tensors() { return tensors_; }
  const std::vector<Tensor<T>>& tensors() const { return tensors_; }
  Tensor<T>& param(int i) { return tensors_[i]; }
  const Tensor<T>& param(int i) const { return tensors_[i]; }

  // SHA-256 over every tensor's float32 bytes.
  std::string ParameterDigest() const;

  template <typename U>
  BreathDetector<U> Cast() const {
    BreathDetector<U> out(config_);
    for (size_t i = 0; i < tensors_.size(); ++i)
      out.tensors()[i] = tensors_[i].template Cast<U>();
    return out;
  }

 private:
  void CheckInput(const Tensor<T>& x) const;

  ModelConfig config_;
  std::vector<Tensor<T>> tensors_;
};

extern template class BreathDetector<float>;
extern template class BreathDetector<double>;

// Splits a feature matrix into consecutive chunks, zero-padding the final
// chunk in the signal domain (rows of digital silence). Returns one
// probability per output step for the real frames: ceil(rows / FramesPerStep).
std::vector<float> PredictFile(const BreathDetector<float>& model,
                               const FeatureMatrix& features,
                               int max_batch = 32);

// Model file: 8-byte little-endian header length, JSON header
// {version, architecture, tensors: [{name, shape, offset}], payload_floats},
// then the row-major little-endian float32 payload.
void SaveModel(const BreathDetector<float>& model,
               const std::filesystem::path& path);
BreathDetector<float> LoadModel(const std::filesystem::path& path);
std::vector<std::uint8_t> SerializeModel(const BreathDetector<float>& model);
BreathDetector<float> DeserializeModel(const std::vector<std::uint8_t>& bytes);

}  // namespace breathline::nn

#endif  // BREATHLINE_NN_MODEL_H_
