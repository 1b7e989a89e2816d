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

#ifndef BREATHLINE_NN_LAYERS_H_
#define BREATHLINE_NN_LAYERS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "breathline/nn/tensor.h"

// Forward and backward kernels for each layer of the breath detector.
// Sequences are {batch, time, channels}. Backward functions accumulate into
// parameter gradients (callers zero them) and overwrite input gradients.
namespace breathline::nn {

// Same-padded 1D convolution over time. weight is {kernel * in, out} with row
// index k * in + c; bias is {out}.
template <typename T>
void Conv1dForward(const Tensor<T>& x, const Tensor<T>& weight,
                   const Tensor<T>& bias, int kernel, Tensor<T>* y);
// dx may be null when the input gradient is not needed.
template <typename T>
void Conv1dBackward(const Tensor<T>& x, const Tensor<T>& weight, int kernel,
                    const Tensor<T>& dy, Tensor<T>* dweight, Tensor<T>* dbias,
                    Tensor<T>* dx);

// Batch normalisation per channel over all (batch, time) positions.
template <typename T>
struct BatchNormCache {
  Tensor<T> xhat;
  std::vector<T> inv_std;
};

template <typename T>
struct BatchNormParams {
  const Tensor<T>* gamma;
  const Tensor<T>* beta;
  Tensor<T>* running_mean;  // updated in training mode when non-null
  Tensor<T>* running_var;
  double eps;
  double momentum;
};

// Training mode: normalises with batch statistics (biased variance) and, if
// running buffers are given, blends the batch mean and unbiased variance into
// them with `momentum`.
template <typename T>
void BatchNormTrainForward(const Tensor<T>& x, const BatchNormParams<T>& p,
                           Tensor<T>* y, BatchNormCache<T>* cache);
template <typename T>
void BatchNormInferForward(const Tensor<T>& x, const BatchNormParams<T>& p,
                           Tensor<T>* y);
template <typename T>
void BatchNormBackward(const BatchNormCache<T>& cache, const Tensor<T>& gamma,
                       const Tensor<T>& dy, Tensor<T>* dgamma,
                       Tensor<T>* dbeta, Tensor<T>* dx);

template <typename T>
void ReluForward(Tensor<T>* x);
// Masks dy in place where the ReLU output y was not positive.
template <typename T>
void ReluBackward(const Tensor<T>& y, Tensor<T>* dy);

// Valid max pooling over time: out_len = (len - size) / stride + 1. The
// earliest maximum wins ties; argmax holds the source time index.
int PooledLength(int length, int size, int stride);
template <typename T>
void MaxPoolForward(const Tensor<T>& x, int size, int stride, Tensor<T>* y,
                    std::vector<std::int32_t>* argmax);
template <typename T>
void MaxPoolBackward(const std::vector<std::int32_t>& argmax,
                     const std::vector<int>& input_shape, const Tensor<T>& dy,
                     Tensor<T>* dx);

// Inverted dropout. The mask holds 0 or 1/(1-rate) and is drawn from a
// SplitMix64 stream seeded with `seed`, so equal seeds give equal masks.
template <typename T>
void DropoutForward(const Tensor<T>& x, double rate, std::uint64_t seed,
                    Tensor<T>* y, std::vector<T>* mask);
template <typename T>
void DropoutBackward(const std::vector<T>& mask, const Tensor<T>& dy,
                     Tensor<T>* dx);

// One LSTM direction. Gate order i, f, g, o. w_ih {in, 4H}, w_hh {H, 4H},
// bias {4H}.
template <typename T>
struct LstmWeights {
  const Tensor<T>* w_ih;
  const Tensor<T>* w_hh;
  const Tensor<T>* bias;
};

template <typename T>
struct LstmGrads {
  Tensor<T>* w_ih;
  Tensor<T>* w_hh;
  Tensor<T>* bias;
};

template <typename T>
struct LstmCache {
  int batch = 0, time = 0, hidden = 0;
  bool reverse = false;
  RowMatrix<T> x;      // {time * batch, in}, time-major
  RowMatrix<T> gates;  // activated gates, {time * batch, 4H}
  RowMatrix<T> c;      // cell state, {time * batch, H}
  RowMatrix<T> h;      // hidden state, {time * batch, H}
};

// Bidirectional layer: output {B, T, 2H} = [forward h, backward h].
template <typename T>
void BiLstmForward(const Tensor<T>& x, const LstmWeights<T>& fwd,
                   const LstmWeights<T>& bwd, Tensor<T>* y,
                   LstmCache<T>* fwd_cache, LstmCache<T>* bwd_cache);
template <typename T>
void BiLstmBackward(const LstmCache<T>& fwd_cache, const LstmCache<T>& bwd_cache,
                    const LstmWeights<T>& fwd, const LstmWeights<T>& bwd,
                    const Tensor<T>& dy, const LstmGrads<T>& dfwd,
                    const LstmGrads<T>& dbwd, Tensor<T>* dx);

// Per-step dense projection to one logit followed by a sigmoid.
// x {B, T, D}, weight {D}, bias {1}; logits and probabilities are {B, T}.
template <typename T>
void DenseSigmoidForward(const Tensor<T>& x, const Tensor<T>& weight,
                         const Tensor<T>& bias, Tensor<T>* logits,
                         Tensor<T>* probs);
// Takes the gradient with respect to the logits.
template <typename T>
void DenseBackward(const Tensor<T>& x, const Tensor<T>& weight,
                   const Tensor<T>& dlogits, Tensor<T>* dweight,
                   Tensor<T>* dbias, Tensor<T>* dx);

// Mean binary cross-entropy with predictions clamped to [eps, 1 - eps].
template <typename T>
double BceLoss(std::span<const T> probs, std::span<const T> targets,
               double eps = 1e-7);
// d(mean BCE)/d(logit) = (p - y) / N.
template <typename T>
void BceLogitGrad(std::span<const T> probs, std::span<const T> targets,
                  std::span<T> dlogits);

}  // namespace breathline::nn

#endif  // BREATHLINE_NN_LAYERS_H_
