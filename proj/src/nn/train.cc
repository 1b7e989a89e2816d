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

#include "breathline/nn/train.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "breathline/error.h"
#include "breathline/random.h"

namespace breathline::nn {

template <typename T>
void AdamStep(std::span<Tensor<T>* const> params,
              const std::vector<Tensor<T>>& grads, AdamState<T>* state,
              const AdamConfig& config) {
  if (grads.size() != params.size()) {
    throw ShapeError("adam: parameter and gradient counts differ");
  }
  if (state->m.empty()) {
    for (const auto* p : params) {
      state->m.emplace_back(p->shape);
      state->v.emplace_back(p->shape);
    }
  }
  ++state->t;
  const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(state->t));
  const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(state->t));
  const T b1 = static_cast<T>(config.beta1);
  const T b2 = static_cast<T>(config.beta2);
  const T step = static_cast<T>(config.lr / c1);
  const T inv_c2 = static_cast<T>(1.0 / c2);
  const T eps = static_cast<T>(config.eps);
  for (size_t i = 0; i < params.size(); ++i) {
    Tensor<T>& p = *params[i];
    RequireShape(grads[i], p.shape, "adam gradient");
    T* m = state->m[i].ptr();
    T* v = state->v[i].ptr();
    const T* g = grads[i].ptr();
    for (size_t j = 0; j < p.size(); ++j) {
      m[j] = b1 * m[j] + (1 - b1) * g[j];
      v[j] = b2 * v[j] + (1 - b2) * g[j] * g[j];
      p.data[j] -= step * m[j] / (std::sqrt(v[j] * inv_c2) + eps);
    }
  }
}

template void AdamStep<float>(std::span<Tensor<float>* const>,
                              const std::vector<Tensor<float>>&,
                              AdamState<float>*, const AdamConfig&);
template void AdamStep<double>(std::span<Tensor<double>* const>,
                               const std::vector<Tensor<double>>&,
                               AdamState<double>*, const AdamConfig&);

void TrainConfig::Validate() const {
  if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
  if (!(adam.lr > 0.0)) throw ConfigError("train: learning rate must be > 0");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0) ||
      !(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) {
    throw ConfigError("train: Adam betas must lie in [0, 1)");
  }
  if (!(adam.eps > 0.0)) throw ConfigError("train: Adam eps must be > 0");
  if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (patience < 0) throw ConfigError("train: patience must be >= 0");
}

void ChunkDataset::Add(std::shared_ptr<const FeatureMatrix> features,
                       std::int64_t start_frame,
                       std::vector<float> step_targets) {
  if (start_frame < 0 || start_frame + chunk_frames_ > features->rows) {
    throw InputError("chunk dataset: chunk exceeds the feature matrix");
  }
  if (static_cast<int>(step_targets.size()) != steps_per_chunk()) {
    throw ShapeError("chunk dataset: expected " +
                     std::to_string(steps_per_chunk()) + " step targets, got " +
                     std::to_string(step_targets.size()));
  }
  if (!chunks_.empty() && chunks_.front().features->cols != features->cols) {
    throw ShapeError("chunk dataset: inconsistent feature width");
  }
  chunks_.push_back({std::move(features), start_frame, std::move(step_targets)});
}

int ChunkDataset::AddSegment(const std::shared_ptr<const FeatureMatrix>& features,
                             const FrameLabels& labels, std::int64_t begin_frame,
                             std::int64_t end_frame) {
  if (labels.size() != features->rows) {
    throw ShapeError("chunk dataset: " + std::to_string(labels.size()) +
                     " frame labels for " + std::to_string(features->rows) +
                     " frames");
  }
  end_frame = std::min(end_frame, features->rows);
  int added = 0;
  for (std::int64_t s = begin_frame; s + chunk_frames_ <= end_frame;
       s += chunk_frames_) {
    FrameLabels slice;
    slice.window_length_ms = labels.window_length_ms;
    slice.hop_length_ms = labels.hop_length_ms;
    slice.labels.assign(labels.labels.begin() + s,
                        labels.labels.begin() + s + chunk_frames_);
    const auto steps = StepsFromFrames(slice, frames_per_step_);
    Add(features, s, std::vector<float>(steps.begin(), steps.end()));
    ++added;
  }
  return added;
}

void ChunkDataset::FillBatch(std::span<const size_t> indices, Tensor<float>* x,
                             Tensor<float>* y) const {
  const int b = static_cast<int>(indices.size());
  const int cols = chunks_.at(indices[0]).features->cols;
  x->shape = {b, chunk_frames_, cols};
  x->data.resize(static_cast<size_t>(b) * chunk_frames_ * cols);
  y->shape = {b, steps_per_chunk()};
  y->data.resize(static_cast<size_t>(b) * steps_per_chunk());
  const size_t chunk_floats = static_cast<size_t>(chunk_frames_) * cols;
  for (int i = 0; i < b; ++i) {
    const Chunk& c = chunks_.at(indices[i]);
    std::copy_n(c.features->data.data() + c.start_frame * cols, chunk_floats,
                x->ptr() + i * chunk_floats);
    std::copy(c.targets.begin(), c.targets.end(),
              y->ptr() + static_cast<size_t>(i) * steps_per_chunk());
  }
}

double EvaluateLoss(const BreathDetector<float>& model, const ChunkDataset& data,
                    int batch_size) {
  if (data.empty()) throw InputError("evaluate: empty dataset");
  double total = 0.0;
  size_t count = 0;
  std::vector<size_t> idx;
  Tensor<float> x, y;
  for (size_t first = 0; first < data.size(); first += batch_size) {
    idx.clear();
    for (size_t i = first; i < std::min(data.size(), first + batch_size); ++i)
      idx.push_back(i);
    data.FillBatch(idx, &x, &y);
    const auto probs = model.Infer(x);
    total += BceLoss<float>(probs.data, y.data) * static_cast<double>(y.size());
    count += y.size();
  }
  return total / static_cast<double>(count);
}

TrainResult Train(BreathDetector<float>* model, const ChunkDataset& train,
                  const ChunkDataset* validation, const TrainConfig& config) {
  config.Validate();
  if (train.empty()) throw InputError("train: empty dataset");
  if (train.chunk_frames() != model->config().chunk_frames ||
      train.steps_per_chunk() != model->config().OutputSteps()) {
    throw ShapeError("train: dataset chunking does not match the model");
  }
  const bool use_validation = validation != nullptr && !validation->empty();

  Rng shuffle_rng(DeriveSeed(config.seed, 0));
  const std::uint64_t dropout_base = DeriveSeed(config.seed, 1);
  std::vector<Tensor<float>*> params;
  for (int i = 0; i < kNumTrainable; ++i) params.push_back(&model->param(i));

  AdamState<float> adam;
  ForwardCache<float> cache;
  Tensor<float> x, y;
  Tensor<float> dlogits;
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), size_t{0});

  TrainResult result;
  double best = INFINITY;
  std::vector<Tensor<float>> best_tensors;
  int since_best = 0;
  std::uint64_t step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.Shuffle(order);
    double epoch_loss = 0.0;
    size_t epoch_count = 0;
    for (size_t first = 0; first < order.size(); first += config.batch_size) {
      const size_t last = std::min(order.size(), first + config.batch_size);
      train.FillBatch(std::span<const size_t>(order.data() + first, last - first),
                      &x, &y);
      const auto probs =
          model->ForwardTrain(x, DeriveSeed(dropout_base, step++), &cache);
      const double loss = BceLoss<float>(probs.data, y.data);
      if (!std::isfinite(loss)) {
        throw TrainingError("train: non-finite loss at epoch " +
                            std::to_string(epoch));
      }
      epoch_loss += loss * static_cast<double>(y.size());
      epoch_count += y.size();
      dlogits = Tensor<float>(probs.shape);
      BceLogitGrad<float>(probs.data, y.data, dlogits.data);
      auto grads = model->ZeroGradients();
      model->Backward(cache, dlogits, &grads);
      AdamStep<float>(params, grads, &adam, config.adam);
    }
    result.train_loss.push_back(epoch_loss / static_cast<double>(epoch_count));
    if (!use_validation) continue;
    const double val = EvaluateLoss(*model, *validation, config.batch_size);
    result.validation_loss.push_back(val);
    if (val < best) {
      best = val;
      best_tensors = model->tensors();
      result.best_epoch = epoch;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      result.early_stopped = true;
      break;
    }
  }
  if (use_validation && !best_tensors.empty()) model->tensors() = best_tensors;
  return result;
}

}  // namespace breathline::nn
