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

#ifndef BREATHLINE_NN_TRAIN_H_
#define BREATHLINE_NN_TRAIN_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "breathline/annotations.h"
#include "breathline/features.h"
#include "breathline/nn/model.h"
#include "breathline/nn/tensor.h"

namespace breathline::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamState {
  std::vector<Tensor<T>> m, v;
  std::int64_t t = 0;
};

// One bias-corrected Adam update. The state is sized on first use.
template <typename T>
void AdamStep(std::span<Tensor<T>* const> params,
              const std::vector<Tensor<T>>& grads, AdamState<T>* state,
              const AdamConfig& config);

struct TrainConfig {
  int batch_size = 32;
  AdamConfig adam;
  int epochs = 50;
  // Epochs without validation improvement before stopping; 0 disables.
  int patience = 5;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Fixed-length chunks of feature rows with their per-step targets. Rows are
// read from shared feature matrices when a batch is assembled.
class ChunkDataset {
 public:
  explicit ChunkDataset(int chunk_frames = 800, int frames_per_step = 20)
      : chunk_frames_(chunk_frames), frames_per_step_(frames_per_step) {}

  int chunk_frames() const { return chunk_frames_; }
  int steps_per_chunk() const { return chunk_frames_ / frames_per_step_; }
  size_t size() const { return chunks_.size(); }
  bool empty() const { return chunks_.empty(); }

  void Add(std::shared_ptr<const FeatureMatrix> features,
           std::int64_t start_frame, std::vector<float> step_targets);

  // Cuts [begin_frame, end_frame) into consecutive full chunks starting at
  // begin_frame; a trailing partial chunk is dropped. Returns chunks added.
  int AddSegment(const std::shared_ptr<const FeatureMatrix>& features,
                 const FrameLabels& labels, std::int64_t begin_frame,
                 std::int64_t end_frame);

  void FillBatch(std::span<const size_t> indices, Tensor<float>* x,
                 Tensor<float>* y) const;

 private:
  struct Chunk {
    std::shared_ptr<const FeatureMatrix> features;
    std::int64_t start_frame;
    std::vector<float> targets;
  };
  int chunk_frames_;
  int frames_per_step_;
  std::vector<Chunk> chunks_;
};

struct TrainResult {
  std::vector<double> train_loss;
  std::vector<double> validation_loss;
  int best_epoch = -1;  // 0-based; -1 without validation
  bool early_stopped = false;
};

// Trains in place. With a non-empty validation set the parameters of the
// epoch with the lowest validation loss are restored at the end.
TrainResult Train(BreathDetector<float>* model, const ChunkDataset& train,
                  const ChunkDataset* validation, const TrainConfig& config);

// Mean BCE of inference-mode predictions over a dataset.
double EvaluateLoss(const BreathDetector<float>& model,
                    const ChunkDataset& data, int batch_size = 32);

}  // namespace breathline::nn

#endif  // BREATHLINE_NN_TRAIN_H_
