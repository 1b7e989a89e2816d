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


#include "breathline/nn/layers.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "breathline/nn/train.h"
#include "breathline/random.h"

namespace breathline::nn {
namespace {

Tensor<double> RandomTensor(std::vector<int> shape, std::uint64_t seed, double scale = 1.0) {
  Tensor<double> t(std::move(shape));
  Rng rng(seed);
  for (auto& v : t.data) v = scale * rng.Gaussian();
  return t;
}

TEST(LossTest, AnalyticValues) {
  const std::vector<double> half(8, 0.5), ones(8, 1.0), zeros(8, 0.0);
  std::vector<double> targets = {1, 0, 1, 0, 1, 0, 1, 0};
  EXPECT_NEAR(BceLoss<double>(half, targets), std::log(2.0), 1e-12);
  const std::vector<double> p = {0.9}, y = {1.0};
  EXPECT_NEAR(BceLoss<double>(p, y), -std::log(0.9), 1e-12);
  EXPECT_NEAR(BceLoss<double>(p, y), 0.10536051565782628, 1e-12);
  // Perfect predictions cost only the clamp floor.
  EXPECT_LT(BceLoss<double>(ones, ones), 1e-6);
  EXPECT_LT(BceLoss<double>(zeros, zeros), 1e-6);
  EXPECT_TRUE(std::isfinite(BceLoss<double>(zeros, ones)));
}

TEST(LossTest, LogitGradientIsResidualOverCount) {
  const std::vector<double> p = {0.2, 0.7, 0.5, 0.9}, y = {0, 1, 1, 0};
  std::vector<double> g(4);
  BceLogitGrad<double>(p, y, g);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(g[i], (p[i] - y[i]) / 4.0);
}

TEST(BatchNormTest, TrainingOutputIsStandardized) {
  const auto x = RandomTensor({4, 50, 6}, 1, 3.0);
  Tensor<double> gamma({6}, 1.0), beta({6}, 0.0), rm({6}, 0.0), rv({6}, 1.0), y;
  for (int c = 0; c < 6; ++c) gamma.data[c] = 1.0 + c;  // xhat must not depend on gamma
  BatchNormParams<double> p{&gamma, &beta, &rm, &rv, 1e-5, 0.1};
  BatchNormCache<double> cache;
  BatchNormTrainForward(x, p, &y, &cache);
  for (int c = 0; c < 6; ++c) {
    double mean = 0.0, sq = 0.0;
    const int n = 4 * 50;
    for (int i = 0; i < n; ++i) mean += cache.xhat.data[i * 6 + c];
    mean /= n;
    for (int i = 0; i < n; ++i) sq += std::pow(cache.xhat.data[i * 6 + c] - mean, 2);
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(sq / n, 1.0, 1e-5);
  }
  // Running buffers moved toward the batch statistics.
  for (int c = 0; c < 6; ++c) EXPECT_NE(rv.data[c], 1.0);
}

TEST(BatchNormTest, InferenceUsesRunningStatistics) {
  Tensor<double> x({1, 2, 1});
  x.data = {3.0, 5.0};
  Tensor<double> gamma({1}, 2.0), beta({1}, 1.0), rm({1}, 1.0), rv({1}, 4.0), y;
  BatchNormInferForward(x, {&gamma, &beta, &rm, &rv, 0.0, 0.1}, &y);
  EXPECT_DOUBLE_EQ(y.data[0], 2.0 * (3.0 - 1.0) / 2.0 + 1.0);
  EXPECT_DOUBLE_EQ(y.data[1], 2.0 * (5.0 - 1.0) / 2.0 + 1.0);
}

TEST(MaxPoolTest, LengthsAndGradientRouting) {
  EXPECT_EQ(PooledLength(800, 3, 4), 200);
  EXPECT_EQ(PooledLength(200, 3, 5), 40);
  for (int stride : {4, 5}) {
    const auto x = RandomTensor({2, 23, 3}, 7 + stride);
    Tensor<double> y;
    std::vector<std::int32_t> argmax;
    MaxPoolForward(x, 3, stride, &y, &argmax);
    const auto dy = RandomTensor(y.shape, 99);
    Tensor<double> dx;
    MaxPoolBackward(argmax, x.shape, dy, &dx);
    double up = 0.0, down = 0.0;
    for (double v : dy.data) up += v;
    for (double v : dx.data) down += v;
    EXPECT_NEAR(up, down, 1e-12);
    // Every pooled value is the maximum of its window and came from argmax.
    const int out_len = y.dim(1);
    for (int b = 0; b < 2; ++b) {
      for (int t = 0; t < out_len; ++t) {
        for (int c = 0; c < 3; ++c) {
          double best = -1e300;
          for (int k = 0; k < 3; ++k) best = std::max(best, x.data[(b * 23 + t * stride + k) * 3 + c]);
          EXPECT_EQ(y.data[(b * out_len + t) * 3 + c], best);
          const int src = argmax[(b * out_len + t) * 3 + c];
          EXPECT_GE(src, t * stride);
          EXPECT_LT(src, t * stride + 3);
        }
      }
    }
  }
}

TEST(DropoutTest, MaskIsSeededAndInverted) {
  const auto x = RandomTensor({2, 100, 8}, 3);
  Tensor<double> y1, y2;
  std::vector<double> m1, m2;
  DropoutForward(x, 0.2, 42, &y1, &m1);
  DropoutForward(x, 0.2, 42, &y2, &m2);
  EXPECT_EQ(m1, m2);
  EXPECT_EQ(y1.data, y2.data);
  int dropped = 0;
  for (double m : m1) {
    EXPECT_TRUE(m == 0.0 || std::abs(m - 1.25) < 1e-12);
    dropped += m == 0.0;
  }
  EXPECT_NEAR(dropped / 1600.0, 0.2, 0.04);
  DropoutForward(x, 0.2, 43, &y2, &m2);
  EXPECT_NE(m1, m2);
}

TEST(BiLstmTest, ZeroWeightsReduceToTheBiasPath) {
  const int hidden = 3, steps = 6;
  const auto x = RandomTensor({2, steps, 4}, 5);
  Tensor<double> w_ih({4, 4 * hidden}, 0.0), w_hh({hidden, 4 * hidden}, 0.0);
  auto bias = RandomTensor({4 * hidden}, 6);
  LstmWeights<double> w{&w_ih, &w_hh, &bias};
  Tensor<double> y;
  LstmCache<double> cf, cb;
  BiLstmForward(x, w, w, &y, &cf, &cb);
  ASSERT_EQ(y.shape, (std::vector<int>{2, steps, 2 * hidden}));
  auto sigmoid = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
  for (int j = 0; j < hidden; ++j) {
    const double i = sigmoid(bias.data[j]);
    const double f = sigmoid(bias.data[hidden + j]);
    const double g = std::tanh(bias.data[2 * hidden + j]);
    const double o = sigmoid(bias.data[3 * hidden + j]);
    double c = 0.0;
    std::vector<double> h(steps);
    for (int t = 0; t < steps; ++t) {
      c = f * c + i * g;
      h[t] = o * std::tanh(c);
    }
    for (int b = 0; b < 2; ++b) {
      for (int t = 0; t < steps; ++t) {
        // The forward direction at t has seen t + 1 steps; the backward
        // direction at t has seen steps - t.
        EXPECT_NEAR(y.data[(b * steps + t) * 2 * hidden + j], h[t], 1e-12);
        EXPECT_NEAR(y.data[(b * steps + t) * 2 * hidden + hidden + j], h[steps - 1 - t], 1e-12);
      }
    }
  }
}

TEST(DenseTest, ZeroHeadGivesOneHalfAndZeroBiasGradientForBalancedTargets) {
  const auto x = RandomTensor({2, 5, 4}, 8);
  Tensor<double> w({4}, 0.0), b({1}, 0.0), logits, probs;
  DenseSigmoidForward(x, w, b, &logits, &probs);
  for (double p : probs.data) EXPECT_EQ(p, 0.5);
  std::vector<double> targets(10);
  for (int i = 0; i < 10; ++i) targets[i] = i % 2;
  Tensor<double> dlogits(logits.shape);
  BceLogitGrad<double>(probs.data, targets, dlogits.data);
  Tensor<double> dw({4}, 0.0), db({1}, 0.0), dx;
  DenseBackward(x, w, dlogits, &dw, &db, &dx);
  EXPECT_NEAR(db.data[0], 0.0, 1e-15);
}

TEST(ConvTest, SamePaddingKeepsLengthAndMatchesDirectSum) {
  const auto x = RandomTensor({1, 7, 2}, 9);
  const auto w = RandomTensor({3 * 2, 4}, 10);
  const auto b = RandomTensor({4}, 11);
  Tensor<double> y;
  Conv1dForward(x, w, b, 3, &y);
  ASSERT_EQ(y.shape, (std::vector<int>{1, 7, 4}));
  for (int t = 0; t < 7; ++t) {
    for (int o = 0; o < 4; ++o) {
      double acc = b.data[o];
      for (int k = 0; k < 3; ++k) {
        const int src = t + k - 1;
        if (src < 0 || src >= 7) continue;
        for (int c = 0; c < 2; ++c) acc += x.data[src * 2 + c] * w.data[(k * 2 + c) * 4 + o];
      }
      EXPECT_NEAR(y.data[t * 4 + o], acc, 1e-12);
    }
  }
}

TEST(AdamTest, ZeroGradientLeavesParametersUnchanged) {
  Tensor<double> p({3});
  p.data = {1.0, -2.0, 3.0};
  const auto before = p.data;
  std::vector<Tensor<double>> grads = {Tensor<double>({3}, 0.0)};
  std::vector<Tensor<double>*> params = {&p};
  AdamState<double> state;
  for (int i = 0; i < 10; ++i) AdamStep<double>(params, grads, &state, {});
  EXPECT_EQ(p.data, before);
}

TEST(AdamTest, ConstantGradientStepApproachesLearningRate) {
  Tensor<double> p({1}, 0.0);
  std::vector<Tensor<double>> grads = {Tensor<double>({1}, 0.3)};
  std::vector<Tensor<double>*> params = {&p};
  AdamState<double> state;
  AdamConfig config;
  double step = 0.0;
  for (int t = 1; t <= 1000; ++t) {
    const double before = p.data[0];
    AdamStep<double>(params, grads, &state, config);
    step = before - p.data[0];
  }
  EXPECT_NEAR(step, config.lr, 1e-7);
}

TEST(AdamTest, FirstStepIsScaleInvariant) {
  Tensor<double> a({1}, 0.0), b({1}, 0.0);
  std::vector<Tensor<double>> grads = {Tensor<double>({1}, 0.01), Tensor<double>({1}, 0.02)};
  std::vector<Tensor<double>*> params = {&a, &b};
  AdamState<double> state;
  AdamStep<double>(params, grads, &state, {});
  EXPECT_NEAR(a.data[0], b.data[0], 1e-8);
  EXPECT_NEAR(a.data[0], -1e-3, 1e-8);
}

}  // namespace
}  // namespace breathline::nn
