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

#ifndef BREATHLINE_NN_TENSOR_H_
#define BREATHLINE_NN_TENSOR_H_

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "breathline/error.h"

namespace breathline::nn {

// Dense row-major tensor. Sequences use shape {batch, time, channels}.
// Storage aligned for Eigen's widest vector loads. Vectorized reductions
// peel to the first aligned element, so a fixed alignment also fixes the
// summation order and keeps results bit-reproducible.
template <typename T>
using AlignedVector = std::vector<T, Eigen::aligned_allocator<T>>;

template <typename T>
struct Tensor {
  std::vector<int> shape;
  AlignedVector<T> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s, T fill = T(0))
      : shape(std::move(s)), data(Count(shape), fill) {}

  static size_t Count(const std::vector<int>& s) {
    return std::accumulate(s.begin(), s.end(), size_t{1},
                           [](size_t a, int b) { return a * static_cast<size_t>(b); });
  }
  size_t size() const { return data.size(); }
  int dim(size_t i) const { return shape.at(i); }
  T* ptr() { return data.data(); }
  const T* ptr() const { return data.data(); }
  void Fill(T v) { std::fill(data.begin(), data.end(), v); }

  template <typename U>
  Tensor<U> Cast() const {
    Tensor<U> out;
    out.shape = shape;
    out.data.assign(data.begin(), data.end());
    return out;
  }
};

std::string ShapeString(const std::vector<int>& shape);

template <typename T>
void RequireShape(const Tensor<T>& t, const std::vector<int>& expected,
                  const char* what) {
  if (t.shape != expected) {
    throw ShapeError(std::string(what) + ": expected shape " +
                     ShapeString(expected) + ", got " + ShapeString(t.shape));
  }
}

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMatrix<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMatrix<T>>;
template <typename T>
using VecMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, 1>>;
template <typename T>
using ConstVecMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;

}  // namespace breathline::nn

#endif  // BREATHLINE_NN_TENSOR_H_
