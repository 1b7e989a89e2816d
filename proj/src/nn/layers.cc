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

#include <algorithm>
#include <cmath>
#include <sstream>

namespace breathline::nn {

std::string ShapeString(const std::vector<int>& shape) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? " x " : "") << shape[i];
  os << ')';
  return os.str();
}

namespace {

template <typename T>
T Sigmoid(T z) {
  if (z >= T(0)) return T(1) / (T(1) + std::exp(-z));
  const T e = std::exp(z);
  return e / (T(1) + e);
}

void RequireRank3(const std::vector<int>& shape, const char* what) {
  if (shape.size() != 3) {
    throw ShapeError(std::string(what) + ": expected rank-3 input, got " +
                     ShapeString(shape));
  }
}

std::uint64_t SplitMix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

template <typename T>
void Conv1dForward(const Tensor<T>& x, const Tensor<T>& weight,
                   const Tensor<T>& bias, int kernel, Tensor<T>* y) {
  RequireRank3(x.shape, "conv1d");
  const int B = x.dim(0), L = x.dim(1), cin = x.dim(2);
  const int cout = bias.dim(0);
  RequireShape(weight, {kernel * cin, cout}, "conv1d weight");
  const int pad = (kernel - 1) / 2;
  *y = Tensor<T>({B, L, cout});
  ConstMatMap<T> w(weight.ptr(), kernel * cin, cout);
  ConstVecMap<T> b(bias.ptr(), cout);
  for (int n = 0; n < B; ++n) {
    ConstMatMap<T> xb(x.ptr() + static_cast<size_t>(n) * L * cin, L, cin);
    MatMap<T> yb(y->ptr() + static_cast<size_t>(n) * L * cout, L, cout);
    yb.rowwise() = b.transpose();
    for (int k = 0; k < kernel; ++k) {
      const int off = k - pad;
      const int t0 = std::max(0, -off);
      const int t1 = std::min(L, L - off);
      if (t1 <= t0) continue;
      yb.middleRows(t0, t1 - t0).noalias() +=
          xb.middleRows(t0 + off, t1 - t0) * w.middleRows(k * cin, cin);
    }
  }
}

template <typename T>
void Conv1dBackward(const Tensor<T>& x, const Tensor<T>& weight, int kernel,
                    const Tensor<T>& dy, Tensor<T>* dweight, Tensor<T>* dbias,
                    Tensor<T>* dx) {
  const int B = x.dim(0), L = x.dim(1), cin = x.dim(2);
  const int cout = dy.dim(2);
  const int pad = (kernel - 1) / 2;
  ConstMatMap<T> w(weight.ptr(), kernel * cin, cout);
  MatMap<T> dw(dweight->ptr(), kernel * cin, cout);
  VecMap<T> db(dbias->ptr(), cout);
  if (dx) *dx = Tensor<T>(x.shape);
  for (int n = 0; n < B; ++n) {
    ConstMatMap<T> xb(x.ptr() + static_cast<size_t>(n) * L * cin, L, cin);
    ConstMatMap<T> dyb(dy.ptr() + static_cast<size_t>(n) * L * cout, L, cout);
    db += dyb.colwise().sum().transpose();
    for (int k = 0; k < kernel; ++k) {
      const int off = k - pad;
      const int t0 = std::max(0, -off);
      const int t1 = std::min(L, L - off);
      if (t1 <= t0) continue;
      dw.middleRows(k * cin, cin).noalias() +=
          xb.middleRows(t0 + off, t1 - t0).transpose() * dyb.middleRows(t0, t1 - t0);
      if (dx) {
        MatMap<T> dxb(dx->ptr() + static_cast<size_t>(n) * L * cin, L, cin);
        dxb.middleRows(t0 + off, t1 - t0).noalias() +=
            dyb.middleRows(t0, t1 - t0) * w.middleRows(k * cin, cin).transpose();
      }
    }
  }
}

template <typename T>
void BatchNormTrainForward(const Tensor<T>& x, const BatchNormParams<T>& p,
                           Tensor<T>* y, BatchNormCache<T>* cache) {
  RequireRank3(x.shape, "batchnorm");
  const size_t C = static_cast<size_t>(x.dim(2));
  const size_t N = x.size() / C;
  std::vector<double> mean(C, 0.0), var(C, 0.0);
  for (size_t r = 0; r < N; ++r)
    for (size_t c = 0; c < C; ++c) mean[c] += static_cast<double>(x.data[r * C + c]);
  for (size_t c = 0; c < C; ++c) mean[c] /= static_cast<double>(N);
  for (size_t r = 0; r < N; ++r)
    for (size_t c = 0; c < C; ++c) {
      const double d = static_cast<double>(x.data[r * C + c]) - mean[c];
      var[c] += d * d;
    }
  for (size_t c = 0; c < C; ++c) var[c] /= static_cast<double>(N);

  cache->inv_std.resize(C);
  for (size_t c = 0; c < C; ++c) {
    cache->inv_std[c] = static_cast<T>(1.0 / std::sqrt(var[c] + p.eps));
  }
  cache->xhat = Tensor<T>(x.shape);
  *y = Tensor<T>(x.shape);
  for (size_t r = 0; r < N; ++r) {
    for (size_t c = 0; c < C; ++c) {
      const size_t i = r * C + c;
      const T xh = static_cast<T>((static_cast<double>(x.data[i]) - mean[c]) *
                                  static_cast<double>(cache->inv_std[c]));
      cache->xhat.data[i] = xh;
      y->data[i] = p.gamma->data[c] * xh + p.beta->data[c];
    }
  }
  if (p.running_mean && p.running_var) {
    const double m = p.momentum;
    const double unbias = N > 1 ? static_cast<double>(N) / static_cast<double>(N - 1) : 1.0;
    for (size_t c = 0; c < C; ++c) {
      p.running_mean->data[c] = static_cast<T>(
          (1.0 - m) * static_cast<double>(p.running_mean->data[c]) + m * mean[c]);
      p.running_var->data[c] = static_cast<T>(
          (1.0 - m) * static_cast<double>(p.running_var->data[c]) + m * var[c] * unbias);
    }
  }
}

template <typename T>
void BatchNormInferForward(const Tensor<T>& x, const BatchNormParams<T>& p,
                           Tensor<T>* y) {
  RequireRank3(x.shape, "batchnorm");
  const size_t C = static_cast<size_t>(x.dim(2));
  const size_t N = x.size() / C;
  std::vector<T> scale(C), shift(C);
  for (size_t c = 0; c < C; ++c) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(p.running_var->data[c]) + p.eps);
    scale[c] = static_cast<T>(static_cast<double>(p.gamma->data[c]) * inv);
    shift[c] = static_cast<T>(static_cast<double>(p.beta->data[c]) -
                              static_cast<double>(p.running_mean->data[c]) *
                                  static_cast<double>(p.gamma->data[c]) * inv);
  }
  *y = Tensor<T>(x.shape);
  for (size_t r = 0; r < N; ++r)
    for (size_t c = 0; c < C; ++c)
      y->data[r * C + c] = x.data[r * C + c] * scale[c] + shift[c];
}

template <typename T>
void BatchNormBackward(const BatchNormCache<T>& cache, const Tensor<T>& gamma,
                       const Tensor<T>& dy, Tensor<T>* dgamma,
                       Tensor<T>* dbeta, Tensor<T>* dx) {
  const size_t C = static_cast<size_t>(dy.dim(2));
  const size_t N = dy.size() / C;
  std::vector<double> sum_dy(C, 0.0), sum_dy_xhat(C, 0.0);
  for (size_t r = 0; r < N; ++r)
    for (size_t c = 0; c < C; ++c) {
      const size_t i = r * C + c;
      sum_dy[c] += static_cast<double>(dy.data[i]);
      sum_dy_xhat[c] += static_cast<double>(dy.data[i]) *
                        static_cast<double>(cache.xhat.data[i]);
    }
  for (size_t c = 0; c < C; ++c) {
    dgamma->data[c] += static_cast<T>(sum_dy_xhat[c]);
    dbeta->data[c] += static_cast<T>(sum_dy[c]);
  }
  *dx = Tensor<T>(dy.shape);
  const double n = static_cast<double>(N);
  for (size_t r = 0; r < N; ++r)
    for (size_t c = 0; c < C; ++c) {
      const size_t i = r * C + c;
      const double k = static_cast<double>(gamma.data[c]) *
                       static_cast<double>(cache.inv_std[c]) / n;
      dx->data[i] = static_cast<T>(
          k * (n * static_cast<double>(dy.data[i]) - sum_dy[c] -
               static_cast<double>(cache.xhat.data[i]) * sum_dy_xhat[c]));
    }
}

template <typename T>
void ReluForward(Tensor<T>* x) {
  for (auto& v : x->data) v = v > T(0) ? v : T(0);
}

template <typename T>
void ReluBackward(const Tensor<T>& y, Tensor<T>* dy) {
  for (size_t i = 0; i < y.size(); ++i)
    if (!(y.data[i] > T(0))) dy->data[i] = T(0);
}

int PooledLength(int length, int size, int stride) {
  if (length < size) return 0;
  return (length - size) / stride + 1;
}

template <typename T>
void MaxPoolForward(const Tensor<T>& x, int size, int stride, Tensor<T>* y,
                    std::vector<std::int32_t>* argmax) {
  RequireRank3(x.shape, "maxpool");
  const int B = x.dim(0), L = x.dim(1), C = x.dim(2);
  const int out = PooledLength(L, size, stride);
  if (out < 1) {
    throw ShapeError("maxpool: sequence of length " + std::to_string(L) +
                     " shorter than pool size " + std::to_string(size));
  }
  *y = Tensor<T>({B, out, C});
  argmax->assign(y->size(), 0);
  for (int n = 0; n < B; ++n)
    for (int o = 0; o < out; ++o)
      for (int c = 0; c < C; ++c) {
        const int start = o * stride;
        int best = start;
        T best_v = x.data[(static_cast<size_t>(n) * L + start) * C + c];
        for (int j = 1; j < size; ++j) {
          const T v = x.data[(static_cast<size_t>(n) * L + start + j) * C + c];
          if (v > best_v) {
            best_v = v;
            best = start + j;
          }
        }
        const size_t oi = (static_cast<size_t>(n) * out + o) * C + c;
        y->data[oi] = best_v;
        (*argmax)[oi] = best;
      }
}

template <typename T>
void MaxPoolBackward(const std::vector<std::int32_t>& argmax,
                     const std::vector<int>& input_shape, const Tensor<T>& dy,
                     Tensor<T>* dx) {
  const int L = input_shape[1], C = input_shape[2];
  const int B = dy.dim(0), out = dy.dim(1);
  *dx = Tensor<T>(input_shape);
  for (int n = 0; n < B; ++n)
    for (int o = 0; o < out; ++o)
      for (int c = 0; c < C; ++c) {
        const size_t oi = (static_cast<size_t>(n) * out + o) * C + c;
        dx->data[(static_cast<size_t>(n) * L + argmax[oi]) * C + c] += dy.data[oi];
      }
}

template <typename T>
void DropoutForward(const Tensor<T>& x, double rate, std::uint64_t seed,
                    Tensor<T>* y, std::vector<T>* mask) {
  *y = Tensor<T>(x.shape);
  mask->resize(x.size());
  const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
  std::uint64_t state = seed;
  for (size_t i = 0; i < x.size(); ++i) {
    const double u = static_cast<double>(SplitMix64(state) >> 11) * 0x1.0p-53;
    const T m = u >= rate ? keep_scale : T(0);
    (*mask)[i] = m;
    y->data[i] = x.data[i] * m;
  }
}

template <typename T>
void DropoutBackward(const std::vector<T>& mask, const Tensor<T>& dy,
                     Tensor<T>* dx) {
  *dx = Tensor<T>(dy.shape);
  for (size_t i = 0; i < dy.size(); ++i) dx->data[i] = dy.data[i] * mask[i];
}

namespace {

template <typename T>
void LstmDirectionForward(const Tensor<T>& x, const LstmWeights<T>& w,
                          bool reverse, LstmCache<T>* cache) {
  const int B = x.dim(0), L = x.dim(1), in = x.dim(2);
  const int H = w.w_hh->dim(0);
  const int G = 4 * H;
  cache->batch = B;
  cache->time = L;
  cache->hidden = H;
  cache->reverse = reverse;
  cache->x.resize(static_cast<Eigen::Index>(L) * B, in);
  for (int n = 0; n < B; ++n)
    for (int t = 0; t < L; ++t)
      for (int c = 0; c < in; ++c)
        cache->x(t * B + n, c) = x.data[(static_cast<size_t>(n) * L + t) * in + c];

  ConstMatMap<T> w_ih(w.w_ih->ptr(), in, G);
  ConstMatMap<T> w_hh(w.w_hh->ptr(), H, G);
  ConstVecMap<T> bias(w.bias->ptr(), G);
  cache->gates.noalias() = cache->x * w_ih;
  cache->gates.rowwise() += bias.transpose();
  cache->c.resize(static_cast<Eigen::Index>(L) * B, H);
  cache->h.resize(static_cast<Eigen::Index>(L) * B, H);

  for (int s = 0; s < L; ++s) {
    const int t = reverse ? L - 1 - s : s;
    const int tp = reverse ? t + 1 : t - 1;
    auto g = cache->gates.middleRows(t * B, B);
    if (s > 0) g.noalias() += cache->h.middleRows(tp * B, B) * w_hh;
    for (int n = 0; n < B; ++n) {
      for (int j = 0; j < H; ++j) {
        const T i_g = Sigmoid(g(n, j));
        const T f_g = Sigmoid(g(n, H + j));
        const T c_g = std::tanh(g(n, 2 * H + j));
        const T o_g = Sigmoid(g(n, 3 * H + j));
        g(n, j) = i_g;
        g(n, H + j) = f_g;
        g(n, 2 * H + j) = c_g;
        g(n, 3 * H + j) = o_g;
        const T c_prev = s > 0 ? cache->c(tp * B + n, j) : T(0);
        const T c_new = f_g * c_prev + i_g * c_g;
        cache->c(t * B + n, j) = c_new;
        cache->h(t * B + n, j) = o_g * std::tanh(c_new);
      }
    }
  }
}

// dy_dir is {time * batch, H} time-major. Adds into dx_tm {time * batch, in}.
template <typename T>
void LstmDirectionBackward(const LstmCache<T>& cache, const LstmWeights<T>& w,
                           const RowMatrix<T>& dy_dir, const LstmGrads<T>& grads,
                           RowMatrix<T>* dx_tm) {
  const int B = cache.batch, L = cache.time, H = cache.hidden;
  const int G = 4 * H;
  const int in = static_cast<int>(cache.x.cols());
  ConstMatMap<T> w_ih(w.w_ih->ptr(), in, G);
  ConstMatMap<T> w_hh(w.w_hh->ptr(), H, G);
  MatMap<T> dw_ih(grads.w_ih->ptr(), in, G);
  MatMap<T> dw_hh(grads.w_hh->ptr(), H, G);
  VecMap<T> dbias(grads.bias->ptr(), G);

  RowMatrix<T> dgates(static_cast<Eigen::Index>(L) * B, G);
  RowMatrix<T> dh_next = RowMatrix<T>::Zero(B, H);
  RowMatrix<T> dc_next = RowMatrix<T>::Zero(B, H);
  for (int s = L - 1; s >= 0; --s) {
    const int t = cache.reverse ? L - 1 - s : s;
    const int tp = cache.reverse ? t + 1 : t - 1;
    auto gates = cache.gates.middleRows(t * B, B);
    auto dg = dgates.middleRows(t * B, B);
    for (int n = 0; n < B; ++n) {
      for (int j = 0; j < H; ++j) {
        const T i_g = gates(n, j), f_g = gates(n, H + j);
        const T c_g = gates(n, 2 * H + j), o_g = gates(n, 3 * H + j);
        const T c_t = cache.c(t * B + n, j);
        const T c_prev = s > 0 ? cache.c(tp * B + n, j) : T(0);
        const T tc = std::tanh(c_t);
        const T dh = dy_dir(t * B + n, j) + dh_next(n, j);
        const T d_o = dh * tc;
        const T dc = dh * o_g * (T(1) - tc * tc) + dc_next(n, j);
        dc_next(n, j) = dc * f_g;
        dg(n, j) = dc * c_g * i_g * (T(1) - i_g);
        dg(n, H + j) = dc * c_prev * f_g * (T(1) - f_g);
        dg(n, 2 * H + j) = dc * i_g * (T(1) - c_g * c_g);
        dg(n, 3 * H + j) = d_o * o_g * (T(1) - o_g);
      }
    }
    if (s > 0) {
      dw_hh.noalias() += cache.h.middleRows(tp * B, B).transpose() * dg;
      dh_next.noalias() = dg * w_hh.transpose();
    }
  }
  dw_ih.noalias() += cache.x.transpose() * dgates;
  dbias += dgates.colwise().sum().transpose();
  dx_tm->noalias() += dgates * w_ih.transpose();
}

}  // namespace

template <typename T>
void BiLstmForward(const Tensor<T>& x, const LstmWeights<T>& fwd,
                   const LstmWeights<T>& bwd, Tensor<T>* y,
                   LstmCache<T>* fwd_cache, LstmCache<T>* bwd_cache) {
  RequireRank3(x.shape, "bilstm");
  const int in = x.dim(2);
  const int H = fwd.w_hh->dim(0);
  RequireShape(*fwd.w_ih, {in, 4 * H}, "bilstm w_ih");
  RequireShape(*bwd.w_ih, {in, 4 * H}, "bilstm w_ih");
  LstmDirectionForward(x, fwd, false, fwd_cache);
  LstmDirectionForward(x, bwd, true, bwd_cache);
  const int B = x.dim(0), L = x.dim(1);
  *y = Tensor<T>({B, L, 2 * H});
  for (int n = 0; n < B; ++n)
    for (int t = 0; t < L; ++t) {
      T* row = y->ptr() + (static_cast<size_t>(n) * L + t) * 2 * H;
      for (int j = 0; j < H; ++j) {
        row[j] = fwd_cache->h(t * B + n, j);
        row[H + j] = bwd_cache->h(t * B + n, j);
      }
    }
}

template <typename T>
void BiLstmBackward(const LstmCache<T>& fwd_cache, const LstmCache<T>& bwd_cache,
                    const LstmWeights<T>& fwd, const LstmWeights<T>& bwd,
                    const Tensor<T>& dy, const LstmGrads<T>& dfwd,
                    const LstmGrads<T>& dbwd, Tensor<T>* dx) {
  const int B = fwd_cache.batch, L = fwd_cache.time, H = fwd_cache.hidden;
  const int in = static_cast<int>(fwd_cache.x.cols());
  RowMatrix<T> dy_f(static_cast<Eigen::Index>(L) * B, H);
  RowMatrix<T> dy_b(static_cast<Eigen::Index>(L) * B, H);
  for (int n = 0; n < B; ++n)
    for (int t = 0; t < L; ++t) {
      const T* row = dy.ptr() + (static_cast<size_t>(n) * L + t) * 2 * H;
      for (int j = 0; j < H; ++j) {
        dy_f(t * B + n, j) = row[j];
        dy_b(t * B + n, j) = row[H + j];
      }
    }
  RowMatrix<T> dx_tm = RowMatrix<T>::Zero(static_cast<Eigen::Index>(L) * B, in);
  LstmDirectionBackward(fwd_cache, fwd, dy_f, dfwd, &dx_tm);
  LstmDirectionBackward(bwd_cache, bwd, dy_b, dbwd, &dx_tm);
  if (dx) {
    *dx = Tensor<T>({B, L, in});
    for (int n = 0; n < B; ++n)
      for (int t = 0; t < L; ++t)
        for (int c = 0; c < in; ++c)
          dx->data[(static_cast<size_t>(n) * L + t) * in + c] = dx_tm(t * B + n, c);
  }
}

template <typename T>
void DenseSigmoidForward(const Tensor<T>& x, const Tensor<T>& weight,
                         const Tensor<T>& bias, Tensor<T>* logits,
                         Tensor<T>* probs) {
  RequireRank3(x.shape, "dense");
  const int B = x.dim(0), L = x.dim(1), D = x.dim(2);
  RequireShape(weight, {D}, "dense weight");
  ConstMatMap<T> xm(x.ptr(), static_cast<Eigen::Index>(B) * L, D);
  ConstVecMap<T> w(weight.ptr(), D);
  *logits = Tensor<T>({B, L});
  VecMap<T> z(logits->ptr(), static_cast<Eigen::Index>(B) * L);
  z.noalias() = xm * w;
  z.array() += bias.data[0];
  *probs = Tensor<T>({B, L});
  // Keep probabilities strictly inside (0, 1) at the working precision.
  const T lo = static_cast<T>(1e-7);
  const T hi = T(1) - lo;
  for (size_t i = 0; i < logits->size(); ++i) {
    probs->data[i] = std::clamp(Sigmoid(logits->data[i]), lo, hi);
  }
}

template <typename T>
void DenseBackward(const Tensor<T>& x, const Tensor<T>& weight,
                   const Tensor<T>& dlogits, Tensor<T>* dweight,
                   Tensor<T>* dbias, Tensor<T>* dx) {
  const int B = x.dim(0), L = x.dim(1), D = x.dim(2);
  ConstMatMap<T> xm(x.ptr(), static_cast<Eigen::Index>(B) * L, D);
  ConstVecMap<T> w(weight.ptr(), D);
  ConstVecMap<T> dz(dlogits.ptr(), static_cast<Eigen::Index>(B) * L);
  VecMap<T> dw(dweight->ptr(), D);
  dw.noalias() += xm.transpose() * dz;
  double s = 0.0;
  for (size_t i = 0; i < dlogits.size(); ++i) s += static_cast<double>(dlogits.data[i]);
  dbias->data[0] += static_cast<T>(s);
  if (dx) {
    *dx = Tensor<T>(x.shape);
    MatMap<T> dxm(dx->ptr(), static_cast<Eigen::Index>(B) * L, D);
    dxm.noalias() = dz * w.transpose();
  }
}

template <typename T>
double BceLoss(std::span<const T> probs, std::span<const T> targets, double eps) {
  if (probs.size() != targets.size()) throw ShapeError("bce: size mismatch");
  if (probs.empty()) return 0.0;
  double acc = 0.0;
  for (size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(static_cast<double>(probs[i]), eps, 1.0 - eps);
    const double y = static_cast<double>(targets[i]);
    acc -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  return acc / static_cast<double>(probs.size());
}

template <typename T>
void BceLogitGrad(std::span<const T> probs, std::span<const T> targets,
                  std::span<T> dlogits) {
  const double n = static_cast<double>(probs.size());
  for (size_t i = 0; i < probs.size(); ++i) {
    dlogits[i] = static_cast<T>((static_cast<double>(probs[i]) -
                                 static_cast<double>(targets[i])) / n);
  }
}

#define BREATHLINE_INSTANTIATE_LAYERS(T)                                        \
  template void Conv1dForward<T>(const Tensor<T>&, const Tensor<T>&,            \
                                 const Tensor<T>&, int, Tensor<T>*);            \
  template void Conv1dBackward<T>(const Tensor<T>&, const Tensor<T>&, int,      \
                                  const Tensor<T>&, Tensor<T>*, Tensor<T>*,     \
                                  Tensor<T>*);                                  \
  template void BatchNormTrainForward<T>(const Tensor<T>&,                      \
                                         const BatchNormParams<T>&, Tensor<T>*, \
                                         BatchNormCache<T>*);                   \
  template void BatchNormInferForward<T>(const Tensor<T>&,                      \
                                         const BatchNormParams<T>&, Tensor<T>*);\
  template void BatchNormBackward<T>(const BatchNormCache<T>&, const Tensor<T>&,\
                                     const Tensor<T>&, Tensor<T>*, Tensor<T>*,  \
                                     Tensor<T>*);                               \
  template void ReluForward<T>(Tensor<T>*);                                     \
  template void ReluBackward<T>(const Tensor<T>&, Tensor<T>*);                  \
  template void MaxPoolForward<T>(const Tensor<T>&, int, int, Tensor<T>*,       \
                                  std::vector<std::int32_t>*);                  \
  template void MaxPoolBackward<T>(const std::vector<std::int32_t>&,            \
                                   const std::vector<int>&, const Tensor<T>&,   \
                                   Tensor<T>*);                                 \
  template void DropoutForward<T>(const Tensor<T>&, double, std::uint64_t,      \
                                  Tensor<T>*, std::vector<T>*);                 \
  template void DropoutBackward<T>(const std::vector<T>&, const Tensor<T>&,     \
                                   Tensor<T>*);                                 \
  template void BiLstmForward<T>(const Tensor<T>&, const LstmWeights<T>&,       \
                                 const LstmWeights<T>&, Tensor<T>*,             \
                                 LstmCache<T>*, LstmCache<T>*);                 \
  template void BiLstmBackward<T>(const LstmCache<T>&, const LstmCache<T>&,     \
                                  const LstmWeights<T>&, const LstmWeights<T>&, \
                                  const Tensor<T>&, const LstmGrads<T>&,        \
                                  const LstmGrads<T>&, Tensor<T>*);             \
  template void DenseSigmoidForward<T>(const Tensor<T>&, const Tensor<T>&,      \
                                       const Tensor<T>&, Tensor<T>*,            \
                                       Tensor<T>*);                             \
  template void DenseBackward<T>(const Tensor<T>&, const Tensor<T>&,            \
                                 const Tensor<T>&, Tensor<T>*, Tensor<T>*,      \
                                 Tensor<T>*);                                   \
  template double BceLoss<T>(std::span<const T>, std::span<const T>, double);   \
  template void BceLogitGrad<T>(std::span<const T>, std::span<const T>,         \
                                std::span<T>);

BREATHLINE_INSTANTIATE_LAYERS(float)
BREATHLINE_INSTANTIATE_LAYERS(double)

}  // namespace breathline::nn
