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

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "breathline/classifiers.h"
#include "breathline/error.h"
#include "json.hpp"

namespace breathline {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool InUp(double y, double a, double c) { return y > 0 ? a < c : a > 0; }
bool InLow(double y, double a, double c) { return y > 0 ? a > 0 : a < c; }

// Returns m - M for gradient G.
double Violation(const Eigen::VectorXd& y, const Eigen::VectorXd& alpha,
                 const Eigen::VectorXd& grad, double c) {
  double m = -kInf, big_m = kInf;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    const double v = -y[t] * grad[t];
    if (InUp(y[t], alpha[t], c)) m = std::max(m, v);
    if (InLow(y[t], alpha[t], c)) big_m = std::min(big_m, v);
  }
  if (m == -kInf || big_m == kInf) return 0.0;
  return std::max(0.0, m - big_m);
}

}  // namespace

double DualObjective(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& alpha) {
  const Eigen::VectorXd ya = y.cwiseProduct(alpha);
  return 0.5 * ya.dot(kernel * ya) - alpha.sum();
}

double DualKktViolation(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& alpha, double c) {
  const Eigen::VectorXd grad =
      y.cwiseProduct(kernel * y.cwiseProduct(alpha)) - Eigen::VectorXd::Ones(y.size());
  return Violation(y, alpha, grad, c);
}

DualSolution SolveSvcDual(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                          double c, double tolerance, std::int64_t max_iterations) {
  const Eigen::Index n = y.size();
  if (kernel.rows() != n || kernel.cols() != n) {
    throw ShapeError("svc: kernel matrix does not match the labels");
  }
  DualSolution s;
  s.alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd grad = -Eigen::VectorXd::Ones(n);
  auto& a = s.alpha;
  auto q = [&](Eigen::Index i, Eigen::Index j) { return y[i] * y[j] * kernel(i, j); };

  for (; s.iterations < max_iterations; ++s.iterations) {
    Eigen::Index i = -1;
    double gmax = -kInf;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (InUp(y[t], a[t], c) && -y[t] * grad[t] >= gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    Eigen::Index j = -1;
    double gmin = kInf;
    double best = kInf;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!InLow(y[t], a[t], c)) continue;
      const double v = -y[t] * grad[t];
      gmin = std::min(gmin, v);
      if (i < 0) continue;
      const double diff = gmax - v;
      if (diff > 0) {
        double quad = kernel(i, i) + kernel(t, t) - 2.0 * kernel(i, t);
        if (quad <= 0) quad = kTau;
        const double obj = -diff * diff / quad;
        if (obj <= best) {
          best = obj;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || gmax - gmin < tolerance) break;

    const double ai = a[i], aj = a[j];
    if (y[i] != y[j]) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = a[i] - a[j];
      a[i] += delta;
      a[j] += delta;
      if (diff > 0) {
        if (a[j] < 0) {
          a[j] = 0;
          a[i] = diff;
        }
      } else if (a[i] < 0) {
        a[i] = 0;
        a[j] = -diff;
      }
      if (diff > 0) {
        if (a[i] > c) {
          a[i] = c;
          a[j] = c - diff;
        }
      } else if (a[j] > c) {
        a[j] = c;
        a[i] = c + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = a[i] + a[j];
      a[i] -= delta;
      a[j] += delta;
      if (sum > c) {
        if (a[i] > c) {
          a[i] = c;
          a[j] = sum - c;
        }
      } else if (a[j] < 0) {
        a[j] = 0;
        a[i] = sum;
      }
      if (sum > c) {
        if (a[j] > c) {
          a[j] = c;
          a[i] = sum - c;
        }
      } else if (a[i] < 0) {
        a[i] = 0;
        a[j] = sum;
      }
    }
    const double di = a[i] - ai, dj = a[j] - aj;
    for (Eigen::Index t = 0; t < n; ++t) grad[t] += q(t, i) * di + q(t, j) * dj;
  }

  // Bias from free vectors, or the midpoint of the feasible range.
  double ub = kInf, lb = -kInf, sum = 0.0;
  int free = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (a[t] >= c) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (a[t] <= 0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free;
      sum += yg;
    }
  }
  s.rho = free > 0 ? sum / free : 0.5 * (ub + lb);
  s.objective = DualObjective(kernel, y, a);
  s.kkt_violation = Violation(y, a, grad, c);
  return s;
}

double SvcModel::Kernel(const StatsVector& a, const StatsVector& b) const {
  double dot = 0.0;
  for (int k = 0; k < kNumStats; ++k) dot += a[k] * b[k];
  return std::pow(gamma * dot + coef0, degree);
}

StatsVector SvcModel::Standardize(const BreathStats& stats) const {
  const auto raw = stats.ToArray();
  StatsVector z;
  for (int k = 0; k < kNumStats; ++k) z[k] = (raw[k] - mean[k]) / scale[k];
  return z;
}

double SvcModel::Score(const BreathStats& stats) const {
  const auto z = Standardize(stats);
  double d = bias;
  for (size_t i = 0; i < support_vectors.size(); ++i) {
    d += dual_coef[i] * Kernel(support_vectors[i], z);
  }
  return d;
}

SvcModel TrainSvc(const std::vector<LabeledSample>& samples, const SvcConfig& config) {
  if (!(config.c > 0.0)) throw ConfigError("svc: C must be > 0");
  if (config.degree < 1) throw ConfigError("svc: degree must be >= 1");
  if (!(config.tolerance > 0.0)) throw ConfigError("svc: tolerance must be > 0");
  int n_real = 0;
  for (const auto& s : samples) n_real += s.real ? 1 : 0;
  if (n_real == 0 || n_real == static_cast<int>(samples.size())) {
    throw TrainingError("svc: training set needs samples of both classes");
  }
  const auto n = static_cast<Eigen::Index>(samples.size());
  SvcModel m;
  m.c = config.c;
  m.degree = config.degree;
  m.coef0 = config.coef0;
  for (int k = 0; k < kNumStats; ++k) {
    double mu = 0.0;
    for (const auto& s : samples) mu += s.stats.ToArray()[k];
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& s : samples) var += std::pow(s.stats.ToArray()[k] - mu, 2);
    var /= static_cast<double>(n);
    m.mean[k] = mu;
    m.scale[k] = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  std::vector<StatsVector> z;
  for (const auto& s : samples) z.push_back(m.Standardize(s.stats));
  if (config.gamma) {
    m.gamma = *config.gamma;
  } else {
    double mu = 0.0, sq = 0.0;
    for (const auto& v : z)
      for (double x : v) {
        mu += x;
        sq += x * x;
      }
    const double count = static_cast<double>(n) * kNumStats;
    const double var = sq / count - (mu / count) * (mu / count);
    m.gamma = var > 1e-12 ? 1.0 / (kNumStats * var) : 1.0;
  }
  Eigen::MatrixXd kernel(n, n);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y[i] = samples[static_cast<size_t>(i)].real ? 1.0 : -1.0;
    for (Eigen::Index j = 0; j <= i; ++j) {
      kernel(i, j) = kernel(j, i) = m.Kernel(z[static_cast<size_t>(i)], z[static_cast<size_t>(j)]);
    }
  }
  const auto sol = SolveSvcDual(kernel, y, config.c, config.tolerance, config.max_iterations);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sol.alpha[i] > 0.0) {
      m.support_vectors.push_back(z[static_cast<size_t>(i)]);
      m.dual_coef.push_back(sol.alpha[i] * y[i]);
    }
  }
  m.bias = -sol.rho;
  m.dual_objective = sol.objective;
  m.kkt_violation = sol.kkt_violation;
  m.iterations = sol.iterations;
  return m;
}

std::vector<std::uint8_t> SerializeSvc(const SvcModel& m) {
  std::vector<double> payload;
  auto push = [&payload](const StatsVector& v) { payload.insert(payload.end(), v.begin(), v.end()); };
  push(m.mean);
  push(m.scale);
  for (const auto& sv : m.support_vectors) push(sv);
  payload.insert(payload.end(), m.dual_coef.begin(), m.dual_coef.end());
  payload.push_back(m.bias);
  const nlohmann::json header = {
      {"version", kSvcVersion},
      {"kernel", "poly"},
      {"degree", m.degree},
      {"gamma", m.gamma},
      {"coef0", m.coef0},
      {"C", m.c},
      {"num_features", kNumStats},
      {"num_support_vectors", m.support_vectors.size()},
      {"dtype", "f64"},
      {"layout", "mean[3], scale[3], support_vectors[n*3], dual_coef[n], bias"},
      {"payload_values", payload.size()}};
  const std::string text = header.dump();
  std::vector<std::uint8_t> out;
  const std::uint64_t len = text.size();
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
  out.insert(out.end(), text.begin(), text.end());
  for (double v : payload) {
    const auto u = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
  }
  return out;
}

SvcModel DeserializeSvc(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8) throw FormatError("svc model: truncated header");
  std::uint64_t len = 0;
  for (int i = 7; i >= 0; --i) len = (len << 8) | bytes[i];
  if (len > bytes.size() - 8) throw FormatError("svc model: truncated header");
  SvcModel m;
  size_t n_sv = 0, values = 0;
  try {
    const auto h = nlohmann::json::parse(bytes.begin() + 8,
                                         bytes.begin() + 8 + static_cast<std::ptrdiff_t>(len));
    const std::string version = h.value("version", "");
    if (version != kSvcVersion) {
      throw UnsupportedError("svc model: unsupported version '" + version + "'");
    }
    m.degree = h.at("degree");
    m.gamma = h.at("gamma");
    m.coef0 = h.at("coef0");
    m.c = h.at("C");
    n_sv = h.at("num_support_vectors");
    values = h.at("payload_values");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("svc model: bad header: ") + e.what());
  }
  if (values != 2 * kNumStats + n_sv * (kNumStats + 1) + 1 ||
      bytes.size() - 8 - len != values * 8) {
    throw FormatError("svc model: payload size does not match the header");
  }
  const std::uint8_t* p = bytes.data() + 8 + len;
  auto next = [&p] {
    std::uint64_t u = 0;
    for (int b = 7; b >= 0; --b) u = (u << 8) | p[b];
    p += 8;
    return std::bit_cast<double>(u);
  };
  for (auto& v : m.mean) v = next();
  for (auto& v : m.scale) v = next();
  m.support_vectors.resize(n_sv);
  for (auto& sv : m.support_vectors)
    for (auto& v : sv) v = next();
  m.dual_coef.resize(n_sv);
  for (auto& v : m.dual_coef) v = next();
  m.bias = next();
  return m;
}

}  // namespace breathline
