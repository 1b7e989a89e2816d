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

#ifndef BREATHLINE_CLASSIFIERS_H_
#define BREATHLINE_CLASSIFIERS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "breathline/breath_stats.h"

namespace breathline {

inline constexpr int kNumStats = 3;
using StatsVector = std::array<double, kNumStats>;

struct LabeledSample {
  std::string id;
  BreathStats stats;
  bool real = false;  // the positive class
};

// Real iff every statistic is strictly positive.
bool ThresholdClassify(const BreathStats& stats);

// ---------------------------------------------------------------------------
// Polynomial-kernel C-SVC.

struct SvcConfig {
  double c = 1.0;
  int degree = 2;
  // Unset: 1 / (num_features * variance of the standardized training matrix).
  std::optional<double> gamma;
  double coef0 = 1.0;
  // Stop when the maximal KKT violation falls below this.
  double tolerance = 1e-7;
  std::int64_t max_iterations = 10'000'000;
};

// Solution of min 0.5 a'Qa - sum(a), 0 <= a <= C, y'a = 0 with
// Q_ij = y_i y_j K_ij.
struct DualSolution {
  Eigen::VectorXd alpha;
  double rho = 0.0;  // decision = sum a_i y_i K(x_i, x) - rho
  double objective = 0.0;
  double kkt_violation = 0.0;
  std::int64_t iterations = 0;
};

// SMO with second-order working-set selection. y entries must be +1/-1.
DualSolution SolveSvcDual(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                          double c, double tolerance, std::int64_t max_iterations);

// Largest violation m(a) - M(a) of the dual KKT conditions (0 at optimum).
double DualKktViolation(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& alpha, double c);

double DualObjective(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& alpha);

struct SvcModel {
  double c = 1.0;
  int degree = 2;
  double gamma = 1.0;
  double coef0 = 1.0;
  StatsVector mean{};
  StatsVector scale{};  // per-feature standard deviation (1 when constant)
  std::vector<StatsVector> support_vectors;  // standardized
  std::vector<double> dual_coef;             // alpha_i * y_i
  double bias = 0.0;
  // Training diagnostics.
  double dual_objective = 0.0;
  double kkt_violation = 0.0;
  std::int64_t iterations = 0;

  double Kernel(const StatsVector& a, const StatsVector& b) const;
  StatsVector Standardize(const BreathStats& stats) const;
  // Decision value; higher means more likely real.
  double Score(const BreathStats& stats) const;
  bool Classify(const BreathStats& stats) const { return Score(stats) > 0.0; }
};

// Throws TrainingError unless both classes are present.
SvcModel TrainSvc(const std::vector<LabeledSample>& samples,
                  const SvcConfig& config = {});

inline constexpr const char* kSvcVersion = "breathline-svc/1";
std::vector<std::uint8_t> SerializeSvc(const SvcModel& model);
SvcModel DeserializeSvc(const std::vector<std::uint8_t>& bytes);

// ---------------------------------------------------------------------------
// CART decision tree (Gini impurity).

struct TreeConfig {
  int max_depth = 3;
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // left branch takes value <= threshold
  int left = -1;
  int right = -1;
  int depth = 0;
  int n_real = 0;
  int n_fake = 0;

  bool leaf() const { return feature < 0; }
};

double Gini(int n_real, int n_fake);

struct TreeModel {
  int max_depth = 3;
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int Depth() const;
  const TreeNode& Leaf(const BreathStats& stats) const;
  // Fraction of real training samples in the reached leaf.
  double Score(const BreathStats& stats) const;
  bool Classify(const BreathStats& stats) const { return Score(stats) > 0.5; }
};

// Throws TrainingError on an empty sample set.
TreeModel TrainTree(const std::vector<LabeledSample>& samples,
                    const TreeConfig& config = {});

inline constexpr const char* kTreeVersion = "breathline-tree/1";
std::string TreeToJson(const TreeModel& model);
TreeModel TreeFromJson(const std::string& text);

// ---------------------------------------------------------------------------

enum class ClassifierKind { kThreshold, kSvc, kTree };
std::string ToString(ClassifierKind kind);
ClassifierKind ParseClassifierKind(const std::string& text);

// A trained classifier of any kind behind one scoring interface.
struct Classifier {
  ClassifierKind kind = ClassifierKind::kThreshold;
  std::optional<SvcModel> svc;
  std::optional<TreeModel> tree;

  // Thresholding scores 1 (real) or 0 (fake).
  double Score(const BreathStats& stats) const;
  bool Classify(const BreathStats& stats) const;
};

Classifier TrainClassifier(ClassifierKind kind,
                           const std::vector<LabeledSample>& samples,
                           const SvcConfig& svc_config = {},
                           const TreeConfig& tree_config = {});

void SaveClassifier(const Classifier& classifier, const std::filesystem::path& path);
Classifier LoadClassifier(const std::filesystem::path& path);

}  // namespace breathline

#endif  // BREATHLINE_CLASSIFIERS_H_
