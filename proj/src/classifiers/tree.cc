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
#include <functional>
#include <numeric>

#include "breathline/classifiers.h"
#include "breathline/error.h"
#include "json.hpp"

namespace breathline {

namespace {

constexpr double kMinGain = 1e-12;

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

Split BestSplit(const std::vector<LabeledSample>& samples,
                const std::vector<int>& idx, int n_real) {
  const int n = static_cast<int>(idx.size());
  const double parent = Gini(n_real, n - n_real);
  Split best;
  std::vector<int> order = idx;
  for (int f = 0; f < kNumStats; ++f) {
    auto value = [&](int i) { return samples[static_cast<size_t>(i)].stats.ToArray()[f]; };
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return value(a) < value(b); });
    int left_real = 0;
    for (int k = 0; k + 1 < n; ++k) {
      left_real += samples[static_cast<size_t>(order[k])].real ? 1 : 0;
      const double lo = value(order[k]), hi = value(order[k + 1]);
      if (!(lo < hi)) continue;
      double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold < hi)) threshold = lo;
      const int nl = k + 1, nr = n - nl;
      const int right_real = n_real - left_real;
      const double child = (nl * Gini(left_real, nl - left_real) +
                            nr * Gini(right_real, nr - right_real)) / n;
      const double gain = parent - child;
      if (gain > best.gain + kMinGain) best = {f, threshold, gain};
    }
  }
  return best;
}

}  // namespace

double Gini(int n_real, int n_fake) {
  const double n = n_real + n_fake;
  if (n <= 0) return 0.0;
  const double p = n_real / n, q = n_fake / n;
  return 1.0 - p * p - q * q;
}

int TreeModel::Depth() const {
  int d = 0;
  for (const auto& node : nodes) d = std::max(d, node.depth);
  return d;
}

const TreeNode& TreeModel::Leaf(const BreathStats& stats) const {
  if (nodes.empty()) throw InputError("tree: empty model");
  const auto x = stats.ToArray();
  const TreeNode* node = &nodes[0];
  while (!node->leaf()) {
    node = &nodes[static_cast<size_t>(x[node->feature] <= node->threshold ? node->left
                                                                           : node->right)];
  }
  return *node;
}

double TreeModel::Score(const BreathStats& stats) const {
  const TreeNode& leaf = Leaf(stats);
  return static_cast<double>(leaf.n_real) / (leaf.n_real + leaf.n_fake);
}

TreeModel TrainTree(const std::vector<LabeledSample>& samples, const TreeConfig& config) {
  if (samples.empty()) throw TrainingError("tree: empty training set");
  if (config.max_depth < 0) throw ConfigError("tree: max_depth must be >= 0");
  TreeModel model;
  model.max_depth = config.max_depth;
  std::function<int(const std::vector<int>&, int)> build =
      [&](const std::vector<int>& idx, int depth) {
        TreeNode node;
        node.depth = depth;
        for (int i : idx) (samples[static_cast<size_t>(i)].real ? node.n_real : node.n_fake)++;
        const int at = static_cast<int>(model.nodes.size());
        model.nodes.push_back(node);
        if (depth >= config.max_depth || node.n_real == 0 || node.n_fake == 0) return at;
        const Split split = BestSplit(samples, idx, node.n_real);
        if (split.feature < 0) return at;
        std::vector<int> left, right;
        for (int i : idx) {
          (samples[static_cast<size_t>(i)].stats.ToArray()[split.feature] <= split.threshold
               ? left
               : right)
              .push_back(i);
        }
        const int l = build(left, depth + 1);
        const int r = build(right, depth + 1);
        TreeNode& n = model.nodes[static_cast<size_t>(at)];
        n.feature = split.feature;
        n.threshold = split.threshold;
        n.left = l;
        n.right = r;
        return at;
      };
  std::vector<int> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  build(all, 0);
  return model;
}

std::string TreeToJson(const TreeModel& model) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : model.nodes) {
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"depth", n.depth},
                     {"n_real", n.n_real},
                     {"n_fake", n.n_fake}});
  }
  return nlohmann::json{{"version", kTreeVersion},
                        {"features", {"bpm", "avg_duration_ms", "avg_spacing_ms"}},
                        {"max_depth", model.max_depth},
                        {"nodes", nodes}}
             .dump(2) + "\n";
}

TreeModel TreeFromJson(const std::string& text) {
  TreeModel model;
  try {
    const auto j = nlohmann::json::parse(text);
    const std::string version = j.value("version", "");
    if (version != kTreeVersion) {
      throw UnsupportedError("tree model: unsupported version '" + version + "'");
    }
    model.max_depth = j.at("max_depth");
    for (const auto& n : j.at("nodes")) {
      TreeNode node;
      node.feature = n.at("feature");
      node.threshold = n.at("threshold");
      node.left = n.at("left");
      node.right = n.at("right");
      node.depth = n.at("depth");
      node.n_real = n.at("n_real");
      node.n_fake = n.at("n_fake");
      model.nodes.push_back(node);
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("tree model: ") + e.what());
  }
  const int count = static_cast<int>(model.nodes.size());
  for (const auto& n : model.nodes) {
    if (!n.leaf() && (n.feature >= kNumStats || n.left <= 0 || n.left >= count ||
                      n.right <= 0 || n.right >= count)) {
      throw FormatError("tree model: node references out of range");
    }
  }
  return model;
}

}  // namespace breathline
