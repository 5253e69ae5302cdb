#pragma once

// Exact-greedy gradient boosted trees on the logistic loss. Trees are grown
// from the second-order expansion of the loss around the current scores:
// a node's weight is -G/(H+lambda) and a split is scored by
//   0.5 * [G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)].

#include "labelflip/dataset.hpp"
#include "labelflip/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace labelflip {

struct GbdtParams {
  int num_trees = 50;
  int max_depth = 3;
  double learning_rate = 0.1;
  double lambda = 1.0;
  double min_split_gain = 0.0;
  double min_child_weight = 1e-3;

  void validate() const {
    if (num_trees < 1) throw model_error("gbdt num_trees must be >= 1");
    if (max_depth < 1) throw model_error("gbdt max_depth must be >= 1");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw model_error("gbdt learning_rate must lie in (0, 1]");
    if (!(lambda >= 0.0)) throw model_error("gbdt lambda must be >= 0");
    if (!(min_split_gain >= 0.0)) throw model_error("gbdt min_split_gain must be >= 0");
    if (!(min_child_weight >= 0.0)) throw model_error("gbdt min_child_weight must be >= 0");
  }
};

/// Binary regression tree stored as a flat node array; node 0 is the root.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double weight = 0.0;  // leaf output

    bool is_leaf() const noexcept { return feature < 0; }
  };

  RegressionTree() = default;
  explicit RegressionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  static RegressionTree leaf(double weight) { return RegressionTree({Node{-1, 0.0, -1, -1, weight}}); }

  /// Index of the leaf `x` routes to. Values strictly below the threshold go left.
  template <typename Row>
  int leaf_index(const Row &x) const {
    int i = 0;
    while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
      const Node &n = nodes_[static_cast<std::size_t>(i)];
      i = x(n.feature) < n.threshold ? n.left : n.right;
    }
    return i;
  }

  template <typename Row>
  double value(const Row &x) const {
    return nodes_[static_cast<std::size_t>(leaf_index(x))].weight;
  }

  std::size_t leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node &n) { return n.is_leaf(); }));
  }

  int depth() const { return nodes_.empty() ? 0 : depth_from(0); }

  const std::vector<Node> &nodes() const noexcept { return nodes_; }

 private:
  int depth_from(int i) const {
    const Node &n = nodes_[static_cast<std::size_t>(i)];
    if (n.is_leaf()) return 0;
    return 1 + std::max(depth_from(n.left), depth_from(n.right));
  }

  std::vector<Node> nodes_;
};

struct GbdtModel {
  std::vector<RegressionTree> trees;
  double base_score = 0.0;
  double learning_rate = 0.1;
  std::size_t dimension = 0;
};

/// Per-instance first and second derivatives of the loss w.r.t. the raw score.
struct GradientPair {
  Vector g;
  Vector h;
};

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double gain = -std::numeric_limits<double>::infinity();

  bool valid() const noexcept { return feature >= 0; }
};

/// Numerically stable logistic sigmoid.
inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

/// l(y, s) = log(1 + exp(-y s)).
inline double logistic_loss(int y, double score) { return softplus(-y * score); }

inline GradientPair logistic_gradients(const Vector &raw_scores, const Labels &labels) {
  if (static_cast<std::size_t>(raw_scores.size()) != labels.size()) {
    throw model_error("logistic_gradients: score and label lengths differ");
  }
  GradientPair out{Vector(raw_scores.size()), Vector(raw_scores.size())};
  for (Eigen::Index i = 0; i < raw_scores.size(); ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    const double m = y * raw_scores(i);
    const double p = sigmoid(-m);
    out.g(i) = -y * p;
    out.h(i) = p * sigmoid(m);
  }
  return out;
}

inline double split_gain(double gl, double hl, double gr, double hr, double lambda) {
  const double g = gl + gr;
  const double h = hl + hr;
  return 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - g * g / (h + lambda));
}

inline double leaf_weight(double g_sum, double h_sum, double lambda) {
  const double denom = h_sum + lambda;
  return denom > 0.0 ? -g_sum / denom : 0.0;
}

/**
 * Best split of `rows` over all features and all midpoints between
 * consecutive distinct values. Ties keep the lowest feature index, then the
 * lowest threshold. Returns an invalid candidate when no split satisfies
 * min_child_weight on both sides.
 */
inline SplitCandidate find_best_split(const Matrix &x, const Vector &g, const Vector &h,
                                      const std::vector<std::size_t> &rows, const GbdtParams &params) {
  SplitCandidate best;
  if (rows.size() < 2) return best;
  double g_total = 0.0;
  double h_total = 0.0;
  for (auto r : rows) {
    g_total += g(static_cast<Eigen::Index>(r));
    h_total += h(static_cast<Eigen::Index>(r));
  }

  std::vector<std::size_t> order(rows);
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return x(static_cast<Eigen::Index>(a), f) < x(static_cast<Eigen::Index>(b), f);
    });
    double gl = 0.0;
    double hl = 0.0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const auto r = static_cast<Eigen::Index>(order[i]);
      gl += g(r);
      hl += h(r);
      const double v = x(r, f);
      const double next = x(static_cast<Eigen::Index>(order[i + 1]), f);
      if (!(next > v)) continue;
      const double hr = h_total - hl;
      if (hl < params.min_child_weight || hr < params.min_child_weight) continue;
      const double gain = split_gain(gl, hl, g_total - gl, hr, params.lambda);
      if (gain > best.gain) best = SplitCandidate{static_cast<int>(f), v + 0.5 * (next - v), gain};
    }
  }
  return best;
}

namespace detail {

inline void grow_node(const Matrix &x, const Vector &g, const Vector &h, const std::vector<std::size_t> &rows,
                      int depth, const GbdtParams &params, std::vector<RegressionTree::Node> &nodes) {
  double gs = 0.0;
  double hs = 0.0;
  for (auto r : rows) {
    gs += g(static_cast<Eigen::Index>(r));
    hs += h(static_cast<Eigen::Index>(r));
  }
  const auto self = nodes.size();
  nodes.push_back(RegressionTree::Node{-1, 0.0, -1, -1, leaf_weight(gs, hs, params.lambda)});
  if (depth >= params.max_depth) return;

  const SplitCandidate split = find_best_split(x, g, h, rows, params);
  if (!split.valid() || !(split.gain > params.min_split_gain)) return;

  std::vector<std::size_t> left;
  std::vector<std::size_t> right;
  for (auto r : rows) (x(static_cast<Eigen::Index>(r), split.feature) < split.threshold ? left : right).push_back(r);

  nodes[self].feature = split.feature;
  nodes[self].threshold = split.threshold;
  nodes[self].left = static_cast<int>(nodes.size());
  grow_node(x, g, h, left, depth + 1, params, nodes);
  nodes[self].right = static_cast<int>(nodes.size());
  grow_node(x, g, h, right, depth + 1, params, nodes);
}

}  // namespace detail

/// Grow one tree on fixed (g, h).
inline RegressionTree build_tree(const Matrix &x, const Vector &g, const Vector &h, const GbdtParams &params) {
  std::vector<std::size_t> rows(static_cast<std::size_t>(x.rows()));
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::vector<RegressionTree::Node> nodes;
  detail::grow_node(x, g, h, rows, 0, params, nodes);
  return RegressionTree(std::move(nodes));
}

inline Vector predict_raw(const GbdtModel &model, const Matrix &features) {
  if (!model.trees.empty() && static_cast<std::size_t>(features.cols()) != model.dimension) {
    throw model_error("gbdt predict: expected " + std::to_string(model.dimension) + " features, got " +
                      std::to_string(features.cols()));
  }
  Vector out = Vector::Constant(features.rows(), model.base_score);
  for (const auto &tree : model.trees) {
    for (Eigen::Index i = 0; i < features.rows(); ++i) out(i) += model.learning_rate * tree.value(features.row(i));
  }
  return out;
}

struct GbdtFit {
  GbdtModel model;
  GradientPair gradients;  // evaluated at the final model's raw scores
};

/// Boost `params.num_trees` rounds from base score 0. The returned
/// gradients are the ones the candidate sampler consumes. `seed` is accepted
/// for interface symmetry; the exact-greedy trainer is deterministic.
inline GbdtFit train_gbdt(const Dataset &data, const GbdtParams &params, std::uint64_t /*seed*/ = 0) {
  params.validate();
  if (data.empty()) throw model_error("cannot train gbdt on an empty dataset");
  GbdtModel model;
  model.learning_rate = params.learning_rate;
  model.dimension = data.dimension();
  Vector scores = Vector::Constant(static_cast<Eigen::Index>(data.size()), model.base_score);
  for (int m = 0; m < params.num_trees; ++m) {
    const GradientPair gp = logistic_gradients(scores, data.labels());
    RegressionTree tree = build_tree(data.features(), gp.g, gp.h, params);
    for (Eigen::Index i = 0; i < scores.size(); ++i) scores(i) += params.learning_rate * tree.value(data.features().row(i));
    model.trees.push_back(std::move(tree));
  }
  GradientPair final_gradients = logistic_gradients(scores, data.labels());
  return GbdtFit{std::move(model), std::move(final_gradients)};
}

}  // namespace labelflip
