//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <vector>

#include "gnc/predict/regressor.hpp"

namespace gnc {

struct GbdtParams {
  int trees = 500;
  int depth = 6;
  double learning_rate = 0.05;
  double subsample = 0.8;
  int min_samples_leaf = 1;
  std::uint64_t seed = 0;

  Json to_json() const {
    return { { "trees", trees }, { "depth", depth },
             { "learning_rate", learning_rate }, { "subsample", subsample },
             { "min_samples_leaf", min_samples_leaf }, { "seed", seed } };
  }

  static GbdtParams from_json(const Json &j) {
    GbdtParams p;
    p.trees = j.value("trees", p.trees);
    p.depth = j.value("depth", p.depth);
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.subsample = j.value("subsample", p.subsample);
    p.min_samples_leaf = j.value("min_samples_leaf", p.min_samples_leaf);
    p.seed = j.value("seed", p.seed);
    return p;
  }
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;  // x[feature] <= threshold goes left
  int left = -1, right = -1;
  double value = 0;
};

using RegressionTree = std::vector<TreeNode>;

inline double evaluate_tree(const RegressionTree &tree,
                            const Eigen::Ref<const Eigen::RowVectorXd> &x) {
  int i = 0;
  while (tree[i].feature >= 0)
    i = x(tree[i].feature) <= tree[i].threshold ? tree[i].left : tree[i].right;
  return tree[i].value;
}

/// Least-squares gradient boosting of depth-limited regression trees.
class GbdtRegressor final: public Regressor {
public:
  GbdtRegressor() = default;
  explicit GbdtRegressor(GbdtParams params): params_(params) { }

  std::string kind() const override { return "gbdt"; }
  const GbdtParams &params() const noexcept { return params_; }
  const std::vector<RegressionTree> &trees() const noexcept { return trees_; }
  double base() const noexcept { return base_; }
  // Mean squared error on the training rows after each stage (index 0 is
  // the constant model).
  const std::vector<double> &training_loss() const noexcept { return loss_; }

  void fit(const Eigen::MatrixXd &x, const Eigen::VectorXd &y) {
    const auto n = static_cast<int>(x.rows());
    if (n < 2 || y.size() != n)
      throw Error(ErrorCode::kTooFewRows, "GBDT needs at least two rows");
    if (params_.trees < 0 || params_.depth < 1 || !(params_.subsample > 0)
        || params_.subsample > 1 || params_.min_samples_leaf < 1)
      throw Error(ErrorCode::kInvalidConfig, "bad GBDT parameters");
    record_training(x, y);
    trees_.clear();
    loss_.clear();
    warnings_.clear();
    base_ = y.mean();

    // Features that vary at all, each presorted once.
    std::vector<int> usable;
    std::vector<std::vector<int>> sorted;
    for (int f = 0; f < x.cols(); ++f) {
      if (x.col(f).minCoeff() == x.col(f).maxCoeff())
        continue;
      usable.push_back(f);
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return x(a, f) < x(b, f); });
      sorted.push_back(std::move(order));
    }
    Eigen::VectorXd fitted = Eigen::VectorXd::Constant(n, base_);
    loss_.push_back((y - fitted).squaredNorm() / n);
    if (usable.empty()) {
      warnings_.push_back(
          "DegenerateFeatures: all features are constant; fitted the mean");
      return;
    }

    std::mt19937_64 rng(params_.seed);
    const int m = std::max(
        1, static_cast<int>(std::lround(params_.subsample * n)));
    std::vector<int> perm(n);
    for (int k = 0; k < params_.trees; ++k) {
      std::vector<char> in_sample(n, 1);
      if (m < n) {
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::fill(in_sample.begin(), in_sample.end(), 0);
        for (int i = 0; i < m; ++i)
          in_sample[perm[i]] = 1;
      }
      Eigen::VectorXd residual = y - fitted;
      RegressionTree tree = grow(x, residual, in_sample, usable, sorted);
      for (int i = 0; i < n; ++i)
        fitted(i) += params_.learning_rate * evaluate_tree(tree, x.row(i));
      trees_.push_back(std::move(tree));
      loss_.push_back((y - fitted).squaredNorm() / n);
    }
  }

  Json params_json() const override { return params_.to_json(); }

  Json state_json() const override {
    Json trees = Json::array();
    for (const auto &t: trees_) {
      Json nodes = Json::array();
      for (const auto &nd: t)
        nodes.push_back({ nd.feature, nd.threshold, nd.left, nd.right,
                          nd.value });
      trees.push_back(std::move(nodes));
    }
    return { { "base", base_ }, { "trees", std::move(trees) },
             { "warnings", warnings_ } };
  }

  static std::unique_ptr<GbdtRegressor> from_json(const Json &j) {
    auto r = std::make_unique<GbdtRegressor>(
        GbdtParams::from_json(j.at("params")));
    r->restore_common(j);
    const auto &s = j.at("state");
    r->base_ = s.at("base").get<double>();
    for (const auto &t: s.at("trees")) {
      RegressionTree tree;
      for (const auto &nd: t)
        tree.push_back({ nd[0].get<int>(), nd[1].get<double>(),
                         nd[2].get<int>(), nd[3].get<int>(),
                         nd[4].get<double>() });
      r->trees_.push_back(std::move(tree));
    }
    r->warnings_ = s.value("warnings", std::vector<std::string>{});
    return r;
  }

protected:
  Eigen::VectorXd predict_rows(const Eigen::MatrixXd &x) const override {
    Eigen::VectorXd out(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      double s = base_;
      for (const auto &t: trees_)
        s += params_.learning_rate * evaluate_tree(t, x.row(i));
      out(i) = s;
    }
    return out;
  }

private:
  struct Split {
    double gain = 0;
    int feature = -1;
    double threshold = 0;
  };

  // Level-wise growth: one sweep over every presorted feature finds the best
  // split of every open node at once.
  RegressionTree grow(const Eigen::MatrixXd &x, const Eigen::VectorXd &r,
                      const std::vector<char> &in_sample,
                      const std::vector<int> &usable,
                      const std::vector<std::vector<int>> &sorted) const {
    const int n = static_cast<int>(x.rows());
    RegressionTree tree(1);
    std::vector<int> node_of(n, -1);
    for (int i = 0; i < n; ++i)
      if (in_sample[i])
        node_of[i] = 0;
    std::vector<int> open { 0 };

    for (int level = 0; level <= params_.depth && !open.empty(); ++level) {
      const int slots = static_cast<int>(tree.size());
      std::vector<double> total_sum(slots, 0.0);
      std::vector<int> total_cnt(slots, 0);
      for (int i = 0; i < n; ++i)
        if (node_of[i] >= 0) {
          total_sum[node_of[i]] += r(i);
          ++total_cnt[node_of[i]];
        }
      for (int id: open)
        tree[id].value = total_cnt[id] ? total_sum[id] / total_cnt[id] : 0.0;
      if (level == params_.depth)
        break;

      std::vector<char> is_open(slots, 0);
      for (int id: open)
        is_open[id] = 1;
      std::vector<Split> best(slots);
      std::vector<double> left_sum(slots);
      std::vector<int> left_cnt(slots);
      std::vector<double> last(slots);
      const int min_leaf = params_.min_samples_leaf;
      for (std::size_t fi = 0; fi < usable.size(); ++fi) {
        const int f = usable[fi];
        std::fill(left_sum.begin(), left_sum.end(), 0.0);
        std::fill(left_cnt.begin(), left_cnt.end(), 0);
        for (int row: sorted[fi]) {
          const int id = node_of[row];
          if (id < 0 || !is_open[id])
            continue;
          const double v = x(row, f);
          const int nl = left_cnt[id];
          const int nr = total_cnt[id] - nl;
          if (nl >= min_leaf && nr >= min_leaf && v > last[id]) {
            const double sl = left_sum[id];
            const double sr = total_sum[id] - sl;
            const double gain = sl * sl / nl + sr * sr / nr
                                - total_sum[id] * total_sum[id]
                                      / total_cnt[id];
            // Threshold at the largest left value, so splits depend on
            // feature order only.
            if (gain > best[id].gain)
              best[id] = { gain, f, last[id] };
          }
          left_sum[id] += r(row);
          ++left_cnt[id];
          last[id] = v;
        }
      }

      std::vector<int> next;
      for (int id: open) {
        if (best[id].feature < 0 || best[id].gain <= 1e-15)
          continue;
        const int l = static_cast<int>(tree.size());
        tree.push_back({});
        tree.push_back({});
        tree[id].feature = best[id].feature;
        tree[id].threshold = best[id].threshold;
        tree[id].left = l;
        tree[id].right = l + 1;
        next.push_back(l);
        next.push_back(l + 1);
      }
      for (int i = 0; i < n; ++i) {
        const int id = node_of[i];
        if (id >= 0 && id < slots && tree[id].feature >= 0)
          node_of[i] = x(i, tree[id].feature) <= tree[id].threshold
                           ? tree[id].left
                           : tree[id].right;
      }
      open.swap(next);
    }
    return tree;
  }

  GbdtParams params_;
  double base_ = 0;
  std::vector<RegressionTree> trees_;
  std::vector<double> loss_;
};

inline std::unique_ptr<GbdtRegressor> fit_gbdt(const Eigen::MatrixXd &x,
                                               const Eigen::VectorXd &y,
                                               const GbdtParams &params = {}) {
  auto r = std::make_unique<GbdtRegressor>(params);
  r->fit(x, y);
  return r;
}

}  // namespace gnc
