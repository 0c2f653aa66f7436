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
#include <string>
#include <vector>

#include "gnc/predict/regressor.hpp"

namespace gnc {

/// Fully connected network with tanh hidden layers and a linear scalar
/// output. Parameters are one flat vector: for each layer, the weight
/// matrix (row-major, out x in) followed by the bias.
class MlpNetwork {
public:
  MlpNetwork() = default;

  explicit MlpNetwork(std::vector<int> sizes): sizes_(std::move(sizes)) {
    if (sizes_.size() < 2 || sizes_.back() != 1)
      throw Error(ErrorCode::kInvalidConfig,
                  "network needs input and a scalar output layer");
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l)
      n += static_cast<std::size_t>(sizes_[l + 1]) * (sizes_[l] + 1);
    theta_.assign(n, 0.0);
  }

  const std::vector<int> &sizes() const noexcept { return sizes_; }
  std::vector<double> &parameters() noexcept { return theta_; }
  const std::vector<double> &parameters() const noexcept { return theta_; }

  /// Glorot-uniform weights, zero biases.
  void initialize(std::mt19937_64 &rng) {
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      const int in = sizes_[l], out = sizes_[l + 1];
      const double a = std::sqrt(6.0 / (in + out));
      std::uniform_real_distribution<double> u(-a, a);
      for (int k = 0; k < in * out; ++k)
        theta_[off + k] = u(rng);
      off += static_cast<std::size_t>(in) * out;
      std::fill_n(theta_.begin() + static_cast<long>(off), out, 0.0);
      off += out;
    }
  }

  Eigen::VectorXd forward(const Eigen::MatrixXd &x) const {
    Eigen::MatrixXd a = x;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < sizes_.size(); ++l) {
      auto [w, b] = layer(l, off);
      Eigen::MatrixXd z = (a * w.transpose()).rowwise() + b.transpose();
      a = l + 2 < sizes_.size() ? Eigen::MatrixXd(z.array().tanh()) : z;
    }
    return a.col(0);
  }

  /// Mean of 0.5 (f(x) - y)^2 over the rows, and its gradient with respect
  /// to the flat parameter vector when `grad` is non-null.
  double loss_and_gradient(const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
                           std::vector<double> *grad) const {
    const std::size_t layers = sizes_.size() - 1;
    std::vector<Eigen::MatrixXd> act { x };
    std::size_t off = 0;
    std::vector<std::size_t> offsets;
    for (std::size_t l = 0; l < layers; ++l) {
      offsets.push_back(off);
      auto [w, b] = layer(l, off);
      Eigen::MatrixXd z = (act.back() * w.transpose()).rowwise()
                          + b.transpose();
      act.push_back(l + 1 < layers ? Eigen::MatrixXd(z.array().tanh()) : z);
    }
    const double n = static_cast<double>(x.rows());
    Eigen::VectorXd err = act.back().col(0) - y;
    const double loss = 0.5 * err.squaredNorm() / n;
    if (!grad)
      return loss;

    grad->assign(theta_.size(), 0.0);
    Eigen::MatrixXd delta = err / n;  // dL/dz of the output layer
    for (std::size_t l = layers; l-- > 0;) {
      const int in = sizes_[l], out = sizes_[l + 1];
      Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>>
          gw(grad->data() + offsets[l], out, in);
      Eigen::Map<Eigen::VectorXd> gb(grad->data() + offsets[l] + in * out,
                                     out);
      gw = delta.transpose() * act[l];
      gb = delta.colwise().sum().transpose();
      if (l > 0) {
        std::size_t o = offsets[l];
        auto [w, b] = layer(l, o);
        delta = (delta * w).array()
                * (1.0 - act[l].array().square());
      }
    }
    return loss;
  }

private:
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>;

  std::pair<Eigen::Map<const RowMajor>, Eigen::Map<const Eigen::VectorXd>>
  layer(std::size_t l, std::size_t &off) const {
    const int in = sizes_[l], out = sizes_[l + 1];
    Eigen::Map<const RowMajor> w(theta_.data() + off, out, in);
    Eigen::Map<const Eigen::VectorXd> b(theta_.data() + off + in * out, out);
    off += static_cast<std::size_t>(out) * (in + 1);
    return { w, b };
  }

  std::vector<int> sizes_;
  std::vector<double> theta_;
};

struct MlpParams {
  std::vector<int> hidden { 256, 256 };
  int epochs = 200;
  double learning_rate = 1e-3;
  int batch_size = 32;
  std::uint64_t seed = 0;

  Json to_json() const {
    return { { "hidden", hidden }, { "epochs", epochs },
             { "learning_rate", learning_rate }, { "batch_size", batch_size },
             { "seed", seed } };
  }

  static MlpParams from_json(const Json &j) {
    MlpParams p;
    p.hidden = j.value("hidden", p.hidden);
    p.epochs = j.value("epochs", p.epochs);
    p.learning_rate = j.value("learning_rate", p.learning_rate);
    p.batch_size = j.value("batch_size", p.batch_size);
    p.seed = j.value("seed", p.seed);
    return p;
  }
};

/// MLP regressor trained with Adam on mini-batches. Inputs and target are
/// standardized with training statistics; constant columns get unit scale.
class MlpRegressor final: public Regressor {
public:
  MlpRegressor() = default;
  explicit MlpRegressor(MlpParams params): params_(std::move(params)) { }

  std::string kind() const override { return "mlp"; }
  const MlpParams &params() const noexcept { return params_; }
  const MlpNetwork &network() const noexcept { return net_; }
  const std::vector<double> &epoch_loss() const noexcept { return loss_; }

  void fit(const Eigen::MatrixXd &x, const Eigen::VectorXd &y) {
    const auto n = x.rows();
    if (n < 2 || y.size() != n)
      throw Error(ErrorCode::kTooFewRows, "MLP needs at least two rows");
    if (params_.epochs < 0 || params_.batch_size < 1
        || !(params_.learning_rate > 0))
      throw Error(ErrorCode::kInvalidConfig, "bad MLP parameters");
    record_training(x, y);
    loss_.clear();

    x_mean_ = x.colwise().mean();
    x_scale_ = ((x.rowwise() - x_mean_.transpose()).array().square()
                    .colwise().sum() / static_cast<double>(n)).sqrt();
    for (auto &s: x_scale_)
      if (!(s > 0))
        s = 1.0;
    y_mean_ = y.mean();
    y_scale_ = std::sqrt((y.array() - y_mean_).square().mean());
    if (!(y_scale_ > 0))
      y_scale_ = 1.0;
    Eigen::MatrixXd xs = standardize(x);
    Eigen::VectorXd ys = (y.array() - y_mean_) / y_scale_;

    std::vector<int> sizes { static_cast<int>(x.cols()) };
    sizes.insert(sizes.end(), params_.hidden.begin(), params_.hidden.end());
    sizes.push_back(1);
    net_ = MlpNetwork(sizes);
    std::mt19937_64 rng(params_.seed);
    net_.initialize(rng);

    auto &theta = net_.parameters();
    std::vector<double> m(theta.size(), 0.0), v(theta.size(), 0.0), g;
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    long step = 0;
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int epoch = 0; epoch < params_.epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (Eigen::Index start = 0; start < n; start += params_.batch_size) {
        const auto end = std::min<Eigen::Index>(n, start + params_.batch_size);
        Eigen::MatrixXd bx(end - start, x.cols());
        Eigen::VectorXd by(end - start);
        for (Eigen::Index i = start; i < end; ++i) {
          bx.row(i - start) = xs.row(order[i]);
          by(i - start) = ys(order[i]);
        }
        net_.loss_and_gradient(bx, by, &g);
        ++step;
        const double c1 = 1 - std::pow(b1, static_cast<double>(step));
        const double c2 = 1 - std::pow(b2, static_cast<double>(step));
        for (std::size_t k = 0; k < theta.size(); ++k) {
          m[k] = b1 * m[k] + (1 - b1) * g[k];
          v[k] = b2 * v[k] + (1 - b2) * g[k] * g[k];
          theta[k] -= params_.learning_rate * (m[k] / c1)
                      / (std::sqrt(v[k] / c2) + eps);
        }
      }
      const double loss = net_.loss_and_gradient(xs, ys, nullptr);
      loss_.push_back(loss);
      if (!std::isfinite(loss))
        throw Error(ErrorCode::kNonFiniteLoss,
                    "loss became non-finite at epoch " + std::to_string(epoch)
                        + " (learning rate "
                        + std::to_string(params_.learning_rate) + ")");
    }
  }

  Json params_json() const override { return params_.to_json(); }

  Json state_json() const override {
    return { { "sizes", net_.sizes() },
             { "theta", net_.parameters() },
             { "x_mean", std::vector<double>(x_mean_.begin(), x_mean_.end()) },
             { "x_scale",
               std::vector<double>(x_scale_.begin(), x_scale_.end()) },
             { "y_mean", y_mean_ },
             { "y_scale", y_scale_ } };
  }

  static std::unique_ptr<MlpRegressor> from_json(const Json &j) {
    auto r = std::make_unique<MlpRegressor>(MlpParams::from_json(j.at("params")));
    r->restore_common(j);
    const auto &s = j.at("state");
    r->net_ = MlpNetwork(s.at("sizes").get<std::vector<int>>());
    r->net_.parameters() = s.at("theta").get<std::vector<double>>();
    auto xm = s.at("x_mean").get<std::vector<double>>();
    auto xs = s.at("x_scale").get<std::vector<double>>();
    r->x_mean_ = Eigen::Map<Eigen::VectorXd>(xm.data(), static_cast<long>(xm.size()));
    r->x_scale_ = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<long>(xs.size()));
    r->y_mean_ = s.at("y_mean").get<double>();
    r->y_scale_ = s.at("y_scale").get<double>();
    return r;
  }

protected:
  Eigen::VectorXd predict_rows(const Eigen::MatrixXd &x) const override {
    return (net_.forward(standardize(x)).array() * y_scale_ + y_mean_)
        .matrix();
  }

private:
  Eigen::MatrixXd standardize(const Eigen::MatrixXd &x) const {
    return (x.rowwise() - x_mean_.transpose()).array().rowwise()
           / x_scale_.transpose().array();
  }

  MlpParams params_;
  MlpNetwork net_;
  Eigen::VectorXd x_mean_, x_scale_;
  double y_mean_ = 0, y_scale_ = 1;
  std::vector<double> loss_;
};

inline std::unique_ptr<MlpRegressor> fit_mlp(const Eigen::MatrixXd &x,
                                             const Eigen::VectorXd &y,
                                             const MlpParams &params = {}) {
  auto r = std::make_unique<MlpRegressor>(params);
  r->fit(x, y);
  return r;
}

}  // namespace gnc
