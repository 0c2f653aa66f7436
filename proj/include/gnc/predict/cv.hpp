//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gnc/predict/gbdt.hpp"
#include "gnc/predict/mlp.hpp"

namespace gnc {

/// Pearson correlation; 0 when either side has zero variance.
inline double pearson_r(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
  if (a.size() != b.size() || a.size() < 2)
    throw Error(ErrorCode::kTooFewRows, "Pearson R needs two paired rows");
  const Eigen::ArrayXd da = a.array() - a.mean();
  const Eigen::ArrayXd db = b.array() - b.mean();
  const double saa = (da * da).sum(), sbb = (db * db).sum();
  if (saa == 0 || sbb == 0)
    return 0.0;
  return (da * db).sum() / std::sqrt(saa * sbb);
}

inline double rmse(const Eigen::VectorXd &pred, const Eigen::VectorXd &truth) {
  if (pred.size() != truth.size() || pred.size() == 0)
    throw Error(ErrorCode::kTooFewRows, "RMSE needs paired rows");
  return std::sqrt((pred - truth).squaredNorm()
                   / static_cast<double>(pred.size()));
}

/// A regressor kind with its parameters; make() yields an untrained model.
struct ModelSpec {
  std::string kind = "gbdt";
  GbdtParams gbdt;
  MlpParams mlp;

  std::unique_ptr<Regressor> fit(const Eigen::MatrixXd &x,
                                 const Eigen::VectorXd &y) const {
    if (kind == "gbdt")
      return fit_gbdt(x, y, gbdt);
    if (kind == "mlp")
      return fit_mlp(x, y, mlp);
    throw Error(ErrorCode::kInvalidConfig, "unknown model kind '" + kind + "'");
  }
};

inline std::unique_ptr<Regressor> load_regressor(const Json &j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "gbdt")
    return GbdtRegressor::from_json(j);
  if (kind == "mlp")
    return MlpRegressor::from_json(j);
  throw Error(ErrorCode::kSchemaMismatch, "unknown model kind '" + kind + "'");
}

struct FoldResult {
  int fold;
  std::size_t rows;
  double r;
  double rmse;
};

struct CvReport {
  std::vector<FoldResult> folds;
  double mean_r = 0;
  double mean_rmse = 0;
  Eigen::VectorXd out_of_fold;  // prediction for every row from its held-out fold

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "fold,rows,pearson_r,rmse_kcal_mol\n";
    for (const auto &f: folds)
      os << f.fold << "," << f.rows << "," << f.r << "," << f.rmse << "\n";
    std::size_t total = 0;
    for (const auto &f: folds)
      total += f.rows;
    os << "mean," << total << "," << mean_r << "," << mean_rmse << "\n";
    return os.str();
  }
};

/// Seeded fold assignment: rows are shuffled once, then dealt round-robin.
inline std::vector<int> fold_assignment(std::size_t rows, int k,
                                        std::uint64_t seed) {
  std::vector<std::size_t> perm(rows);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> fold(rows);
  for (std::size_t p = 0; p < rows; ++p)
    fold[perm[p]] = static_cast<int>(p % static_cast<std::size_t>(k));
  return fold;
}

using FitFunction = std::function<std::unique_ptr<Regressor>(
    const Eigen::MatrixXd &, const Eigen::VectorXd &)>;

inline CvReport kfold_cv(const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
                         int k, const FitFunction &fit, std::uint64_t seed) {
  if (k < 2)
    throw Error(ErrorCode::kInvalidConfig, "k-fold needs k >= 2");
  if (x.rows() < k || y.size() != x.rows())
    throw Error(ErrorCode::kTooFewRows,
                std::to_string(x.rows()) + " rows for " + std::to_string(k)
                    + " folds");
  const auto fold = fold_assignment(static_cast<std::size_t>(x.rows()), k,
                                    seed);
  CvReport rep;
  rep.out_of_fold.resize(x.rows());
  for (int f = 0; f < k; ++f) {
    std::vector<Eigen::Index> train, test;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      (fold[i] == f ? test : train).push_back(i);
    Eigen::MatrixXd xtr = x(train, Eigen::all);
    Eigen::VectorXd ytr = y(train);
    Eigen::MatrixXd xte = x(test, Eigen::all);
    Eigen::VectorXd yte = y(test);
    auto model = fit(xtr, ytr);
    Eigen::VectorXd pred = model->predict(xte);
    for (std::size_t i = 0; i < test.size(); ++i)
      rep.out_of_fold(test[i]) = pred(static_cast<Eigen::Index>(i));
    FoldResult fr { f + 1, test.size(),
                    test.size() >= 2 ? pearson_r(pred, yte) : 0.0,
                    rmse(pred, yte) };
    rep.folds.push_back(fr);
    rep.mean_r += fr.r / k;
    rep.mean_rmse += fr.rmse / k;
  }
  return rep;
}

inline CvReport kfold_cv(const Eigen::MatrixXd &x, const Eigen::VectorXd &y,
                         int k, const ModelSpec &spec, std::uint64_t seed) {
  return kfold_cv(
      x, y, k,
      [&](const Eigen::MatrixXd &a, const Eigen::VectorXd &b) {
        return spec.fit(a, b);
      },
      seed);
}

}  // namespace gnc
