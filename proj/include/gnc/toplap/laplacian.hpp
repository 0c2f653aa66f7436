//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "gnc/core/error.hpp"
#include "gnc/toplap/complex.hpp"

namespace gnc {

namespace internal {

// Orthogonal projector onto the null space of `d` (columns space).
inline Eigen::MatrixXd null_space_projector(const Eigen::MatrixXd &d) {
  const auto n = d.cols();
  if (d.rows() == 0 || n == 0)
    return Eigen::MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d.transpose() * d);
  const auto &lambda = eig.eigenvalues();
  const double tol = 1e-9 * std::max(1.0, lambda.size() ? lambda.maxCoeff() : 0.0);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) <= tol) {
      const auto v = eig.eigenvectors().col(i);
      p.noalias() += v * v.transpose();
    }
  return p;
}

}  // namespace internal

/// Persistent q-combinatorial Laplacian of K_t inside K_{t+p}:
///   L = D_in P D_in^T + (B_q^t)^T B_q^t
/// where D = boundary of the (q+1)-simplices of K_{t+p}, split into the rows
/// of q-simplices in K_t (D_in) and those born after t (D_out), and P
/// projects onto the null space of D_out, i.e. onto (q+1)-chains whose
/// boundary stays inside K_t. Rows follow the order of q-simplices in K_t.
/// For q = 0 this is the graph Laplacian of the 1-skeleton at t+p.
inline Eigen::MatrixXd persistent_laplacian(const FilteredComplex &k, int q,
                                            double t, double p) {
  if (q < 0 || q > 2)
    throw Error(ErrorCode::kOrderUnsupported,
                "Laplacian of order " + std::to_string(q));
  if (!(t >= 0) || !(p >= 0))
    throw Error(ErrorCode::kInvalidConfig, "t and p must be nonnegative");
  const double tp = t + p;

  if (q == 0) {
    Eigen::MatrixXd b = boundary_matrix(k, 1, tp).cast<double>();
    return b * b.transpose();
  }

  if (q == 1) {
    Eigen::MatrixXd down_b = boundary_matrix(k, 1, t).cast<double>();
    Eigen::MatrixXd l = down_b.transpose() * down_b;

    auto rows_tp = k.alive_edges(tp);
    Eigen::MatrixXd d = boundary_matrix(k, 2, tp).cast<double>();
    std::vector<int> in_rows, out_rows;
    for (int i = 0; i < static_cast<int>(rows_tp.size()); ++i)
      (k.edges[rows_tp[i]].birth <= t ? in_rows : out_rows).push_back(i);
    Eigen::MatrixXd d_in(in_rows.size(), d.cols());
    Eigen::MatrixXd d_out(out_rows.size(), d.cols());
    for (std::size_t i = 0; i < in_rows.size(); ++i)
      d_in.row(static_cast<Eigen::Index>(i)) = d.row(in_rows[i]);
    for (std::size_t i = 0; i < out_rows.size(); ++i)
      d_out.row(static_cast<Eigen::Index>(i)) = d.row(out_rows[i]);
    l += d_in * internal::null_space_projector(d_out) * d_in.transpose();
    return l;
  }

  // q == 2: no 3-simplices are built, so only the down term remains.
  Eigen::MatrixXd b = boundary_matrix(k, 2, t).cast<double>();
  return b.transpose() * b;
}

inline constexpr double kZeroEigenvalueTolerance = 1e-8;

/// Ascending eigenvalues of a symmetric matrix.
inline std::vector<double> spectrum(const Eigen::MatrixXd &m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::kNonSymmetric, "matrix is not square");
  if (m.size() == 0)
    return {};
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(ErrorCode::kNonSymmetric, "matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m,
                                                     Eigen::EigenvaluesOnly);
  const auto &v = eig.eigenvalues();
  return { v.data(), v.data() + v.size() };
}

inline double zero_threshold(const std::vector<double> &eigenvalues) {
  const double top = eigenvalues.empty() ? 0.0 : eigenvalues.back();
  return kZeroEigenvalueTolerance * std::max(1.0, top);
}

/// Number of (numerically) zero eigenvalues.
inline int betti(const std::vector<double> &eigenvalues) {
  const double eps = zero_threshold(eigenvalues);
  return static_cast<int>(std::count_if(
      eigenvalues.begin(), eigenvalues.end(),
      [eps](double x) { return x <= eps; }));
}

struct SpectralSummary {
  int q = 0;
  double t = 0, p = 0;
  std::vector<double> eigenvalues;
  int betti = 0;
};

inline SpectralSummary spectral_summary(const FilteredComplex &k, int q,
                                        double t, double p) {
  SpectralSummary s { q, t, p, spectrum(persistent_laplacian(k, q, t, p)), 0 };
  s.betti = betti(s.eigenvalues);
  return s;
}

}  // namespace gnc
