//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gnc/core/error.hpp"
#include "gnc/core/hash.hpp"
#include "gnc/embedding/latent.hpp"

namespace gnc {

/// Drift and noise of dX = alpha (m - X) dt + sigma dW with
/// m = sum_k a_k X_k.
struct DriftSpec {
  std::vector<LatentVector> references;
  std::vector<double> weights;
  double alpha = 0.15;
  double sigma = 1.0;

  void validate() const {
    if (references.empty())
      throw Error(ErrorCode::kInvalidConfig, "drift needs a reference");
    if (weights.size() != references.size())
      throw Error(ErrorCode::kWeightSumViolation,
                  std::to_string(weights.size()) + " weights for "
                      + std::to_string(references.size()) + " references");
    for (const auto &r: references)
      require_same_dimension(r.size(), references.front().size());
    double sum = 0;
    for (double w: weights) {
      if (!(w >= 0))
        throw Error(ErrorCode::kWeightSumViolation, "negative weight");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw Error(ErrorCode::kWeightSumViolation,
                  "weights sum to " + std::to_string(sum));
    if (!(alpha > 0) || !std::isfinite(alpha))
      throw Error(ErrorCode::kInvalidConfig, "alpha must be positive");
    if (!(sigma >= 0) || !std::isfinite(sigma))
      throw Error(ErrorCode::kInvalidConfig, "sigma must be nonnegative");
  }

  std::size_t dimension() const { return references.front().size(); }

  /// Independent of the order in which (reference, weight) pairs are listed.
  std::uint64_t hash() const {
    auto order = canonical_order();
    std::uint64_t h = fnv1a("drift/v1");
    for (std::size_t k: order) {
      h = fnv1a(std::span<const double>(&weights[k], 1), h);
      h = fnv1a(references[k], h);
    }
    h = fnv1a(std::span<const double>(&alpha, 1), h);
    return fnv1a(std::span<const double>(&sigma, 1), h);
  }

  // Pairs sorted by (weight, vector) so that floating-point sums do not
  // depend on how the caller listed them.
  std::vector<std::size_t> canonical_order() const {
    std::vector<std::size_t> order(references.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (weights[x] != weights[y])
        return weights[x] < weights[y];
      return references[x] < references[y];
    });
    return order;
  }
};

inline LatentVector drift_target(const DriftSpec &spec) {
  spec.validate();
  LatentVector m(spec.dimension(), 0.0);
  for (std::size_t k: spec.canonical_order())
    for (std::size_t j = 0; j < m.size(); ++j)
      m[j] += spec.weights[k] * spec.references[k][j];
  return m;
}

using Rng = std::mt19937_64;

/// Independent stream for trajectory `index` of a run seeded with `seed`.
inline Rng split_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(hash_combine(seed, index)));
}

namespace internal {

inline void add_noise(LatentVector &x, double scale, Rng &rng) {
  if (scale == 0.0)
    return;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto &v: x)
    v += scale * normal(rng);
}

}  // namespace internal

/// Exact transition of the OU process over dt, given the drift target m.
inline LatentVector ou_exact_step(const LatentVector &x, const LatentVector &m,
                                  double alpha, double sigma, double dt,
                                  Rng &rng) {
  require_same_dimension(x.size(), m.size());
  if (!(dt > 0))
    throw Error(ErrorCode::kInvalidSchedule, "step must be positive");
  const double decay = std::exp(-alpha * dt);
  LatentVector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = m[j] + decay * (x[j] - m[j]);
  internal::add_noise(
      out, sigma * std::sqrt(-std::expm1(-2 * alpha * dt) / (2 * alpha)), rng);
  return out;
}

inline LatentVector ou_exact_step(const LatentVector &x, const DriftSpec &spec,
                                  double dt, Rng &rng) {
  return ou_exact_step(x, drift_target(spec), spec.alpha, spec.sigma, dt, rng);
}

inline LatentVector euler_maruyama_step(const LatentVector &x,
                                        const LatentVector &m, double alpha,
                                        double sigma, double dt, Rng &rng) {
  require_same_dimension(x.size(), m.size());
  if (!(dt > 0))
    throw Error(ErrorCode::kInvalidSchedule, "step must be positive");
  if (alpha * dt >= 1)
    throw Error(ErrorCode::kStepTooLarge,
                "alpha*dt = " + std::to_string(alpha * dt) + " >= 1");
  LatentVector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = x[j] + alpha * dt * (m[j] - x[j]);
  internal::add_noise(out, sigma * std::sqrt(dt), rng);
  return out;
}

inline LatentVector euler_maruyama_step(const LatentVector &x,
                                        const DriftSpec &spec, double dt,
                                        Rng &rng) {
  return euler_maruyama_step(x, drift_target(spec), spec.alpha, spec.sigma,
                             dt, rng);
}

struct Moments {
  LatentVector mean;
  double variance;  // per coordinate
};

/// Law of X(t) started from C: Gaussian with these moments.
inline Moments analytic_moments(const LatentVector &c, const DriftSpec &spec,
                                double t) {
  if (!(t >= 0))
    throw Error(ErrorCode::kInvalidSchedule, "time must be nonnegative");
  auto m = drift_target(spec);
  require_same_dimension(c.size(), m.size());
  const double decay = std::exp(-spec.alpha * t);
  Moments out { LatentVector(c.size()), 0.0 };
  for (std::size_t j = 0; j < c.size(); ++j)
    out.mean[j] = c[j] * decay + (1 - decay) * m[j];
  out.variance = spec.sigma * spec.sigma * -std::expm1(-2 * spec.alpha * t)
                 / (2 * spec.alpha);
  return out;
}

}  // namespace gnc
