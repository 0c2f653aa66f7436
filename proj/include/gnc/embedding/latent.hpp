//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gnc/core/error.hpp"
#include "gnc/core/hash.hpp"

namespace gnc {

inline constexpr int kDefaultLatentDimension = 512;

/// A point in the latent space. Plain storage; dimension checks happen at
/// the operations that combine vectors.
using LatentVector = std::vector<double>;

// Sequential left-to-right sum. Every similarity in the project goes through
// this kernel so rankings computed in different places agree bit for bit.
inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

inline void require_same_dimension(std::size_t a, std::size_t b) {
  if (a != b)
    throw Error(ErrorCode::kDimensionMismatch,
                "dimensions " + std::to_string(a) + " and "
                    + std::to_string(b));
}

inline bool all_finite(std::span<const double> v) {
  for (double x: v)
    if (!std::isfinite(x))
      return false;
  return true;
}

inline double rms(std::span<const double> v) {
  return v.empty() ? 0.0 : std::sqrt(dot(v, v) / static_cast<double>(v.size()));
}

inline std::uint64_t latent_hash(std::span<const double> v) {
  return fnv1a(v);
}

/// Generalized Tanimoto a.b / (|a|^2 + |b|^2 - a.b). Lies in [-1/3, 1];
/// equals 1 only for a == b.
inline double tanimoto_latent(std::span<const double> a,
                              std::span<const double> b) {
  require_same_dimension(a.size(), b.size());
  const double ab = dot(a, b);
  const double aa = dot(a, a);
  const double bb = dot(b, b);
  if (aa == 0.0 && bb == 0.0)
    throw Error(ErrorCode::kBothZero, "Tanimoto of two zero vectors");
  return ab / (aa + bb - ab);
}

}  // namespace gnc
