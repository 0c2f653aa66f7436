//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gnc/core/hash.hpp"
#include "gnc/toplap/laplacian.hpp"

namespace gnc {

inline constexpr int kStatsPerBlock = 9;

/// [betti, sum, mean, median, max, min, std, variance, sum of squares]; the
/// eight statistics run over the nonzero eigenvalues and are zero when there
/// are none. std and variance are population moments.
inline std::vector<double> spectral_statistics(
    const std::vector<double> &eigenvalues) {
  const double eps = zero_threshold(eigenvalues);
  std::vector<double> nz;
  for (double x: eigenvalues)
    if (x > eps)
      nz.push_back(x);
  std::vector<double> out(kStatsPerBlock, 0.0);
  out[0] = static_cast<double>(eigenvalues.size() - nz.size());
  if (nz.empty())
    return out;
  std::sort(nz.begin(), nz.end());
  const double n = static_cast<double>(nz.size());
  double sum = 0, sq = 0;
  for (double x: nz) {
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  double var = 0;
  for (double x: nz)
    var += (x - mean) * (x - mean);
  var /= n;
  const std::size_t h = nz.size() / 2;
  const double median = nz.size() % 2 ? nz[h] : 0.5 * (nz[h - 1] + nz[h]);
  out[1] = sum;
  out[2] = mean;
  out[3] = median;
  out[4] = nz.back();
  out[5] = nz.front();
  out[6] = std::sqrt(var);
  out[7] = var;
  out[8] = sq;
  return out;
}

struct TLFingerprintConfig {
  std::vector<ElementSet> element_sets {
    { "C", { Element::kC } },
    { "N", { Element::kN } },
    { "O", { Element::kO } },
    { "CN", { Element::kC, Element::kN } },
    { "CO", { Element::kC, Element::kO } },
    { "NO", { Element::kN, Element::kO } },
    { "heavy", {} },
  };
  std::vector<double> t_grid = default_t_grid();
  std::vector<double> p_grid { 0.0, 0.5 };
  std::vector<int> orders { 0 };

  static std::vector<double> default_t_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 18; ++i)
      g.push_back(1.0 + 0.5 * i);
    return g;
  }

  std::size_t length() const {
    return element_sets.size() * t_grid.size() * p_grid.size() * orders.size()
           * kStatsPerBlock;
  }

  /// Human-readable layout; blocks are ordered set, order, t, p.
  std::string layout() const {
    std::ostringstream os;
    os.precision(17);
    os << "tlfp/v1;sets=";
    for (std::size_t i = 0; i < element_sets.size(); ++i) {
      os << (i ? "|" : "") << element_sets[i].name << ":";
      for (auto e: element_sets[i].elements)
        os << symbol(e);
    }
    os << ";q=";
    for (int q: orders)
      os << q << ",";
    os << ";t=";
    for (double t: t_grid)
      os << t << ",";
    os << ";p=";
    for (double p: p_grid)
      os << p << ",";
    os << ";stats=betti,sum,mean,median,max,min,std,var,sumsq";
    return os.str();
  }

  std::uint64_t layout_hash() const { return fnv1a(layout()); }
};

struct TLFingerprint {
  std::vector<double> features;
  // One flag per (set, order, t, p) block: no atom of the set was present.
  std::vector<std::uint8_t> empty_blocks;
  std::uint64_t layout_hash = 0;
};

inline TLFingerprint tl_fingerprint(const LabeledPointCloud &cloud,
                                    const TLFingerprintConfig &config = {}) {
  if (cloud.empty())
    throw Error(ErrorCode::kEmptySelection, "empty point cloud");
  TLFingerprint fp;
  fp.layout_hash = config.layout_hash();
  fp.features.reserve(config.length());
  double max_radius = 0;
  for (double t: config.t_grid)
    for (double p: config.p_grid)
      max_radius = std::max(max_radius, t + p);
  const bool need_triangles = std::any_of(
      config.orders.begin(), config.orders.end(), [](int q) { return q >= 1; });
  const std::size_t cells = config.t_grid.size() * config.p_grid.size();

  for (const auto &set: config.element_sets) {
    FilteredComplex k;
    bool empty = false;
    try {
      k = build_filtration(cloud, set, max_radius, need_triangles ? 2 : 1);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kEmptySelection)
        throw;
      empty = true;
    }
    for (int q: config.orders) {
      if (empty) {
        fp.features.insert(fp.features.end(), cells * kStatsPerBlock, 0.0);
        fp.empty_blocks.insert(fp.empty_blocks.end(), cells, 1);
        continue;
      }
      // L0 depends on t+p only; many grid cells share it.
      std::map<std::pair<double, double>, std::vector<double>> memo;
      for (double t: config.t_grid)
        for (double p: config.p_grid) {
          auto key = q == 0 ? std::pair(t + p, 0.0) : std::pair(t, p);
          auto it = memo.find(key);
          if (it == memo.end())
            it = memo.emplace(key, spectrum(persistent_laplacian(k, q, t, p)))
                     .first;
          auto block = spectral_statistics(it->second);
          fp.features.insert(fp.features.end(), block.begin(), block.end());
          fp.empty_blocks.push_back(0);
        }
    }
  }
  return fp;
}

}  // namespace gnc
