//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Independent reference implementations used only by the tests. Each one
// is deliberately naive: brute force, exact integer arithmetic, or a direct
// textbook formula, never a call back into the code under test.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gnc/molgraph/molecule.hpp"
#include "gnc/toplap/complex.hpp"

namespace gnc::oracle {

/// Relabels atoms by `perm` (new index of old atom i is perm[i]) and
/// shuffles the bond list and endpoint order.
inline Molecule permute(const Molecule &m, const std::vector<int> &perm,
                        std::mt19937_64 &rng) {
  std::vector<Atom> atoms(m.atom_count());
  for (int i = 0; i < m.atom_count(); ++i)
    atoms[perm[i]] = m.atom(i);
  std::vector<Bond> bonds;
  for (const auto &b: m.bonds()) {
    Bond c = b;
    c.a = perm[b.a];
    c.b = perm[b.b];
    if (rng() & 1)
      std::swap(c.a, c.b);
    bonds.push_back(c);
  }
  std::shuffle(bonds.begin(), bonds.end(), rng);
  return Molecule(std::move(atoms), std::move(bonds));
}

inline Molecule random_permutation(const Molecule &m, std::mt19937_64 &rng) {
  std::vector<int> perm(m.atom_count());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return permute(m, perm, rng);
}

namespace detail {

inline bool same_atom(const Atom &a, const Atom &b) {
  return a.element == b.element && a.charge == b.charge
         && a.hydrogens == b.hydrogens && a.aromatic == b.aromatic;
}

inline int order_between(const Molecule &m, int a, int b) {
  const int bi = m.find_bond(a, b);
  return bi < 0 ? 0 : static_cast<int>(m.bond(bi).order);
}

// Backtracking over all label-preserving bijections a -> b.
inline void extend(const Molecule &a, const Molecule &b, std::vector<int> &map,
                   std::vector<char> &used, int i,
                   const std::function<bool(const std::vector<int> &)> &found,
                   bool &stop) {
  if (stop)
    return;
  const int n = a.atom_count();
  if (i == n) {
    stop = found(map);
    return;
  }
  for (int j = 0; j < n && !stop; ++j) {
    if (used[j] || !same_atom(a.atom(i), b.atom(j))
        || a.degree(i) != b.degree(j))
      continue;
    bool ok = true;
    for (int k = 0; k < i && ok; ++k)
      ok = order_between(a, i, k) == order_between(b, j, map[k]);
    if (!ok)
      continue;
    map[i] = j;
    used[j] = 1;
    extend(a, b, map, used, i + 1, found, stop);
    used[j] = 0;
  }
}

}  // namespace detail

/// Labeled-graph isomorphism by exhaustive search (small molecules only).
inline bool isomorphic(const Molecule &a, const Molecule &b) {
  if (a.atom_count() != b.atom_count() || a.bond_count() != b.bond_count())
    return false;
  std::vector<int> map(a.atom_count(), -1);
  std::vector<char> used(a.atom_count(), 0);
  bool stop = false;
  detail::extend(a, b, map, used, 0, [](const std::vector<int> &) { return true; },
                 stop);
  return stop;
}

/// Automorphism orbits: orbit[i] is the smallest atom index i maps to.
inline std::vector<int> automorphism_orbits(const Molecule &m) {
  const int n = m.atom_count();
  std::vector<int> orbit(n);
  std::iota(orbit.begin(), orbit.end(), 0);
  std::vector<int> map(n, -1);
  std::vector<char> used(n, 0);
  bool stop = false;
  detail::extend(m, m, map, used, 0,
                 [&](const std::vector<int> &p) {
                   for (int i = 0; i < n; ++i)
                     orbit[p[i]] = std::min(orbit[p[i]], i);
                   return false;
                 },
                 stop);
  // Every automorphism is visited, so each atom ends at its orbit minimum.
  return orbit;
}

struct UnionFind {
  std::vector<int> parent;

  explicit UnionFind(int n): parent(n) { std::iota(parent.begin(), parent.end(), 0); }

  int find(int x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  }

  void unite(int a, int b) { parent[find(a)] = find(b); }

  int components() {
    int c = 0;
    for (int i = 0; i < static_cast<int>(parent.size()); ++i)
      c += find(i) == i;
    return c;
  }
};

/// Components of the graph with an edge wherever distance <= 2r.
inline int rips_components(const std::vector<LabeledPoint> &pts, double r) {
  UnionFind uf(static_cast<int>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y,
                   dz = pts[i].z - pts[j].z;
      if (std::sqrt(dx * dx + dy * dy + dz * dz) <= 2 * r)
        uf.unite(static_cast<int>(i), static_cast<int>(j));
    }
  return uf.components();
}

inline constexpr std::int64_t kPrime = 1'000'003;

/// Rank over GF(kPrime) by Gaussian elimination.
inline int rank_mod_p(std::vector<std::vector<std::int64_t>> a) {
  auto inv = [](std::int64_t x) {
    std::int64_t r = 1, e = kPrime - 2;
    x %= kPrime;
    while (e) {
      if (e & 1)
        r = r * x % kPrime;
      x = x * x % kPrime;
      e >>= 1;
    }
    return r;
  };
  const int rows = static_cast<int>(a.size());
  const int cols = rows ? static_cast<int>(a[0].size()) : 0;
  for (auto &row: a)
    for (auto &v: row)
      v = ((v % kPrime) + kPrime) % kPrime;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][c]) {
        piv = r;
        break;
      }
    if (piv < 0)
      continue;
    std::swap(a[piv], a[rank]);
    const auto s = inv(a[rank][c]);
    for (auto &v: a[rank])
      v = v * s % kPrime;
    for (int r = 0; r < rows; ++r)
      if (r != rank && a[r][c]) {
        const auto f = a[r][c];
        for (int k = 0; k < cols; ++k)
          a[r][k] = ((a[r][k] - f * a[rank][k]) % kPrime + kPrime) % kPrime;
      }
    ++rank;
  }
  return rank;
}

/// Simplicial complex given by explicit simplex lists, each simplex a sorted
/// vertex tuple with a birth value. Built straight from the points, without
/// the library's filtration code.
struct PlainComplex {
  std::vector<std::vector<int>> simplices[3];
  std::vector<double> births[3];
};

inline PlainComplex plain_rips(const std::vector<LabeledPoint> &pts) {
  PlainComplex k;
  const int n = static_cast<int>(pts.size());
  auto d = [&](int i, int j) {
    const double dx = pts[i].x - pts[j].x, dy = pts[i].y - pts[j].y,
                 dz = pts[i].z - pts[j].z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  };
  for (int i = 0; i < n; ++i) {
    k.simplices[0].push_back({ i });
    k.births[0].push_back(0.0);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      k.simplices[1].push_back({ i, j });
      k.births[1].push_back(d(i, j) / 2);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int l = j + 1; l < n; ++l) {
        k.simplices[2].push_back({ i, j, l });
        k.births[2].push_back(std::max({ d(i, j), d(i, l), d(j, l) }) / 2);
      }
  return k;
}

/// Boundary of dimension-q simplices alive at `col_r` into dimension-(q-1)
/// simplices selected by `row_pred`, as an integer matrix.
inline std::vector<std::vector<std::int64_t>>
plain_boundary(const PlainComplex &k, int q, double col_r,
               const std::function<bool(int)> &row_pred) {
  std::vector<int> rows, cols;
  for (int i = 0; i < static_cast<int>(k.simplices[q - 1].size()); ++i)
    if (row_pred(i))
      rows.push_back(i);
  for (int j = 0; j < static_cast<int>(k.simplices[q].size()); ++j)
    if (k.births[q][j] <= col_r)
      cols.push_back(j);
  std::vector<std::vector<std::int64_t>> m(
      rows.size(), std::vector<std::int64_t>(cols.size(), 0));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto &s = k.simplices[q][cols[c]];
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      std::vector<int> face;
      for (std::size_t v = 0; v < s.size(); ++v)
        if (v != drop)
          face.push_back(s[v]);
      const auto it = std::find(k.simplices[q - 1].begin(),
                                k.simplices[q - 1].end(), face);
      const int fi = static_cast<int>(it - k.simplices[q - 1].begin());
      const auto r = std::find(rows.begin(), rows.end(), fi);
      if (r != rows.end())
        m[r - rows.begin()][c] = (drop % 2 == 0) ? 1 : -1;
    }
  }
  return m;
}

/// Rank of H_q(K_t) -> H_q(K_{t+p}) via
///   n_q(t) - rank d_q(t) - rank d_{q+1}(t+p) + rank d_{q+1}(t+p)|rows born after t.
/// Valid for q in {0, 1}; triangles are the top dimension.
inline int persistent_betti(const PlainComplex &k, int q, double t, double p) {
  const double tp = t + p;
  int n_q = 0;
  for (double b: k.births[q])
    n_q += b <= t;
  const int rank_down = q == 0 ? 0
                                : rank_mod_p(plain_boundary(
                                      k, q, t, [&](int i) {
                                        return k.births[q - 1][i] <= t;
                                      }));
  const int rank_up = rank_mod_p(plain_boundary(
      k, q + 1, tp, [&](int i) { return k.births[q][i] <= tp; }));
  const int rank_out = rank_mod_p(plain_boundary(k, q + 1, tp, [&](int i) {
    return k.births[q][i] > t && k.births[q][i] <= tp;
  }));
  return n_q - rank_down - rank_up + rank_out;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x)
      ++i;
    while (j < b.size() && b[j] <= x)
      ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

/// Asymptotic p-value of the two-sample KS statistic.
inline double ks_pvalue(double d, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * m / (n + m);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double sum = 0;
  for (int k = 1; k <= 100; ++k)
    sum += 2 * ((k % 2) ? 1 : -1) * std::exp(-2 * k * k * lambda * lambda);
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace gnc::oracle
