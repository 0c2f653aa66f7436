//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "gnc/core/error.hpp"
#include "gnc/molgraph/structure.hpp"

namespace gnc {

/// Which atoms of a cloud enter a complex. An empty element list selects
/// every heavy atom.
struct ElementSet {
  std::string name;
  std::vector<Element> elements;

  bool contains(Element e) const {
    if (elements.empty())
      return e != Element::kH;
    return std::find(elements.begin(), elements.end(), e) != elements.end();
  }
};

struct FilteredEdge {
  int u, v;  // u < v
  double birth;
};

struct FilteredTriangle {
  int a, b, c;  // a < b < c
  double birth;
};

/// Vietoris-Rips filtration truncated at `max_radius` and dimension 2.
/// Vertices are present from the start; an edge is born at half the
/// distance between its endpoints (alive at radius r iff distance <= 2r);
/// a triangle is born with its last edge. Simplices are stored in
/// lexicographic vertex order.
struct FilteredComplex {
  std::vector<LabeledPoint> vertices;
  std::vector<FilteredEdge> edges;
  std::vector<FilteredTriangle> triangles;

  int vertex_count() const noexcept { return static_cast<int>(vertices.size()); }

  std::vector<int> alive_edges(double radius) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(edges.size()); ++i)
      if (edges[i].birth <= radius)
        out.push_back(i);
    return out;
  }

  std::vector<int> alive_triangles(double radius) const {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(triangles.size()); ++i)
      if (triangles[i].birth <= radius)
        out.push_back(i);
    return out;
  }

  int edge_index(int u, int v) const {
    if (u > v)
      std::swap(u, v);
    auto it = std::lower_bound(
        edges.begin(), edges.end(), std::pair(u, v),
        [](const FilteredEdge &e, std::pair<int, int> key) {
          return std::pair(e.u, e.v) < key;
        });
    if (it == edges.end() || it->u != u || it->v != v)
      return -1;
    return static_cast<int>(it - edges.begin());
  }
};

inline FilteredComplex build_filtration(const LabeledPointCloud &cloud,
                                        const ElementSet &filter,
                                        double max_radius, int max_dim = 2) {
  FilteredComplex k;
  for (const auto &p: cloud.points)
    if (filter.contains(p.element))
      k.vertices.push_back(p);
  if (k.vertices.empty())
    throw Error(ErrorCode::kEmptySelection,
                "no atom matches element set '" + filter.name + "'");
  const int n = k.vertex_count();
  if (max_dim < 1)
    return k;

  std::vector<double> birth(static_cast<std::size_t>(n) * n, -1.0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const double b = distance(k.vertices[u], k.vertices[v]) / 2;
      if (b <= max_radius) {
        k.edges.push_back({ u, v, b });
        birth[u * n + v] = b;
      }
    }
  if (max_dim < 2)
    return k;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double ab = birth[a * n + b];
      if (ab < 0)
        continue;
      for (int c = b + 1; c < n; ++c) {
        const double ac = birth[a * n + c], bc = birth[b * n + c];
        if (ac < 0 || bc < 0)
          continue;
        k.triangles.push_back({ a, b, c, std::max({ ab, ac, bc }) });
      }
    }
  return k;
}

/// Signed incidence matrix of the boundary map from q-simplices to
/// (q-1)-simplices, both restricted to those alive at `radius`. Rows and
/// columns follow the complex's storage order.
inline Eigen::MatrixXi boundary_matrix(const FilteredComplex &k, int q,
                                       double radius) {
  if (q == 1) {
    auto cols = k.alive_edges(radius);
    Eigen::MatrixXi b = Eigen::MatrixXi::Zero(k.vertex_count(),
                                              static_cast<int>(cols.size()));
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
      const auto &e = k.edges[cols[j]];
      b(e.u, j) = -1;
      b(e.v, j) = 1;
    }
    return b;
  }
  if (q == 2) {
    auto rows = k.alive_edges(radius);
    auto cols = k.alive_triangles(radius);
    std::vector<int> row_of(k.edges.size(), -1);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      row_of[rows[i]] = i;
    Eigen::MatrixXi b = Eigen::MatrixXi::Zero(static_cast<int>(rows.size()),
                                              static_cast<int>(cols.size()));
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
      const auto &t = k.triangles[cols[j]];
      // d[a,b,c] = [b,c] - [a,c] + [a,b]
      b(row_of[k.edge_index(t.b, t.c)], j) = 1;
      b(row_of[k.edge_index(t.a, t.c)], j) = -1;
      b(row_of[k.edge_index(t.a, t.b)], j) = 1;
    }
    return b;
  }
  throw Error(ErrorCode::kOrderUnsupported,
              "boundary of order " + std::to_string(q));
}

}  // namespace gnc
