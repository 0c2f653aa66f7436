//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gnc/core/error.hpp"
#include "gnc/molgraph/element.hpp"
#include "gnc/molgraph/molecule.hpp"

namespace gnc {

struct LabeledPoint {
  double x = 0, y = 0, z = 0;  // angstroms
  Element element = Element::kC;
};

struct LabeledPointCloud {
  std::vector<LabeledPoint> points;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

inline double distance(const LabeledPoint &a, const LabeledPoint &b) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

enum class StructureFormat { kXyz, kSdf };

namespace internal {

inline std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty())
    lines.pop_back();
  return lines;
}

[[noreturn]] inline void malformed(std::size_t line_no, const std::string &msg) {
  throw Error(ErrorCode::kMalformedRecord, msg, line_no);
}

inline LabeledPoint read_point(const std::string &symbol_text, double x,
                               double y, double z, std::size_t line_no) {
  auto e = element_from_symbol(symbol_text);
  if (!e)
    malformed(line_no, "unsupported element '" + symbol_text + "'");
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
    malformed(line_no, "non-finite coordinate");
  return { x, y, z, *e };
}

inline LabeledPointCloud load_xyz(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.empty())
    malformed(1, "empty file");
  std::istringstream head(lines[0]);
  long n = -1;
  if (!(head >> n) || n < 1)
    malformed(1, "bad atom count");
  if (lines.size() < static_cast<std::size_t>(n) + 2)
    malformed(lines.size() + 1, "expected " + std::to_string(n) + " atom lines");
  LabeledPointCloud cloud;
  for (long i = 0; i < n; ++i) {
    const std::size_t line_no = static_cast<std::size_t>(i) + 3;
    std::istringstream in(lines[line_no - 1]);
    std::string sym;
    double x, y, z;
    if (!(in >> sym >> x >> y >> z))
      malformed(line_no, "expected 'symbol x y z'");
    cloud.points.push_back(read_point(sym, x, y, z, line_no));
  }
  return cloud;
}

inline int fixed_int(const std::string &line, std::size_t pos, std::size_t len,
                     std::size_t line_no) {
  if (line.size() < pos + 1)
    malformed(line_no, "truncated counts line");
  std::istringstream in(line.substr(pos, len));
  int v = -1;
  if (!(in >> v) || v < 0)
    malformed(line_no, "bad counts field");
  return v;
}

// V2000: three header lines, counts line, atom block, bond block, "M  END".
inline LabeledPointCloud load_sdf(std::string_view text) {
  auto lines = split_lines(text);
  if (lines.size() < 4)
    malformed(lines.size() + 1, "missing counts line");
  const auto &counts = lines[3];
  if (counts.find("V3000") != std::string::npos)
    malformed(4, "V3000 is not supported");
  const int na = fixed_int(counts, 0, 3, 4);
  const int nb = fixed_int(counts, 3, 3, 4);
  if (na < 1)
    malformed(4, "no atoms");

  LabeledPointCloud cloud;
  for (int i = 0; i < na; ++i) {
    const std::size_t line_no = 5 + static_cast<std::size_t>(i);
    if (line_no > lines.size())
      malformed(line_no, "counts line declares " + std::to_string(na)
                             + " atoms but the atom block is shorter");
    std::istringstream in(lines[line_no - 1]);
    double x, y, z;
    std::string sym;
    if (!(in >> x >> y >> z >> sym))
      malformed(line_no, "expected 'x y z symbol'");
    cloud.points.push_back(read_point(sym, x, y, z, line_no));
  }
  for (int i = 0; i < nb; ++i) {
    const std::size_t line_no = 5 + static_cast<std::size_t>(na + i);
    if (line_no > lines.size())
      malformed(line_no, "counts line declares " + std::to_string(nb)
                             + " bonds but the bond block is shorter");
    const auto &line = lines[line_no - 1];
    std::istringstream in(line);
    int a, b, order;
    if (line.rfind("M  ", 0) == 0 || !(in >> a >> b >> order))
      malformed(line_no, "expected bond record");
    if (a < 1 || b < 1 || a > na || b > na)
      malformed(line_no, "bond references missing atom");
  }
  const std::size_t after = 5 + static_cast<std::size_t>(na + nb);
  if (after <= lines.size()) {
    const auto &line = lines[after - 1];
    if (line.rfind("M  ", 0) != 0 && line != "$$$$")
      malformed(after, "extra record after bond block");
  }
  return cloud;
}

}  // namespace internal

/// Parses an XYZ or V2000 SDF file body into a labeled point cloud. Line
/// numbers in errors are 1-based.
inline LabeledPointCloud load_structure(std::string_view text,
                                        StructureFormat format) {
  return format == StructureFormat::kXyz ? internal::load_xyz(text)
                                         : internal::load_sdf(text);
}

/// Heavy-atom coordinates derived from the graph alone: classical
/// multidimensional scaling of topological distances times `bond_length`.
/// Used when a molecule has no recorded geometry. Pairwise distances depend
/// only on the graph unless the top eigenvalues are degenerate across the
/// third and fourth position.
inline LabeledPointCloud graph_embedding_3d(const Molecule &mol,
                                            double bond_length = 1.5) {
  std::vector<int> heavy;
  for (int i = 0; i < mol.atom_count(); ++i)
    if (mol.atom(i).element != Element::kH)
      heavy.push_back(i);
  const int n = static_cast<int>(heavy.size());
  LabeledPointCloud cloud;
  if (n == 0)
    return cloud;

  // All-pairs BFS distances; separate fragments get a fixed 10-bond gap.
  const int big = 10;
  std::vector<int> index(mol.atom_count(), -1);
  for (int k = 0; k < n; ++k)
    index[heavy[k]] = k;
  Eigen::MatrixXd d2(n, n);
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(mol.atom_count(), -1), queue { heavy[s] };
    dist[heavy[s]] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (auto nb: mol.neighbors(queue[q]))
        if (dist[nb.atom] < 0) {
          dist[nb.atom] = dist[queue[q]] + 1;
          queue.push_back(nb.atom);
        }
    for (int t = 0; t < n; ++t) {
      double d = dist[heavy[t]] < 0 ? big : dist[heavy[t]];
      d *= bond_length;
      d2(s, t) = d * d;
    }
  }

  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(n, n)
                      - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
  Eigen::MatrixXd b = -0.5 * j * d2 * j;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  Eigen::MatrixXd coords = Eigen::MatrixXd::Zero(n, 3);
  for (int c = 0; c < 3 && c < n; ++c) {
    const int col = n - 1 - c;
    const double lambda = eig.eigenvalues()(col);
    if (lambda <= 0)
      continue;
    Eigen::VectorXd v = eig.eigenvectors().col(col);
    // Fix the sign so the output does not depend on the solver's choice.
    int pivot = 0;
    for (int k = 1; k < n; ++k)
      if (std::abs(v(k)) > std::abs(v(pivot)) + 1e-12)
        pivot = k;
    if (v(pivot) < 0)
      v = -v;
    coords.col(c) = v * std::sqrt(lambda);
  }
  for (int k = 0; k < n; ++k)
    cloud.points.push_back({ coords(k, 0), coords(k, 1), coords(k, 2),
                             mol.atom(heavy[k]).element });
  return cloud;
}

}  // namespace gnc
