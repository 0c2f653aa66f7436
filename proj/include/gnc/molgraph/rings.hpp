//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <queue>
#include <set>
#include <vector>

#include "gnc/molgraph/molecule.hpp"

namespace gnc {

/// Atom cycle, in traversal order.
using Ring = std::vector<int>;

/// Shortest cycle through ring bond `bond`, or empty if the bond is acyclic.
inline Ring smallest_ring_through(const Molecule &mol, int bond) {
  if (!mol.bond_in_ring(bond))
    return {};
  const auto &b = mol.bond(bond);
  std::vector<int> prev(mol.atom_count(), -2);
  std::queue<int> q;
  prev[b.a] = -1;
  q.push(b.a);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    if (u == b.b)
      break;
    for (auto nb: mol.neighbors(u)) {
      if (nb.bond == bond || prev[nb.atom] != -2)
        continue;
      prev[nb.atom] = u;
      q.push(nb.atom);
    }
  }
  Ring ring;
  for (int v = b.b; v != -1; v = prev[v])
    ring.push_back(v);
  return ring;
}

/// The distinct smallest rings through each ring bond. Sorted by size, then
/// by sorted atom set, so the result does not depend on bond order beyond
/// ties between equal-size alternatives.
inline std::vector<Ring> smallest_rings(const Molecule &mol) {
  std::set<std::vector<int>> seen;
  std::vector<Ring> rings;
  for (int bi = 0; bi < mol.bond_count(); ++bi) {
    Ring r = smallest_ring_through(mol, bi);
    if (r.empty())
      continue;
    std::vector<int> key(r);
    std::sort(key.begin(), key.end());
    if (seen.insert(key).second)
      rings.push_back(std::move(r));
  }
  std::sort(rings.begin(), rings.end(), [](const Ring &x, const Ring &y) {
    if (x.size() != y.size())
      return x.size() < y.size();
    std::vector<int> kx(x), ky(y);
    std::sort(kx.begin(), kx.end());
    std::sort(ky.begin(), ky.end());
    return kx < ky;
  });
  return rings;
}

/// Size of the smallest ring containing each atom, 0 for acyclic atoms.
inline std::vector<int> smallest_ring_size_per_atom(const Molecule &mol) {
  std::vector<int> size(mol.atom_count(), 0);
  for (int bi = 0; bi < mol.bond_count(); ++bi) {
    Ring r = smallest_ring_through(mol, bi);
    for (int a: r)
      if (size[a] == 0 || static_cast<int>(r.size()) < size[a])
        size[a] = static_cast<int>(r.size());
  }
  return size;
}

}  // namespace gnc
