//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string_view>
#include <vector>

#include "gnc/molgraph/canon.hpp"
#include "gnc/molgraph/molecule.hpp"
#include "gnc/molgraph/rings.hpp"

namespace gnc {

/// Weights of the synthetic-accessibility surrogate. The score is
///   1 + size + fusion + spiro + macrocycle + stereo + rare + rings
/// clamped to [1, 10]. Any change to a weight must bump `version`.
struct SasWeights {
  std::string_view version = "sas-surrogate/v1";
  double per_heavy_atom = 0.035;
  double per_fusion_atom = 0.25;   // ring atom with >= 3 ring bonds
  double per_spiro_atom = 0.5;     // ring atom with 4 ring bonds
  double macrocycle = 1.0;         // any smallest ring larger than 8
  double stereo_log_scale = 1.0;   // times log10(stereocenters + 1)
  double per_rare_feature = 0.2;
  double per_ring = 0.1;
};

inline constexpr SasWeights kDefaultSasWeights {};

struct SasBreakdown {
  double score = 1.0;
  int heavy_atoms = 0;
  int fusion_atoms = 0;
  int spiro_atoms = 0;
  bool macrocycle = false;
  int stereocenters = 0;
  int rare_features = 0;
  int rings = 0;
};

namespace internal {

// sp3 carbon or nitrogen-free center with four pairwise-distinct substituent
// classes (hydrogen counts as a class).
inline int count_stereocenters(const Molecule &mol) {
  auto cls = symmetry_classes(mol);
  int count = 0;
  for (int i = 0; i < mol.atom_count(); ++i) {
    const auto &a = mol.atom(i);
    if (a.element != Element::kC || a.aromatic || mol.total_degree(i) != 4
        || a.hydrogens > 1 || mol.bond_order_sum(i) != mol.degree(i))
      continue;
    std::set<int> distinct;
    for (auto nb: mol.neighbors(i))
      distinct.insert(cls[nb.atom]);
    if (static_cast<int>(distinct.size()) == mol.degree(i))
      ++count;
  }
  return count;
}

// Features uncommon in purchasable building blocks: charged atoms,
// heteroatom-heteroatom bonds, triple bonds, and hypervalent P/S.
inline int count_rare_features(const Molecule &mol) {
  int count = 0;
  for (int i = 0; i < mol.atom_count(); ++i) {
    const auto &a = mol.atom(i);
    if (a.charge != 0)
      ++count;
    if ((a.element == Element::kS || a.element == Element::kP)
        && mol.bond_order_sum(i) + a.hydrogens > 3)
      ++count;
  }
  for (const auto &b: mol.bonds()) {
    auto ea = mol.atom(b.a).element;
    auto eb = mol.atom(b.b).element;
    const bool hetero_a = ea != Element::kC && ea != Element::kH;
    const bool hetero_b = eb != Element::kC && eb != Element::kH;
    if (hetero_a && hetero_b && !is_halogen(ea) && !is_halogen(eb)
        && b.order != BondOrder::kAromatic)
      ++count;
    if (b.order == BondOrder::kTriple)
      ++count;
  }
  return count;
}

}  // namespace internal

inline SasBreakdown sas_breakdown(const Molecule &mol,
                                  const SasWeights &w = kDefaultSasWeights) {
  SasBreakdown out;
  out.heavy_atoms = mol.heavy_atom_count();
  out.rings = std::max(0, mol.cycle_rank());
  for (int i = 0; i < mol.atom_count(); ++i) {
    int ring_bonds = 0;
    for (auto nb: mol.neighbors(i))
      if (mol.bond_in_ring(nb.bond))
        ++ring_bonds;
    if (ring_bonds >= 3)
      ++out.fusion_atoms;
    if (ring_bonds == 4)
      ++out.spiro_atoms;
  }
  auto ring_size = smallest_ring_size_per_atom(mol);
  out.macrocycle = std::any_of(ring_size.begin(), ring_size.end(),
                               [](int s) { return s > 8; });
  out.stereocenters = internal::count_stereocenters(mol);
  out.rare_features = internal::count_rare_features(mol);

  double raw = 1.0 + w.per_heavy_atom * out.heavy_atoms
               + w.per_fusion_atom * out.fusion_atoms
               + w.per_spiro_atom * out.spiro_atoms
               + (out.macrocycle ? w.macrocycle : 0.0)
               + w.stereo_log_scale * std::log10(out.stereocenters + 1.0)
               + w.per_rare_feature * out.rare_features
               + w.per_ring * out.rings;
  out.score = std::clamp(raw, 1.0, 10.0);
  return out;
}

inline double sas_estimate(const Molecule &mol) {
  return sas_breakdown(mol).score;
}

}  // namespace gnc
