//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <set>
#include <string>
#include <vector>

#include "gnc/core/error.hpp"
#include "gnc/molgraph/canon.hpp"
#include "gnc/molgraph/molecule.hpp"

namespace gnc {

/// `mol` with one hydrogen on `atom` replaced by an -OH group. The new
/// oxygen is appended as the last atom.
inline Molecule attach_hydroxyl(const Molecule &mol, int atom) {
  if (atom < 0 || atom >= mol.atom_count() || mol.atom(atom).hydrogens < 1)
    throw Error(ErrorCode::kNoSubstitutablePosition,
                "atom " + std::to_string(atom) + " carries no hydrogen");
  std::vector<Atom> atoms(mol.atoms().begin(), mol.atoms().end());
  std::vector<Bond> bonds(mol.bonds().begin(), mol.bonds().end());
  atoms[atom].hydrogens -= 1;
  Atom oxygen;
  oxygen.element = Element::kO;
  oxygen.hydrogens = 1;
  atoms.push_back(oxygen);
  Bond b;
  b.a = atom;
  b.b = static_cast<int>(atoms.size()) - 1;
  b.order = BondOrder::kSingle;
  b.kekule_order = 1;
  bonds.push_back(b);
  return Molecule(std::move(atoms), std::move(bonds));
}

struct HydroxylVariant {
  Molecule molecule;
  std::string smiles;  // canonical
  int position;        // substituted atom in the parent
};

/// One variant per symmetry class of hydrogen-bearing atoms, deduplicated by
/// canonical SMILES. Positions are visited in ascending class order, so the
/// output order is canonical too.
inline std::vector<HydroxylVariant> hydroxyl_variants(const Molecule &mol) {
  auto classes = symmetry_classes(mol);
  std::vector<int> representative;
  std::set<int> seen_class;
  std::vector<std::pair<int, int>> by_class;
  for (int i = 0; i < mol.atom_count(); ++i)
    if (mol.atom(i).hydrogens > 0)
      by_class.emplace_back(classes[i], i);
  std::sort(by_class.begin(), by_class.end());
  for (auto [cls, atom]: by_class)
    if (seen_class.insert(cls).second)
      representative.push_back(atom);

  if (representative.empty())
    throw Error(ErrorCode::kNoSubstitutablePosition,
                "molecule has no hydrogen-bearing atom");

  std::vector<HydroxylVariant> out;
  std::set<std::string> seen;
  for (int atom: representative) {
    Molecule v = attach_hydroxyl(mol, atom);
    std::string smi = write_canonical_smiles(v);
    if (seen.insert(smi).second)
      out.push_back({ std::move(v), std::move(smi), atom });
  }
  return out;
}

}  // namespace gnc
