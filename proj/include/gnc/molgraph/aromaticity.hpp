//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include "gnc/molgraph/molecule.hpp"
#include "gnc/molgraph/rings.hpp"

namespace gnc {

namespace internal {

// Pi electrons an atom donates to a ring, or -1 if it cannot take part.
inline int ring_pi_electrons(const Molecule &mol, int atom,
                             const std::vector<char> &in_ring) {
  const auto &a = mol.atom(atom);
  if (!can_be_aromatic(a.element))
    return -1;
  bool endo_double = false;
  bool exo_double = false;
  for (auto nb: mol.neighbors(atom)) {
    const auto &b = mol.bond(nb.bond);
    if (b.kekule_order == 3)
      return -1;
    if (b.kekule_order == 2) {
      if (mol.bond_in_ring(nb.bond) && in_ring[nb.atom])
        endo_double = true;
      else
        exo_double = true;
    }
  }
  if (endo_double)
    return 1;
  if (exo_double) {
    // Ring carbonyl-like carbons contribute an empty p orbital.
    return a.element == Element::kC ? 0 : -1;
  }
  const int connections = mol.total_degree(atom);
  switch (a.element) {
  case Element::kC:
    if (a.charge == -1 && connections == 3)
      return 2;
    if (a.charge == 1 && connections == 3)
      return 0;
    return -1;
  case Element::kN:
  case Element::kP:
    return (a.charge == 0 && connections == 3) ? 2 : -1;
  case Element::kO:
  case Element::kS:
    return (a.charge == 0 && connections == 2) ? 2 : -1;
  case Element::kB:
    return connections == 3 ? 0 : -1;
  default:
    return -1;
  }
}

}  // namespace internal

/// Marks rings written in Kekule form as aromatic when every ring atom is
/// conjugated and the ring holds 4n+2 pi electrons. Existing aromatic flags
/// are kept. Fused systems are handled ring by ring over the smallest rings.
inline Molecule perceive_aromaticity(const Molecule &mol) {
  auto rings = smallest_rings(mol);
  if (rings.empty())
    return mol;

  std::vector<char> aromatic_atom(mol.atom_count(), 0);
  std::vector<char> aromatic_bond(mol.bond_count(), 0);
  for (int i = 0; i < mol.atom_count(); ++i)
    aromatic_atom[i] = mol.atom(i).aromatic;
  for (int bi = 0; bi < mol.bond_count(); ++bi)
    aromatic_bond[bi] = mol.bond(bi).order == BondOrder::kAromatic;

  std::vector<char> in_ring(mol.atom_count(), 0);
  for (int i = 0; i < mol.atom_count(); ++i)
    in_ring[i] = mol.atom_in_ring(i);

  bool changed = false;
  for (const auto &ring: rings) {
    if (ring.size() < 5 || ring.size() > 7)
      continue;
    bool all_aromatic = true;
    int electrons = 0;
    bool ok = true;
    for (int atom: ring) {
      all_aromatic = all_aromatic && aromatic_atom[atom];
      int e = internal::ring_pi_electrons(mol, atom, in_ring);
      if (e < 0) {
        ok = false;
        break;
      }
      electrons += e;
    }
    if (all_aromatic || !ok || electrons % 4 != 2)
      continue;
    for (std::size_t k = 0; k < ring.size(); ++k) {
      int u = ring[k];
      int v = ring[(k + 1) % ring.size()];
      aromatic_atom[u] = 1;
      aromatic_bond[mol.find_bond(u, v)] = 1;
    }
    changed = true;
  }
  if (!changed)
    return mol;

  std::vector<Atom> atoms(mol.atoms().begin(), mol.atoms().end());
  std::vector<Bond> bonds(mol.bonds().begin(), mol.bonds().end());
  for (int i = 0; i < mol.atom_count(); ++i)
    atoms[i].aromatic = aromatic_atom[i];
  for (int bi = 0; bi < mol.bond_count(); ++bi)
    if (aromatic_bond[bi])
      bonds[bi].order = BondOrder::kAromatic;
  return Molecule(std::move(atoms), std::move(bonds));
}

}  // namespace gnc
