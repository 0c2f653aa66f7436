//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnc/core/error.hpp"
#include "gnc/molgraph/element.hpp"

namespace gnc {

enum class BondOrder: std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

struct Atom {
  Element element = Element::kC;
  int charge = 0;
  bool aromatic = false;
  // Attached hydrogens not represented as graph vertices.
  int hydrogens = 0;

  friend bool operator==(const Atom &, const Atom &) = default;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::kSingle;
  // 1..3; aromatic bonds carry their Kekule assignment here.
  int kekule_order = 1;

  int other(int atom) const noexcept { return atom == a ? b : a; }

  friend bool operator==(const Bond &, const Bond &) = default;
};

struct Neighbor {
  int atom;
  int bond;
};

/// Immutable molecular graph. Construction validates the graph invariants and
/// derives adjacency and ring membership; there are no mutators, so a
/// Molecule can be shared freely across threads.
class Molecule {
public:
  Molecule() = default;

  Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds)
      : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
    validate_and_index();
  }

  int atom_count() const noexcept { return static_cast<int>(atoms_.size()); }
  int bond_count() const noexcept { return static_cast<int>(bonds_.size()); }
  bool empty() const noexcept { return atoms_.empty(); }

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::span<const Bond> bonds() const noexcept { return bonds_; }
  const Atom &atom(int i) const { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }

  std::span<const Neighbor> neighbors(int i) const noexcept {
    return { adjacency_.data() + offsets_[i],
             adjacency_.data() + offsets_[i + 1] };
  }

  int degree(int i) const noexcept { return offsets_[i + 1] - offsets_[i]; }

  int total_degree(int i) const noexcept {
    return degree(i) + atoms_[i].hydrogens;
  }

  // Sum of Kekule bond orders to graph neighbors.
  int bond_order_sum(int i) const noexcept {
    int sum = 0;
    for (auto nb: neighbors(i))
      sum += bonds_[nb.bond].kekule_order;
    return sum;
  }

  int find_bond(int a, int b) const noexcept {
    for (auto nb: neighbors(a))
      if (nb.atom == b)
        return nb.bond;
    return -1;
  }

  bool atom_in_ring(int i) const noexcept { return atom_ring_[i] != 0; }
  bool bond_in_ring(int b) const noexcept { return bond_ring_[b] != 0; }

  int heavy_atom_count() const noexcept {
    return static_cast<int>(std::count_if(
        atoms_.begin(), atoms_.end(),
        [](const Atom &a) { return a.element != Element::kH; }));
  }

  int hydrogen_count() const noexcept {
    int n = 0;
    for (const auto &a: atoms_)
      n += a.hydrogens + (a.element == Element::kH ? 1 : 0);
    return n;
  }

  int count_element(Element e) const noexcept {
    return static_cast<int>(
        std::count_if(atoms_.begin(), atoms_.end(),
                      [e](const Atom &a) { return a.element == e; }));
  }

  // Number of independent cycles (edges - vertices + components).
  int cycle_rank() const noexcept {
    return bond_count() - atom_count() + component_count_;
  }

  int component_count() const noexcept { return component_count_; }

  // Connected-component id per atom, ids ordered by lowest member index.
  std::span<const int> components() const noexcept { return component_; }

private:
  void validate_and_index() {
    const int n = atom_count();
    for (const auto &a: atoms_) {
      if (a.hydrogens < 0)
        throw Error(ErrorCode::kValenceViolation, "negative hydrogen count");
      if (a.aromatic && !can_be_aromatic(a.element))
        throw Error(ErrorCode::kValenceViolation,
                    std::string(symbol(a.element)) + " cannot be aromatic");
    }

    std::vector<int> deg(n, 0);
    for (const auto &b: bonds_) {
      if (b.a < 0 || b.b < 0 || b.a >= n || b.b >= n)
        throw Error(ErrorCode::kSyntax, "bond endpoint out of range");
      if (b.a == b.b)
        throw Error(ErrorCode::kSyntax, "self bond");
      if (b.order == BondOrder::kAromatic
          && (!atoms_[b.a].aromatic || !atoms_[b.b].aromatic))
        throw Error(ErrorCode::kSyntax,
                    "aromatic bond between non-aromatic atoms");
      if (b.kekule_order < 1 || b.kekule_order > 3)
        throw Error(ErrorCode::kSyntax, "bad Kekule order");
      ++deg[b.a];
      ++deg[b.b];
    }

    offsets_.assign(n + 1, 0);
    for (int i = 0; i < n; ++i)
      offsets_[i + 1] = offsets_[i] + deg[i];
    adjacency_.resize(offsets_[n]);
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (int bi = 0; bi < bond_count(); ++bi) {
      const auto &b = bonds_[bi];
      adjacency_[fill[b.a]++] = { b.b, bi };
      adjacency_[fill[b.b]++] = { b.a, bi };
    }
    for (int i = 0; i < n; ++i) {
      auto nb = std::span(adjacency_).subspan(offsets_[i], deg[i]);
      std::sort(nb.begin(), nb.end(),
                [](Neighbor x, Neighbor y) { return x.atom < y.atom; });
      for (std::size_t k = 1; k < nb.size(); ++k)
        if (nb[k].atom == nb[k - 1].atom)
          throw Error(ErrorCode::kSyntax, "duplicate bond");
    }

    for (int i = 0; i < n; ++i) {
      const auto &a = atoms_[i];
      int used = bond_order_sum(i) + a.hydrogens;
      if (used > max_valence(a.element, a.charge))
        throw Error(ErrorCode::kValenceViolation,
                    "atom " + std::to_string(i) + " ("
                        + std::string(symbol(a.element)) + ") has valence "
                        + std::to_string(used));
    }

    find_rings_and_components();
  }

  // Tarjan bridge finding: a bond is in a ring iff it is not a bridge.
  void find_rings_and_components() {
    const int n = atom_count();
    bond_ring_.assign(bond_count(), 1);
    atom_ring_.assign(n, 0);
    component_.assign(n, -1);
    component_count_ = 0;

    std::vector<int> disc(n, -1), low(n, 0);
    int timer = 0;
    struct Frame {
      int atom;
      int parent_bond;
      std::size_t next;
    };
    std::vector<Frame> stack;

    for (int root = 0; root < n; ++root) {
      if (disc[root] >= 0)
        continue;
      const int comp = component_count_++;
      stack.push_back({ root, -1, 0 });
      disc[root] = low[root] = timer++;
      component_[root] = comp;
      while (!stack.empty()) {
        auto &f = stack.back();
        auto nbs = neighbors(f.atom);
        if (f.next < nbs.size()) {
          auto nb = nbs[f.next++];
          if (nb.bond == f.parent_bond)
            continue;
          if (disc[nb.atom] < 0) {
            disc[nb.atom] = low[nb.atom] = timer++;
            component_[nb.atom] = comp;
            stack.push_back({ nb.atom, nb.bond, 0 });
          } else {
            low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
          }
        } else {
          Frame done = f;
          stack.pop_back();
          if (!stack.empty()) {
            int parent = stack.back().atom;
            low[parent] = std::min(low[parent], low[done.atom]);
            if (low[done.atom] > disc[parent])
              bond_ring_[done.parent_bond] = 0;
          }
        }
      }
    }

    for (int bi = 0; bi < bond_count(); ++bi) {
      if (bond_ring_[bi]) {
        atom_ring_[bonds_[bi].a] = 1;
        atom_ring_[bonds_[bi].b] = 1;
      }
    }
  }

  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> offsets_ { 0 };
  std::vector<Neighbor> adjacency_;
  std::vector<std::uint8_t> atom_ring_;
  std::vector<std::uint8_t> bond_ring_;
  std::vector<int> component_;
  int component_count_ = 0;
};

}  // namespace gnc
