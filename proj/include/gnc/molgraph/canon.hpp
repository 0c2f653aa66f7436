//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gnc/molgraph/element.hpp"
#include "gnc/molgraph/molecule.hpp"

namespace gnc {

namespace internal {

inline int bond_code(const Bond &b) noexcept {
  return static_cast<int>(b.order);
}

// One round-robin of neighborhood refinement until the partition is stable.
// Class ids are "number of atoms with a strictly smaller key", so refinement
// never reorders existing classes, it only splits them.
inline void refine_classes(const Molecule &mol, std::vector<int> &cls) {
  const int n = mol.atom_count();
  std::vector<int> order(n);
  using Key = std::pair<int, std::vector<std::pair<int, int>>>;
  std::vector<Key> keys(n);

  int distinct = static_cast<int>(
      std::set<int>(cls.begin(), cls.end()).size());
  for (;;) {
    for (int i = 0; i < n; ++i) {
      keys[i].first = cls[i];
      auto &nb = keys[i].second;
      nb.clear();
      for (auto x: mol.neighbors(i))
        nb.emplace_back(cls[x.atom], bond_code(mol.bond(x.bond)));
      std::sort(nb.begin(), nb.end());
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return keys[a] < keys[b]; });
    std::vector<int> next(n);
    int count = 0;
    for (int k = 0; k < n; ++k) {
      if (k == 0 || keys[order[k]] != keys[order[k - 1]]) {
        ++count;
        next[order[k]] = k;
      } else {
        next[order[k]] = next[order[k - 1]];
      }
    }
    cls.swap(next);
    if (count == distinct)
      break;
    distinct = count;
  }
}

inline std::vector<int> initial_classes(const Molecule &mol) {
  const int n = mol.atom_count();
  using Inv = std::tuple<int, int, int, int, int, int>;
  std::vector<Inv> inv(n);
  for (int i = 0; i < n; ++i) {
    const auto &a = mol.atom(i);
    inv[i] = { atomic_number(a.element), mol.degree(i), a.hydrogens,
               a.charge, a.aromatic ? 1 : 0, mol.atom_in_ring(i) ? 1 : 0 };
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return inv[a] < inv[b]; });
  std::vector<int> cls(n);
  for (int k = 0; k < n; ++k)
    cls[order[k]] = (k > 0 && inv[order[k]] == inv[order[k - 1]])
                        ? cls[order[k - 1]]
                        : k;
  return cls;
}

}  // namespace internal

/// Per-atom symmetry class labels from iterative neighborhood refinement.
/// Labels are dense (0..k-1) and ordered by invariant, so they are
/// comparable across isomorphic inputs. Atoms sharing a label are
/// refinement-equivalent; true automorphism orbits may be split further
/// only in pathological (regular) graphs where refinement is too coarse.
inline std::vector<int> symmetry_classes(const Molecule &mol) {
  auto cls = internal::initial_classes(mol);
  internal::refine_classes(mol, cls);
  std::vector<int> ids(cls);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  for (auto &c: cls)
    c = static_cast<int>(std::lower_bound(ids.begin(), ids.end(), c)
                         - ids.begin());
  return cls;
}

/// Total canonical order: refinement followed by repeated tie breaking on
/// the lowest tied class. Returns a permutation rank[atom] in [0, n).
inline std::vector<int> canonical_ranks(const Molecule &mol) {
  const int n = mol.atom_count();
  auto cls = internal::initial_classes(mol);
  internal::refine_classes(mol, cls);
  for (;;) {
    std::vector<int> size(n, 0);
    for (int c: cls)
      ++size[c];
    int tied = -1;
    for (int c = 0; c < n; ++c) {
      if (size[c] > 1) {
        tied = c;
        break;
      }
    }
    if (tied < 0)
      break;
    bool first = true;
    for (int i = 0; i < n; ++i) {
      if (cls[i] != tied)
        continue;
      if (first) {
        first = false;
      } else {
        cls[i] = tied + 1;
      }
    }
    internal::refine_classes(mol, cls);
  }
  return cls;
}

namespace internal {

// True when the parser would reproduce this atom from its bare symbol.
inline bool writes_unbracketed(const Molecule &mol, int i) {
  const auto &a = mol.atom(i);
  if (a.charge != 0 || a.element == Element::kH)
    return false;

  int kekule_sum = 0;
  int aromatic_sum = 0;
  bool exo_double = false;
  bool has_pi = false;
  for (auto nb: mol.neighbors(i)) {
    const auto &b = mol.bond(nb.bond);
    kekule_sum += b.kekule_order;
    if (b.order == BondOrder::kAromatic) {
      aromatic_sum += 1;
      if (b.kekule_order == 2)
        has_pi = true;
    } else {
      aromatic_sum += b.kekule_order;
      if (b.kekule_order >= 2)
        exo_double = true;
    }
  }

  auto allowed = allowed_valences(a.element, 0);
  auto implied_h = [&](int used) {
    auto it = std::find_if(allowed.begin(), allowed.end(),
                           [&](int v) { return v >= used; });
    return it == allowed.end() ? -1 : *it - used;
  };

  if (a.aromatic && !exo_double) {
    int free = implied_h(aromatic_sum);
    bool parser_wants_pi = free >= 1;
    if (parser_wants_pi != has_pi)
      return false;
  }
  return implied_h(kekule_sum) == a.hydrogens;
}

inline std::string atom_token(const Molecule &mol, int i) {
  const auto &a = mol.atom(i);
  std::string sym(symbol(a.element));
  if (a.aromatic)
    sym[0] = static_cast<char>(sym[0] - 'A' + 'a');
  if (writes_unbracketed(mol, i))
    return sym;
  std::string out = "[" + sym;
  if (a.hydrogens > 0) {
    out += 'H';
    if (a.hydrogens > 1)
      out += std::to_string(a.hydrogens);
  }
  if (a.charge != 0) {
    out += a.charge > 0 ? '+' : '-';
    int mag = a.charge > 0 ? a.charge : -a.charge;
    if (mag > 1)
      out += std::to_string(mag);
  }
  out += ']';
  return out;
}

inline std::string bond_token(const Molecule &mol, const Bond &b) {
  switch (b.order) {
  case BondOrder::kAromatic: return "";
  case BondOrder::kDouble: return "=";
  case BondOrder::kTriple: return "#";
  case BondOrder::kSingle:
    return (mol.atom(b.a).aromatic && mol.atom(b.b).aromatic) ? "-" : "";
  }
  return "";
}

class SmilesWriter {
public:
  SmilesWriter(const Molecule &mol, const std::vector<int> &rank)
      : mol_(mol), rank_(rank) { }

  std::string write_component(int start) {
    const int n = mol_.atom_count();
    visited_.assign(n, 0);
    parent_bond_.assign(n, -1);
    openings_.assign(n, {});
    closings_.assign(n, {});
    bond_done_.assign(mol_.bond_count(), 0);
    children_.assign(n, {});
    discover(start);

    visited_.assign(n, 0);
    digit_of_bond_.clear();
    in_use_.assign(100, 0);
    std::string out;
    emit(start, out);
    return out;
  }

private:
  std::vector<Neighbor> ranked_neighbors(int u) const {
    auto nbs = mol_.neighbors(u);
    std::vector<Neighbor> out(nbs.begin(), nbs.end());
    std::sort(out.begin(), out.end(), [&](Neighbor x, Neighbor y) {
      return rank_[x.atom] < rank_[y.atom];
    });
    return out;
  }

  void discover(int root) {
    struct Frame {
      int atom;
      std::vector<Neighbor> nbs;
      std::size_t next;
    };
    std::vector<Frame> stack;
    visited_[root] = 1;
    stack.push_back({ root, ranked_neighbors(root), 0 });
    while (!stack.empty()) {
      auto &f = stack.back();
      if (f.next == f.nbs.size()) {
        stack.pop_back();
        continue;
      }
      Neighbor nb = f.nbs[f.next++];
      const int u = f.atom;
      if (nb.bond == parent_bond_[u] || bond_done_[nb.bond])
        continue;
      if (visited_[nb.atom]) {
        // Back edge to an ancestor: open at the ancestor, close here.
        bond_done_[nb.bond] = 1;
        openings_[nb.atom].push_back(nb.bond);
        closings_[u].push_back(nb.bond);
        continue;
      }
      bond_done_[nb.bond] = 1;
      visited_[nb.atom] = 1;
      parent_bond_[nb.atom] = nb.bond;
      children_[u].push_back(nb);
      stack.push_back({ nb.atom, ranked_neighbors(nb.atom), 0 });
    }
  }

  int take_digit() {
    for (int d = 1; d < 100; ++d) {
      if (!in_use_[d]) {
        in_use_[d] = 1;
        return d;
      }
    }
    return 99;
  }

  static std::string digit_token(int d) {
    return d < 10 ? std::to_string(d) : "%" + std::to_string(d);
  }

  void emit(int u, std::string &out) {
    out += atom_token(mol_, u);

    // Rings closing here, in the order their digits were opened.
    std::vector<std::pair<int, int>> closes;
    for (int bi: closings_[u])
      closes.emplace_back(digit_of_bond_.at(bi), bi);
    std::sort(closes.begin(), closes.end());
    for (auto [d, bi]: closes) {
      out += digit_token(d);
      in_use_[d] = 0;
    }

    // Rings opening here, ordered by the rank of the partner atom.
    auto opens = openings_[u];
    std::sort(opens.begin(), opens.end(), [&](int x, int y) {
      return rank_[mol_.bond(x).other(u)] < rank_[mol_.bond(y).other(u)];
    });
    for (int bi: opens) {
      int d = take_digit();
      digit_of_bond_[bi] = d;
      out += bond_token(mol_, mol_.bond(bi));
      out += digit_token(d);
    }

    const auto &kids = children_[u];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      const bool branch = k + 1 < kids.size();
      if (branch)
        out += '(';
      out += bond_token(mol_, mol_.bond(kids[k].bond));
      emit(kids[k].atom, out);
      if (branch)
        out += ')';
    }
  }

  const Molecule &mol_;
  const std::vector<int> &rank_;
  std::vector<char> visited_;
  std::vector<int> parent_bond_;
  std::vector<std::vector<int>> openings_;
  std::vector<std::vector<int>> closings_;
  std::vector<char> bond_done_;
  std::vector<std::vector<Neighbor>> children_;
  std::map<int, int> digit_of_bond_;
  std::vector<char> in_use_;
};

}  // namespace internal

/// Writes SMILES with atoms visited in the given rank order. Each component
/// starts at its lowest-ranked atom; components are joined in lexicographic
/// order of their strings.
inline std::string write_smiles(const Molecule &mol,
                                const std::vector<int> &rank) {
  if (mol.empty())
    return "";
  std::vector<int> start(mol.component_count(), -1);
  auto comp = mol.components();
  for (int i = 0; i < mol.atom_count(); ++i) {
    int c = comp[i];
    if (start[c] < 0 || rank[i] < rank[start[c]])
      start[c] = i;
  }
  internal::SmilesWriter writer(mol, rank);
  std::vector<std::string> parts;
  parts.reserve(start.size());
  for (int s: start)
    parts.push_back(writer.write_component(s));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k)
      out += '.';
    out += parts[k];
  }
  return out;
}

inline std::string write_canonical_smiles(const Molecule &mol) {
  return write_smiles(mol, canonical_ranks(mol));
}

}  // namespace gnc
