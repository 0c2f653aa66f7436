//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gnc/core/error.hpp"
#include "gnc/molgraph/element.hpp"
#include "gnc/molgraph/molecule.hpp"

namespace gnc {

/// Molecule with every hydrogen promoted to a vertex, which is what
/// atom-typing patterns such as [#1]O[CX4,c] are written against.
class HydrogenExpandedGraph {
public:
  struct Node {
    Element element;
    int charge;
    bool aromatic;
    int hydrogens;  // number of hydrogen neighbors
    int degree;     // total connections including hydrogens
    int source;     // heavy-atom index in the source molecule, or owner for H
  };

  struct Edge {
    int to;
    BondOrder order;
  };

  explicit HydrogenExpandedGraph(const Molecule &mol) {
    const int n = mol.atom_count();
    nodes_.reserve(n + mol.hydrogen_count());
    for (int i = 0; i < n; ++i) {
      const auto &a = mol.atom(i);
      nodes_.push_back({ a.element, a.charge, a.aromatic, 0, 0, i });
    }
    adj_.resize(n);
    for (const auto &b: mol.bonds())
      connect(b.a, b.b, b.order);
    for (int i = 0; i < n; ++i) {
      for (int h = 0; h < mol.atom(i).hydrogens; ++h) {
        int id = static_cast<int>(nodes_.size());
        nodes_.push_back({ Element::kH, 0, false, 0, 0, i });
        adj_.emplace_back();
        connect(i, id, BondOrder::kSingle);
      }
    }
    for (auto &node: nodes_) {
      node.degree = 0;
      node.hydrogens = 0;
    }
    for (int i = 0; i < size(); ++i) {
      nodes_[i].degree = static_cast<int>(adj_[i].size());
      for (auto e: adj_[i])
        if (nodes_[e.to].element == Element::kH)
          ++nodes_[i].hydrogens;
    }
  }

  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  const Node &node(int i) const { return nodes_[i]; }
  const std::vector<Edge> &edges(int i) const { return adj_[i]; }

private:
  void connect(int a, int b, BondOrder order) {
    adj_[a].push_back({ b, order });
    adj_[b].push_back({ a, order });
  }

  std::vector<Node> nodes_;
  std::vector<std::vector<Edge>> adj_;
};

/// A tree-shaped substructure pattern in a SMARTS subset: bracket atoms with
/// element (#n, symbol, aromatic symbol), a/A, Hn, Xn and charge primitives
/// combined with ! & , ; operators, the organic shorthand atoms, bonds
/// - = # : ~ (default single-or-aromatic), and branches. Ring closures are not
/// supported; none of the atom-typing tables need them.
class AtomPattern {
public:
  explicit AtomPattern(std::string_view smarts): text_(smarts) {
    std::size_t pos = 0;
    parse_chain(pos, -1, BondKind::kDefault);
    if (pos != text_.size() || nodes_.empty())
      fail(pos, "trailing characters");
  }

  /// True if the pattern matches with its first atom mapped to `root`.
  bool matches_at(const HydrogenExpandedGraph &g, int root) const {
    std::vector<int> map(nodes_.size(), -1);
    std::vector<char> used(g.size(), 0);
    if (!atom_ok(*nodes_[0].expr, g.node(root)))
      return false;
    map[0] = root;
    used[root] = 1;
    return extend(g, 1, map, used);
  }

  std::string_view text() const noexcept { return text_; }

private:
  enum class BondKind { kDefault, kSingle, kDouble, kTriple, kAromatic, kAny };

  struct Expr {
    enum class Op { kTrue, kNot, kAnd, kOr, kElement, kSymbol, kAromatic,
                    kAliphatic, kHCount, kDegree, kCharge };
    Op op = Op::kTrue;
    int value = 0;
    bool aromatic = false;
    std::unique_ptr<Expr> lhs, rhs;
  };

  struct PatternNode {
    int parent;
    BondKind bond;
    std::unique_ptr<Expr> expr;
  };

  [[noreturn]] void fail(std::size_t pos, const std::string &msg) const {
    throw Error(ErrorCode::kSyntax,
                "pattern '" + std::string(text_) + "': " + msg, pos);
  }

  char at(std::size_t pos) const {
    return pos < text_.size() ? text_[pos] : '\0';
  }

  void parse_chain(std::size_t &pos, int parent, BondKind first_bond) {
    int prev = parent;
    BondKind bond = first_bond;
    bool first = true;
    while (pos < text_.size()) {
      char c = at(pos);
      if (c == ')')
        return;
      if (c == '(') {
        if (prev < 0)
          fail(pos, "branch without atom");
        ++pos;
        BondKind b = parse_bond(pos);
        parse_chain(pos, prev, b);
        if (at(pos) != ')')
          fail(pos, "unclosed branch");
        ++pos;
        continue;
      }
      if (!first)
        bond = parse_bond(pos);
      first = false;
      int id = static_cast<int>(nodes_.size());
      nodes_.push_back({ prev, bond, parse_atom(pos) });
      prev = id;
      bond = BondKind::kDefault;
    }
  }

  BondKind parse_bond(std::size_t &pos) {
    switch (at(pos)) {
    case '-': ++pos; return BondKind::kSingle;
    case '=': ++pos; return BondKind::kDouble;
    case '#': ++pos; return BondKind::kTriple;
    case ':': ++pos; return BondKind::kAromatic;
    case '~': ++pos; return BondKind::kAny;
    default: return BondKind::kDefault;
    }
  }

  static std::unique_ptr<Expr> leaf(Expr::Op op, int value = 0,
                                    bool aromatic = false) {
    auto e = std::make_unique<Expr>();
    e->op = op;
    e->value = value;
    e->aromatic = aromatic;
    return e;
  }

  static std::unique_ptr<Expr> binary(Expr::Op op, std::unique_ptr<Expr> l,
                                      std::unique_ptr<Expr> r) {
    auto e = std::make_unique<Expr>();
    e->op = op;
    e->lhs = std::move(l);
    e->rhs = std::move(r);
    return e;
  }

  std::unique_ptr<Expr> parse_atom(std::size_t &pos) {
    if (at(pos) == '[') {
      ++pos;
      auto e = parse_low(pos);
      if (at(pos) != ']')
        fail(pos, "expected ']'");
      ++pos;
      return e;
    }
    auto e = parse_symbol(pos);
    if (!e)
      fail(pos, "expected atom");
    return e;
  }

  // Element symbols, aromatic symbols, a and A.
  std::unique_ptr<Expr> parse_symbol(std::size_t &pos) {
    char c = at(pos);
    if (c == 'a') {
      ++pos;
      return leaf(Expr::Op::kAromatic);
    }
    if (c == 'A') {
      ++pos;
      return leaf(Expr::Op::kAliphatic);
    }
    if (std::isupper(static_cast<unsigned char>(c)) && c != 'H'
        && c != 'X') {
      if (std::islower(static_cast<unsigned char>(at(pos + 1)))) {
        auto two = element_from_symbol(std::string(text_.substr(pos, 2)));
        if (two) {
          pos += 2;
          return leaf(Expr::Op::kSymbol, atomic_number(*two), false);
        }
      }
      auto one = element_from_symbol(std::string(1, c));
      if (!one)
        fail(pos, "unknown element");
      ++pos;
      return leaf(Expr::Op::kSymbol, atomic_number(*one), false);
    }
    if (c == 'c' || c == 'n' || c == 'o' || c == 's' || c == 'p'
        || c == 'b') {
      auto e = element_from_symbol(
          std::string(1, static_cast<char>(std::toupper(c))));
      ++pos;
      return leaf(Expr::Op::kSymbol, atomic_number(*e), true);
    }
    return nullptr;
  }

  std::unique_ptr<Expr> parse_low(std::size_t &pos) {
    auto e = parse_or(pos);
    while (at(pos) == ';') {
      ++pos;
      e = binary(Expr::Op::kAnd, std::move(e), parse_or(pos));
    }
    return e;
  }

  std::unique_ptr<Expr> parse_or(std::size_t &pos) {
    auto e = parse_and(pos);
    while (at(pos) == ',') {
      ++pos;
      e = binary(Expr::Op::kOr, std::move(e), parse_and(pos));
    }
    return e;
  }

  std::unique_ptr<Expr> parse_and(std::size_t &pos) {
    auto e = parse_unary(pos);
    for (;;) {
      char c = at(pos);
      if (c == '&') {
        ++pos;
        c = at(pos);
      }
      if (c == ';' || c == ',' || c == ']' || c == '\0')
        return e;
      e = binary(Expr::Op::kAnd, std::move(e), parse_unary(pos));
    }
  }

  static int parse_int(std::string_view t, std::size_t &pos, int dflt) {
    if (pos >= t.size() || !std::isdigit(static_cast<unsigned char>(t[pos])))
      return dflt;
    int v = 0;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos])))
      v = v * 10 + (t[pos++] - '0');
    return v;
  }

  std::unique_ptr<Expr> parse_unary(std::size_t &pos) {
    char c = at(pos);
    if (c == '!') {
      ++pos;
      auto e = std::make_unique<Expr>();
      e->op = Expr::Op::kNot;
      e->lhs = parse_unary(pos);
      return e;
    }
    if (c == '#') {
      ++pos;
      int z = parse_int(text_, pos, -1);
      if (z < 0)
        fail(pos, "expected atomic number");
      return leaf(Expr::Op::kElement, z);
    }
    if (c == 'H') {
      ++pos;
      return leaf(Expr::Op::kHCount, parse_int(text_, pos, 1));
    }
    if (c == 'X') {
      ++pos;
      return leaf(Expr::Op::kDegree, parse_int(text_, pos, 1));
    }
    if (c == '+' || c == '-') {
      const int sign = c == '+' ? 1 : -1;
      ++pos;
      int mag = 1;
      if (std::isdigit(static_cast<unsigned char>(at(pos)))) {
        mag = parse_int(text_, pos, 1);
      } else {
        while (at(pos) == c) {
          ++mag;
          ++pos;
        }
      }
      return leaf(Expr::Op::kCharge, sign * mag);
    }
    auto e = parse_symbol(pos);
    if (!e)
      fail(pos, "unexpected character");
    return e;
  }

  static bool atom_ok(const Expr &e, const HydrogenExpandedGraph::Node &n) {
    switch (e.op) {
    case Expr::Op::kTrue: return true;
    case Expr::Op::kNot: return !atom_ok(*e.lhs, n);
    case Expr::Op::kAnd: return atom_ok(*e.lhs, n) && atom_ok(*e.rhs, n);
    case Expr::Op::kOr: return atom_ok(*e.lhs, n) || atom_ok(*e.rhs, n);
    case Expr::Op::kElement: return atomic_number(n.element) == e.value;
    case Expr::Op::kSymbol:
      return atomic_number(n.element) == e.value && n.aromatic == e.aromatic;
    case Expr::Op::kAromatic: return n.aromatic;
    case Expr::Op::kAliphatic: return !n.aromatic;
    case Expr::Op::kHCount: return n.hydrogens == e.value;
    case Expr::Op::kDegree: return n.degree == e.value;
    case Expr::Op::kCharge: return n.charge == e.value;
    }
    return false;
  }

  static bool bond_ok(BondKind kind, BondOrder order) {
    switch (kind) {
    case BondKind::kAny: return true;
    case BondKind::kDefault:
      return order == BondOrder::kSingle || order == BondOrder::kAromatic;
    case BondKind::kSingle: return order == BondOrder::kSingle;
    case BondKind::kDouble: return order == BondOrder::kDouble;
    case BondKind::kTriple: return order == BondOrder::kTriple;
    case BondKind::kAromatic: return order == BondOrder::kAromatic;
    }
    return false;
  }

  bool extend(const HydrogenExpandedGraph &g, std::size_t k,
              std::vector<int> &map, std::vector<char> &used) const {
    if (k == nodes_.size())
      return true;
    const auto &pn = nodes_[k];
    const int anchor = map[pn.parent];
    for (auto edge: g.edges(anchor)) {
      if (used[edge.to] || !bond_ok(pn.bond, edge.order)
          || !atom_ok(*pn.expr, g.node(edge.to)))
        continue;
      map[k] = edge.to;
      used[edge.to] = 1;
      if (extend(g, k + 1, map, used))
        return true;
      used[edge.to] = 0;
      map[k] = -1;
    }
    return false;
  }

  std::string text_;
  std::vector<PatternNode> nodes_;
};

}  // namespace gnc
