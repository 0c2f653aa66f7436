//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gnc/core/error.hpp"
#include "gnc/molgraph/aromaticity.hpp"
#include "gnc/molgraph/element.hpp"
#include "gnc/molgraph/molecule.hpp"

namespace gnc {

namespace internal {

struct ParsedAtom {
  Atom atom;
  bool bracket = false;
  std::size_t offset = 0;
};

struct ParsedBond {
  int a;
  int b;
  // 0 means "unspecified" (single or aromatic by context).
  int symbol_order;
  bool explicit_aromatic;
};

class SmilesParser {
public:
  SmilesParser(std::string_view text, std::vector<std::string> *warnings)
      : text_(text), warnings_(warnings) { }

  Molecule parse() {
    if (text_.empty())
      throw Error(ErrorCode::kSyntax, "empty SMILES", 0);

    parse_all();
    if (!branches_.empty())
      throw Error(ErrorCode::kUnbalancedParenthesis, "unclosed branch",
                  branches_.back().offset);
    if (!rings_.empty())
      throw Error(ErrorCode::kUnclosedRing,
                  "ring bond " + std::to_string(rings_.begin()->first)
                      + " never closed",
                  text_.size());

    fold_explicit_hydrogens();
    return build();
  }

private:
  struct RingOpen {
    int atom;
    int symbol_order;
    bool aromatic_symbol;
    std::size_t offset;
  };

  struct BranchPoint {
    int atom;
    std::size_t offset;
  };

  void warn(std::string msg) {
    if (warnings_ != nullptr)
      warnings_->push_back(std::move(msg));
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void parse_all() {
    int prev = -1;
    int pending_order = 0;
    bool pending_aromatic = false;
    bool have_bond = false;
    std::size_t bond_offset = 0;

    auto reset_bond = [&] {
      pending_order = 0;
      pending_aromatic = false;
      have_bond = false;
    };

    while (!at_end()) {
      const char c = peek();
      const std::size_t here = pos_;

      if (c == '(') {
        if (prev < 0 || have_bond)
          throw Error(ErrorCode::kSyntax, "branch without a preceding atom",
                      here);
        branches_.push_back({ prev, here });
        ++pos_;
        if (peek() == ')')
          throw Error(ErrorCode::kSyntax, "empty branch", here);
        continue;
      }
      if (c == ')') {
        if (branches_.empty())
          throw Error(ErrorCode::kUnbalancedParenthesis, "unmatched ')'",
                      here);
        if (have_bond)
          throw Error(ErrorCode::kSyntax, "bond before ')'", bond_offset);
        prev = branches_.back().atom;
        branches_.pop_back();
        ++pos_;
        continue;
      }
      if (c == '.') {
        if (have_bond)
          throw Error(ErrorCode::kSyntax, "bond before '.'", bond_offset);
        if (!branches_.empty())
          throw Error(ErrorCode::kUnbalancedParenthesis,
                      "'.' inside an open branch", here);
        prev = -1;
        ++pos_;
        continue;
      }
      if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/'
          || c == '\\' || c == '$') {
        if (have_bond)
          throw Error(ErrorCode::kSyntax, "consecutive bond symbols", here);
        if (prev < 0)
          throw Error(ErrorCode::kSyntax, "bond without a preceding atom",
                      here);
        have_bond = true;
        bond_offset = here;
        switch (c) {
        case '-': pending_order = 1; break;
        case '=': pending_order = 2; break;
        case '#': pending_order = 3; break;
        case ':': pending_aromatic = true; break;
        case '$':
          throw Error(ErrorCode::kSyntax, "quadruple bonds are unsupported",
                      here);
        default:
          pending_order = 1;
          if (!warned_bond_stereo_) {
            warn("directional bond '" + std::string(1, c)
                 + "' ignored (stereochemistry is not modeled)");
            warned_bond_stereo_ = true;
          }
        }
        ++pos_;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (prev < 0)
          throw Error(ErrorCode::kSyntax, "ring bond without an atom", here);
        int label = parse_ring_label();
        ring_bond(prev, label, pending_order, pending_aromatic, here);
        reset_bond();
        continue;
      }

      int atom = parse_atom();
      if (prev >= 0) {
        bonds_.push_back({ prev, atom, pending_order, pending_aromatic });
      } else if (have_bond) {
        throw Error(ErrorCode::kSyntax, "bond without a preceding atom",
                    bond_offset);
      }
      reset_bond();
      prev = atom;
    }

    if (have_bond)
      throw Error(ErrorCode::kSyntax, "dangling bond at end of input",
                  bond_offset);
  }

  int parse_ring_label() {
    if (peek() == '%') {
      std::size_t start = pos_;
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw Error(ErrorCode::kSyntax, "bad %nn ring label", start);
      int v = peek() - '0';
      ++pos_;
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw Error(ErrorCode::kSyntax, "bad %nn ring label", start);
      v = v * 10 + (peek() - '0');
      ++pos_;
      return v;
    }
    int v = peek() - '0';
    ++pos_;
    return v;
  }

  void ring_bond(int atom, int label, int order, bool aromatic,
                 std::size_t offset) {
    auto it = rings_.find(label);
    if (it == rings_.end()) {
      rings_.emplace(label, RingOpen { atom, order, aromatic, offset });
      return;
    }
    RingOpen open = it->second;
    rings_.erase(it);
    if (open.atom == atom)
      throw Error(ErrorCode::kSyntax, "ring bond to itself", offset);
    if ((order != 0 && open.symbol_order != 0 && order != open.symbol_order)
        || (aromatic && open.symbol_order > 1)
        || (open.aromatic_symbol && order > 1))
      throw Error(ErrorCode::kSyntax, "conflicting ring bond orders", offset);
    int final_order = order != 0 ? order : open.symbol_order;
    bool final_aromatic = aromatic || open.aromatic_symbol;
    for (const auto &b: bonds_)
      if ((b.a == open.atom && b.b == atom)
          || (b.a == atom && b.b == open.atom))
        throw Error(ErrorCode::kSyntax, "duplicate ring bond", offset);
    bonds_.push_back({ open.atom, atom, final_order, final_aromatic });
  }

  int add_atom(ParsedAtom a) {
    atoms_.push_back(a);
    return static_cast<int>(atoms_.size()) - 1;
  }

  int parse_atom() {
    const std::size_t start = pos_;
    const char c = peek();
    if (c == '[')
      return parse_bracket_atom();

    ParsedAtom pa;
    pa.offset = start;
    if (c == 'C' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') {
      pa.atom.element = Element::kCl;
      pos_ += 2;
      return add_atom(pa);
    }
    if (c == 'B' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r') {
      pa.atom.element = Element::kBr;
      pos_ += 2;
      return add_atom(pa);
    }
    switch (c) {
    case 'B': pa.atom.element = Element::kB; break;
    case 'C': pa.atom.element = Element::kC; break;
    case 'N': pa.atom.element = Element::kN; break;
    case 'O': pa.atom.element = Element::kO; break;
    case 'P': pa.atom.element = Element::kP; break;
    case 'S': pa.atom.element = Element::kS; break;
    case 'F': pa.atom.element = Element::kF; break;
    case 'I': pa.atom.element = Element::kI; break;
    case 'b':
      pa.atom.element = Element::kB;
      pa.atom.aromatic = true;
      break;
    case 'c':
      pa.atom.element = Element::kC;
      pa.atom.aromatic = true;
      break;
    case 'n':
      pa.atom.element = Element::kN;
      pa.atom.aromatic = true;
      break;
    case 'o':
      pa.atom.element = Element::kO;
      pa.atom.aromatic = true;
      break;
    case 'p':
      pa.atom.element = Element::kP;
      pa.atom.aromatic = true;
      break;
    case 's':
      pa.atom.element = Element::kS;
      pa.atom.aromatic = true;
      break;
    default:
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '*')
        throw Error(ErrorCode::kUnknownElement,
                    "'" + std::string(1, c) + "' is not in the organic subset",
                    start);
      throw Error(ErrorCode::kSyntax,
                  "unexpected character '" + std::string(1, c) + "'", start);
    }
    ++pos_;
    return add_atom(pa);
  }

  int parse_bracket_atom() {
    const std::size_t start = pos_;
    ++pos_;  // '['
    ParsedAtom pa;
    pa.offset = start;
    pa.bracket = true;

    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      while (std::isdigit(static_cast<unsigned char>(peek())))
        ++pos_;
      warn("isotope label at offset " + std::to_string(start) + " ignored");
    }

    // Element symbol: try two letters, then one.
    std::size_t sym_start = pos_;
    if (at_end())
      throw Error(ErrorCode::kSyntax, "unterminated bracket atom", start);
    char c0 = peek();
    if (c0 == '*')
      throw Error(ErrorCode::kUnknownElement, "wildcard atom", sym_start);
    if (!std::isalpha(static_cast<unsigned char>(c0)))
      throw Error(ErrorCode::kSyntax, "missing element symbol", sym_start);

    if (std::islower(static_cast<unsigned char>(c0))) {
      // Aromatic symbols; two-letter aromatics (se, as) are outside the
      // supported subset.
      if (pos_ + 1 < text_.size()
          && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))
          && (c0 == 's' || c0 == 'a')
          && (text_[pos_ + 1] == 'e' || text_[pos_ + 1] == 's'))
        throw Error(ErrorCode::kUnknownElement,
                    "aromatic '" + std::string(text_.substr(pos_, 2))
                        + "' is not supported",
                    sym_start);
      auto e = element_from_symbol(std::string(1, static_cast<char>(
                                                      std::toupper(c0))));
      if (!e || !can_be_aromatic(*e))
        throw Error(ErrorCode::kUnknownElement,
                    "unknown aromatic symbol '" + std::string(1, c0) + "'",
                    sym_start);
      pa.atom.element = *e;
      pa.atom.aromatic = true;
      ++pos_;
    } else {
      // Inside brackets an uppercase letter followed by a lowercase one is
      // always a two-letter symbol.
      std::size_t len = 1;
      if (pos_ + 1 < text_.size()
          && std::islower(static_cast<unsigned char>(text_[pos_ + 1])))
        len = 2;
      std::string sym(text_.substr(pos_, len));
      auto e = element_from_symbol(sym);
      if (!e)
        throw Error(ErrorCode::kUnknownElement,
                    "element '" + sym + "' is not supported", sym_start);
      pos_ += len;
      pa.atom.element = *e;
    }

    // Chirality.
    if (peek() == '@') {
      while (peek() == '@')
        ++pos_;
      while (std::isupper(static_cast<unsigned char>(peek()))
             && peek() != 'H')
        ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek())))
        ++pos_;
      if (!warned_chirality_) {
        warn("chirality ignored (stereochemistry is not modeled)");
        warned_chirality_ = true;
      }
    }

    if (peek() == 'H') {
      ++pos_;
      int h = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        h = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          h = h * 10 + (peek() - '0');
          ++pos_;
        }
      }
      pa.atom.hydrogens = h;
    }

    if (peek() == '+' || peek() == '-') {
      const char sign_char = peek();
      const int sign = sign_char == '+' ? 1 : -1;
      ++pos_;
      int mag = 1;
      if (std::isdigit(static_cast<unsigned char>(peek()))) {
        mag = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          mag = mag * 10 + (peek() - '0');
          ++pos_;
        }
      } else {
        while (peek() == sign_char) {
          ++mag;
          ++pos_;
        }
      }
      pa.atom.charge = sign * mag;
    }

    if (peek() == ':') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek())))
        ++pos_;
      warn("atom class at offset " + std::to_string(start) + " ignored");
    }

    if (peek() != ']')
      throw Error(ErrorCode::kSyntax, "unterminated bracket atom", start);
    ++pos_;
    return add_atom(pa);
  }

  // Neutral [H] with a single single-bonded heavy neighbor becomes an implicit
  // hydrogen of that neighbor.
  void fold_explicit_hydrogens() {
    const int n = static_cast<int>(atoms_.size());
    std::vector<int> degree(n, 0);
    for (const auto &b: bonds_) {
      ++degree[b.a];
      ++degree[b.b];
    }
    std::vector<char> drop(n, 0);
    for (const auto &b: bonds_) {
      for (auto [h, heavy]: { std::pair { b.a, b.b }, std::pair { b.b, b.a } }) {
        const auto &ph = atoms_[h];
        if (ph.atom.element != Element::kH || ph.atom.charge != 0
            || ph.atom.hydrogens != 0 || degree[h] != 1)
          continue;
        if (atoms_[heavy].atom.element == Element::kH)
          continue;
        if (b.symbol_order > 1 || b.explicit_aromatic)
          continue;
        drop[h] = 1;
      }
    }
    if (std::none_of(drop.begin(), drop.end(), [](char d) { return d; }))
      return;

    std::vector<int> remap(n, -1);
    std::vector<ParsedAtom> kept;
    for (int i = 0; i < n; ++i) {
      if (!drop[i]) {
        remap[i] = static_cast<int>(kept.size());
        kept.push_back(atoms_[i]);
      }
    }
    std::vector<ParsedBond> kept_bonds;
    for (const auto &b: bonds_) {
      if (drop[b.a]) {
        kept[remap[b.b]].atom.hydrogens += 1;
      } else if (drop[b.b]) {
        kept[remap[b.a]].atom.hydrogens += 1;
      } else {
        kept_bonds.push_back({ remap[b.a], remap[b.b], b.symbol_order,
                               b.explicit_aromatic });
      }
    }
    atoms_ = std::move(kept);
    bonds_ = std::move(kept_bonds);
  }

  Molecule build() {
    const int n = static_cast<int>(atoms_.size());

    // Bond types before ring perception: unspecified bonds between two
    // aromatic atoms are provisionally aromatic.
    std::vector<Bond> bonds;
    bonds.reserve(bonds_.size());
    for (const auto &pb: bonds_) {
      Bond b;
      b.a = pb.a;
      b.b = pb.b;
      const bool both_aromatic =
          atoms_[pb.a].atom.aromatic && atoms_[pb.b].atom.aromatic;
      if (pb.explicit_aromatic) {
        if (!both_aromatic)
          throw Error(ErrorCode::kSyntax,
                      "aromatic bond between non-aromatic atoms",
                      atoms_[pb.b].offset);
        b.order = BondOrder::kAromatic;
      } else if (pb.symbol_order == 0) {
        b.order = both_aromatic ? BondOrder::kAromatic : BondOrder::kSingle;
      } else {
        b.order = static_cast<BondOrder>(pb.symbol_order);
      }
      b.kekule_order = b.order == BondOrder::kAromatic
                           ? 1
                           : std::max(pb.symbol_order, 1);
      bonds.push_back(b);
    }

    std::vector<Atom> atoms;
    atoms.reserve(n);
    for (const auto &pa: atoms_)
      atoms.push_back(pa.atom);

    // Aromatic bonds outside rings (e.g. biaryl links written without '-')
    // are single bonds.
    {
      std::vector<Bond> provisional = bonds;
      std::vector<Atom> bare = atoms;
      for (auto &a: bare)
        a.hydrogens = 0;
      for (auto &b: provisional)
        b.kekule_order = 1;
      Molecule skeleton = make_skeleton(bare, provisional);
      for (int bi = 0; bi < static_cast<int>(bonds.size()); ++bi) {
        if (bonds[bi].order == BondOrder::kAromatic
            && !skeleton.bond_in_ring(bi) && !bonds_[bi].explicit_aromatic) {
          bonds[bi].order = BondOrder::kSingle;
          bonds[bi].kekule_order = 1;
        }
      }
    }

    for (int i = 0; i < n; ++i) {
      if (!atoms[i].aromatic)
        continue;
      bool has_aromatic_bond = false;
      for (const auto &b: bonds)
        if ((b.a == i || b.b == i) && b.order == BondOrder::kAromatic)
          has_aromatic_bond = true;
      if (!has_aromatic_bond)
        throw Error(ErrorCode::kValenceViolation,
                    "aromatic atom outside an aromatic ring", atoms_[i].offset);
    }

    kekulize(atoms, bonds);

    // Implicit hydrogens for organic-subset atoms; valence checks for all.
    std::vector<int> order_sum(n, 0);
    for (const auto &b: bonds) {
      order_sum[b.a] += b.kekule_order;
      order_sum[b.b] += b.kekule_order;
    }
    for (int i = 0; i < n; ++i) {
      auto &a = atoms[i];
      const auto &pa = atoms_[i];
      const int used = order_sum[i] + a.hydrogens;
      if (pa.bracket) {
        if (used > max_valence(a.element, a.charge))
          throw Error(ErrorCode::kValenceViolation,
                      std::string(symbol(a.element)) + " with valence "
                          + std::to_string(used),
                      pa.offset);
        continue;
      }
      auto allowed = allowed_valences(a.element, 0);
      auto it = std::find_if(allowed.begin(), allowed.end(),
                             [&](int v) { return v >= used; });
      if (it == allowed.end())
        throw Error(ErrorCode::kValenceViolation,
                    std::string(symbol(a.element)) + " with valence "
                        + std::to_string(used),
                    pa.offset);
      a.hydrogens += *it - used;
    }

    return perceive_aromaticity(Molecule(std::move(atoms), std::move(bonds)));
  }

  static Molecule make_skeleton(std::vector<Atom> atoms,
                                std::vector<Bond> bonds) {
    for (auto &b: bonds)
      if (b.order == BondOrder::kAromatic
          && (!atoms[b.a].aromatic || !atoms[b.b].aromatic))
        b.order = BondOrder::kSingle;
    return Molecule(std::move(atoms), std::move(bonds));
  }

  // Assigns alternating single/double orders to aromatic bonds so that every
  // aromatic atom that needs a pi bond gets exactly one.
  void kekulize(const std::vector<Atom> &atoms, std::vector<Bond> &bonds) {
    const int n = static_cast<int>(atoms.size());
    std::vector<int> sum(n, 0);
    std::vector<char> has_double(n, 0);
    for (const auto &b: bonds) {
      int o = b.order == BondOrder::kAromatic ? 1 : b.kekule_order;
      sum[b.a] += o;
      sum[b.b] += o;
      if (b.order != BondOrder::kAromatic && b.kekule_order >= 2) {
        has_double[b.a] = 1;
        has_double[b.b] = 1;
      }
    }

    std::vector<char> needs(n, 0);
    bool any = false;
    for (int i = 0; i < n; ++i) {
      const auto &a = atoms[i];
      if (!a.aromatic || has_double[i])
        continue;
      const int used = sum[i] + a.hydrogens;
      auto allowed = allowed_valences(a.element, a.charge);
      auto it = std::find_if(allowed.begin(), allowed.end(),
                             [&](int v) { return v >= used; });
      if (it == allowed.end())
        continue;
      if (*it - used >= 1) {
        needs[i] = 1;
        any = true;
      }
    }
    if (!any)
      return;

    // Candidate edges for the matching.
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (int bi = 0; bi < static_cast<int>(bonds.size()); ++bi) {
      const auto &b = bonds[bi];
      if (b.order == BondOrder::kAromatic && needs[b.a] && needs[b.b]) {
        adj[b.a].push_back({ b.b, bi });
        adj[b.b].push_back({ b.a, bi });
      }
    }

    std::vector<int> mate_bond(n, -1);
    auto unmatched_count = [&] {
      int c = 0;
      for (int i = 0; i < n; ++i)
        if (needs[i] && mate_bond[i] < 0)
          ++c;
      return c;
    };
    if (unmatched_count() % 2 != 0)
      fail_kekule(atoms, needs);

    std::size_t budget = 2'000'000;
    if (!match(adj, needs, mate_bond, bonds, budget))
      fail_kekule(atoms, needs);

    for (int i = 0; i < n; ++i) {
      if (mate_bond[i] >= 0)
        bonds[mate_bond[i]].kekule_order = 2;
    }
  }

  [[noreturn]] void fail_kekule(const std::vector<Atom> &atoms,
                                const std::vector<char> &needs) {
    for (int i = 0; i < static_cast<int>(atoms.size()); ++i)
      if (needs[i])
        throw Error(ErrorCode::kValenceViolation,
                    "no valid Kekule assignment for aromatic system",
                    atoms_[i].offset);
    throw Error(ErrorCode::kValenceViolation,
                "no valid Kekule assignment for aromatic system", 0);
  }

  // Backtracking perfect matching; always branches on the most constrained
  // unmatched atom.
  static bool match(const std::vector<std::vector<std::pair<int, int>>> &adj,
                    const std::vector<char> &needs, std::vector<int> &mate,
                    const std::vector<Bond> &bonds, std::size_t &budget) {
    if (budget == 0)
      return false;
    --budget;

    const int n = static_cast<int>(needs.size());
    int best = -1;
    int best_options = 1 << 30;
    for (int i = 0; i < n; ++i) {
      if (!needs[i] || mate[i] >= 0)
        continue;
      int options = 0;
      for (auto [j, bi]: adj[i])
        if (mate[j] < 0)
          ++options;
      if (options < best_options) {
        best_options = options;
        best = i;
      }
    }
    if (best < 0)
      return true;
    if (best_options == 0)
      return false;

    for (auto [j, bi]: adj[best]) {
      if (mate[j] >= 0)
        continue;
      mate[best] = bi;
      mate[j] = bi;
      if (match(adj, needs, mate, bonds, budget))
        return true;
      mate[best] = -1;
      mate[j] = -1;
    }
    return false;
  }

  std::string_view text_;
  std::vector<std::string> *warnings_;
  std::size_t pos_ = 0;
  std::vector<ParsedAtom> atoms_;
  std::vector<ParsedBond> bonds_;
  std::map<int, RingOpen> rings_;
  std::vector<BranchPoint> branches_;
  bool warned_bond_stereo_ = false;
  bool warned_chirality_ = false;
};

}  // namespace internal

/// Parses an organic-subset SMILES string. Stereo marks, isotopes and atom
/// classes are accepted and dropped; a note is appended to `warnings` for
/// each kind encountered. Errors carry the byte offset of the offending token.
inline Molecule parse_smiles(std::string_view text,
                             std::vector<std::string> *warnings = nullptr) {
  return internal::SmilesParser(text, warnings).parse();
}

}  // namespace gnc
