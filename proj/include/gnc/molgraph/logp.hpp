//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <charconv>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gnc/core/error.hpp"
#include "gnc/molgraph/logp_table.hpp"
#include "gnc/molgraph/molecule.hpp"
#include "gnc/molgraph/pattern.hpp"

namespace gnc {

struct AtomContribution {
  std::string type;
  AtomPattern pattern;
  double value;
  // Element-level catch-all rows (CS, NS, OS, HS).
  bool generic;
};

/// An ordered atom-type contribution table. The default instance is the
/// built-in Wildman-Crippen table; alternative tables in the same
/// tab-separated layout can be loaded for experiments.
class AtomContributionTable {
public:
  explicit AtomContributionTable(std::string_view text,
                                 std::string version = "custom")
      : version_(std::move(version)) {
    std::istringstream in { std::string(text) };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#')
        continue;
      auto t1 = line.find('\t');
      auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
      if (t2 == std::string::npos)
        throw Error(ErrorCode::kMalformedRecord, "expected 3 columns", lineno);
      std::string type = line.substr(0, t1);
      std::string smarts = line.substr(t1 + 1, t2 - t1 - 1);
      std::string num = line.substr(t2 + 1);
      auto tab = num.find('\t');
      if (tab != std::string::npos)
        num.resize(tab);
      double v = 0;
      auto res = std::from_chars(num.data(), num.data() + num.size(), v);
      if (res.ec != std::errc())
        throw Error(ErrorCode::kMalformedRecord, "bad contribution", lineno);
      bool generic = type.size() == 2 && type[1] == 'S';
      rows_.push_back({ type, AtomPattern(smarts), v, generic });
    }
  }

  static const AtomContributionTable &wildman_crippen() {
    static const AtomContributionTable table(kLogPTable,
                                             std::string(kLogPTableVersion));
    return table;
  }

  const std::vector<AtomContribution> &rows() const noexcept { return rows_; }
  const std::string &version() const noexcept { return version_; }

private:
  std::string version_;
  std::vector<AtomContribution> rows_;
};

struct LogPResult {
  double value = 0.0;
  // Per expanded-graph atom type (heavy atoms first, then hydrogens in
  // owner order); empty string for untyped atoms.
  std::vector<std::string> types;
  // Heavy-atom indices whose contribution came from an element-level
  // fallback (own or one of their hydrogens).
  std::vector<int> fallback_atoms;
  bool flagged() const noexcept { return !fallback_atoms.empty(); }
};

inline LogPResult logp_breakdown(
    const Molecule &mol,
    const AtomContributionTable &table =
        AtomContributionTable::wildman_crippen()) {
  HydrogenExpandedGraph g(mol);
  LogPResult out;
  out.types.resize(g.size());
  std::vector<char> flagged(mol.atom_count(), 0);
  for (int i = 0; i < g.size(); ++i) {
    const AtomContribution *hit = nullptr;
    for (const auto &row: table.rows()) {
      if (row.pattern.matches_at(g, i)) {
        hit = &row;
        break;
      }
    }
    if (hit == nullptr || hit->generic)
      flagged[g.node(i).source] = 1;
    if (hit != nullptr) {
      out.value += hit->value;
      out.types[i] = hit->type;
    }
  }
  for (int i = 0; i < mol.atom_count(); ++i)
    if (flagged[i])
      out.fallback_atoms.push_back(i);
  return out;
}

inline double logp_estimate(const Molecule &mol) {
  return logp_breakdown(mol).value;
}

}  // namespace gnc
