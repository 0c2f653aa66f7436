//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gnc/core/error.hpp"
#include "gnc/molgraph/canon.hpp"
#include "gnc/molgraph/smiles.hpp"

namespace gnc {

enum class LabelType { kKi, kIC50 };

inline std::string_view label_name(LabelType t) {
  return t == LabelType::kKi ? "Ki" : "IC50";
}

/// Binding free energy in kcal/mol from a Ki or IC50 in nanomolar.
/// IC50 is taken as twice Ki; BA = 1.3633 log10(Ki / M).
inline double label_to_ba(LabelType type, double value_nm) {
  if (!(value_nm > 0) || !std::isfinite(value_nm))
    throw Error(ErrorCode::kNonPositiveValue,
                "label value must be positive, got "
                    + std::to_string(value_nm));
  double ki_molar = value_nm * 1e-9;
  if (type == LabelType::kIC50)
    ki_molar /= 2;
  return 1.3633 * std::log10(ki_molar);
}

inline const std::vector<std::string> &known_targets() {
  static const std::vector<std::string> t { "MOR", "KOR", "DOR", "hERG" };
  return t;
}

struct LabeledRow {
  std::string compound_id;
  std::string smiles;  // canonical
  std::string target;
  LabelType label_type = LabelType::kKi;
  double value_nm = 0;
  double ba = 0;  // kcal/mol
};

struct RejectedRow {
  std::size_t line;
  std::string reason;
};

struct LabeledDataset {
  std::vector<LabeledRow> rows;
  std::vector<RejectedRow> rejected;

  std::vector<std::string> targets() const {
    std::vector<std::string> out;
    for (const auto &r: rows)
      if (std::find(out.begin(), out.end(), r.target) == out.end())
        out.push_back(r.target);
    return out;
  }

  LabeledDataset for_target(const std::string &target) const {
    LabeledDataset d;
    for (const auto &r: rows)
      if (r.target == target)
        d.rows.push_back(r);
    return d;
  }
};

inline constexpr std::string_view kDatasetHeader =
    "compound_id,smiles,target,label_type,value_nM";
inline constexpr std::string_view kDatasetHeaderWithBa =
    "compound_id,smiles,target,label_type,value_nM,ba_kcal_mol";

namespace internal {

inline std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c: line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace internal

/// Reads a dataset CSV. A wrong header throws SchemaMismatch; bad rows are
/// collected with their 1-based line number and skipped. An optional sixth
/// BA column is accepted and recomputed.
inline LabeledDataset parse_dataset_csv(std::string_view text) {
  LabeledDataset d;
  std::istringstream in{ std::string(text) };
  std::string line;
  std::size_t line_no = 0;
  // Leading '#' lines are provenance comments.
  do {
    if (!std::getline(in, line))
      throw Error(ErrorCode::kSchemaMismatch, "empty dataset");
    ++line_no;
  } while (!line.empty() && line[0] == '#');
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != kDatasetHeader && line != kDatasetHeaderWithBa)
    throw Error(ErrorCode::kSchemaMismatch,
                "expected header '" + std::string(kDatasetHeader) + "'",
                line_no);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r")
      continue;
    auto f = internal::split_csv(line);
    auto reject = [&](std::string why) {
      d.rejected.push_back({ line_no, std::move(why) });
    };
    if (f.size() != 5 && f.size() != 6) {
      reject("expected 5 fields, got " + std::to_string(f.size()));
      continue;
    }
    LabeledRow r;
    r.compound_id = f[0];
    r.target = f[2];
    if (f[3] == "Ki") {
      r.label_type = LabelType::kKi;
    } else if (f[3] == "IC50") {
      r.label_type = LabelType::kIC50;
    } else {
      reject("unknown label type '" + f[3] + "'");
      continue;
    }
    try {
      std::size_t used = 0;
      r.value_nm = std::stod(f[4], &used);
      if (used != f[4].size())
        throw std::invalid_argument("trailing characters");
    } catch (const std::exception &) {
      reject("value_nM '" + f[4] + "' is not a number");
      continue;
    }
    try {
      r.ba = label_to_ba(r.label_type, r.value_nm);
      r.smiles = write_canonical_smiles(parse_smiles(f[1]));
    } catch (const Error &e) {
      reject(e.what());
      continue;
    }
    if (r.compound_id.empty() || r.target.empty()) {
      reject("empty compound id or target");
      continue;
    }
    d.rows.push_back(std::move(r));
  }
  return d;
}

inline LabeledDataset read_dataset_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::kIo, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dataset_csv(ss.str());
}

inline std::string format_dataset_csv(const LabeledDataset &d) {
  std::ostringstream os;
  os.precision(17);
  os << kDatasetHeaderWithBa << "\n";
  for (const auto &r: d.rows)
    os << r.compound_id << "," << r.smiles << "," << r.target << ","
       << label_name(r.label_type) << "," << r.value_nm << "," << r.ba
       << "\n";
  return os.str();
}

}  // namespace gnc
