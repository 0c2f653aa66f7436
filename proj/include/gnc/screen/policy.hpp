//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gnc/core/error.hpp"

namespace gnc {

using PropertyMap = std::map<std::string, double>;

struct BaThreshold {
  std::string target;
  bool below = true;  // pass iff BA < value; otherwise pass iff BA > value
  double value = 0;
};

/// Interval with independently open or closed ends; infinite ends allowed.
struct Range {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_closed = true;
  bool hi_closed = true;

  bool contains(double x) const {
    if (!std::isfinite(x) && !std::isinf(x))
      return false;
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool under = hi_closed ? x <= hi : x < hi;
    return above && under;
  }

  std::string describe() const {
    std::ostringstream os;
    os << (lo_closed ? "[" : "(") << lo << ", " << hi << (hi_closed ? "]" : ")");
    return os.str();
  }
};

namespace admet {
inline constexpr const char *kFdamdd = "FDAMDD";
inline constexpr const char *kF20 = "F20%";
inline constexpr const char *kHalfLife = "T1/2";
inline constexpr const char *kLogP = "LogP";
inline constexpr const char *kLogS = "LogS";
inline constexpr const char *kCaco2 = "Caco-2";
inline constexpr const char *kSas = "SAS";
}  // namespace admet

struct ScreeningPolicy {
  std::vector<BaThreshold> ba {
    { "MOR", true, -9.54 },
    { "KOR", true, -9.54 },
    { "DOR", true, -9.54 },
    { "hERG", false, -8.18 },
  };
  // Indexes the ADMET gate checks.
  std::vector<std::string> admet_indexes {
    admet::kFdamdd, admet::kF20, admet::kHalfLife, admet::kLogP,
    admet::kLogS, admet::kCaco2, admet::kSas,
  };
  bool relaxed_logp = false;       // LogP in [0, 5] instead of [0, 3]
  bool accept_medium = false;      // probability indexes up to 0.7
  double novelty_min = -1.0;       // band on max training similarity
  double novelty_max = 1.0;

  void validate() const {
    for (const auto &t: ba)
      if (!std::isfinite(t.value))
        throw Error(ErrorCode::kInvalidConfig,
                    "BA threshold for " + t.target + " is not finite");
    if (!(novelty_min <= novelty_max))
      throw Error(ErrorCode::kInvalidConfig, "novelty band min > max");
  }

  Range range(const std::string &index) const {
    const double inf = std::numeric_limits<double>::infinity();
    if (index == admet::kFdamdd || index == admet::kF20
        || index == admet::kHalfLife)
      return { 0.0, accept_medium ? 0.7 : 0.3, true, true };
    if (index == admet::kLogP)
      return { 0.0, relaxed_logp ? 5.0 : 3.0, true, true };
    if (index == admet::kLogS)
      return { -4.0, 0.5, true, true };
    if (index == admet::kCaco2)
      return { -5.15, inf, false, true };
    if (index == admet::kSas)
      return { -inf, 6.0, true, false };
    throw Error(ErrorCode::kInvalidConfig, "unknown ADMET index '" + index + "'");
  }

  nlohmann::json to_json() const {
    nlohmann::json ba_json = nlohmann::json::array();
    for (const auto &t: ba)
      ba_json.push_back({ { "target", t.target },
                          { "op", t.below ? "<" : ">" },
                          { "value", t.value } });
    return { { "ba", ba_json },
             { "admet_indexes", admet_indexes },
             { "relaxed_logp", relaxed_logp },
             { "accept_medium", accept_medium },
             { "novelty_band", { novelty_min, novelty_max } } };
  }

  static ScreeningPolicy from_json(const nlohmann::json &j) {
    ScreeningPolicy p;
    if (j.contains("ba")) {
      p.ba.clear();
      for (const auto &t: j.at("ba")) {
        const auto op = t.at("op").get<std::string>();
        if (op != "<" && op != ">")
          throw Error(ErrorCode::kInvalidConfig, "BA op must be < or >");
        p.ba.push_back({ t.at("target").get<std::string>(), op == "<",
                         t.at("value").get<double>() });
      }
    }
    p.admet_indexes = j.value("admet_indexes", p.admet_indexes);
    p.relaxed_logp = j.value("relaxed_logp", p.relaxed_logp);
    p.accept_medium = j.value("accept_medium", p.accept_medium);
    if (j.contains("novelty_band")) {
      p.novelty_min = j.at("novelty_band").at(0).get<double>();
      p.novelty_max = j.at("novelty_band").at(1).get<double>();
    }
    for (const auto &i: p.admet_indexes)
      p.range(i);
    p.validate();
    return p;
  }
};

struct Verdict {
  bool pass = true;
  std::vector<std::string> reasons;  // one per failed check

  nlohmann::json to_json() const {
    return { { "pass", pass }, { "reasons", reasons } };
  }
};

namespace internal {

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace internal

/// All thresholds must hold (strict inequalities).
inline Verdict ba_gate(const PropertyMap &predictions,
                       const ScreeningPolicy &policy) {
  std::vector<std::string> missing;
  for (const auto &t: policy.ba)
    if (!predictions.count(t.target))
      missing.push_back(t.target);
  if (!missing.empty()) {
    std::string list;
    for (const auto &m: missing)
      list += (list.empty() ? "" : ", ") + m;
    throw Error(ErrorCode::kMissingTarget, "no prediction for " + list);
  }
  Verdict v;
  for (const auto &t: policy.ba) {
    const double ba = predictions.at(t.target);
    const bool ok = t.below ? ba < t.value : ba > t.value;
    if (!ok) {
      v.pass = false;
      v.reasons.push_back(t.target + ": " + internal::fmt(ba)
                          + (t.below ? " not < " : " not > ")
                          + internal::fmt(t.value));
    }
  }
  return v;
}

/// Every configured index must be present and inside its range.
inline Verdict admet_gate(const PropertyMap &properties,
                          const ScreeningPolicy &policy) {
  std::string missing;
  for (const auto &i: policy.admet_indexes)
    if (!properties.count(i))
      missing += (missing.empty() ? "" : ", ") + i;
  if (!missing.empty())
    throw Error(ErrorCode::kMissingProperty, "missing " + missing);
  Verdict v;
  for (const auto &i: policy.admet_indexes) {
    const auto r = policy.range(i);
    const double x = properties.at(i);
    if (!r.contains(x)) {
      v.pass = false;
      v.reasons.push_back(i + ": " + internal::fmt(x) + " outside "
                          + r.describe());
    }
  }
  return v;
}

}  // namespace gnc
