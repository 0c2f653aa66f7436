//
// Project gnc - Copyright 2026 The gnc Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace gnc {

// The SMILES organic subset. Everything else is rejected as UnknownElement.
enum class Element: std::uint8_t {
  kH = 1,
  kB = 5,
  kC = 6,
  kN = 7,
  kO = 8,
  kF = 9,
  kP = 15,
  kS = 16,
  kCl = 17,
  kBr = 35,
  kI = 53,
};

inline constexpr std::array<Element, 11> kAllElements = {
  Element::kH, Element::kB, Element::kC,  Element::kN,  Element::kO, Element::kF,
  Element::kP, Element::kS, Element::kCl, Element::kBr, Element::kI,
};

inline constexpr int atomic_number(Element e) noexcept {
  return static_cast<int>(e);
}

inline constexpr std::string_view symbol(Element e) noexcept {
  switch (e) {
  case Element::kH: return "H";
  case Element::kB: return "B";
  case Element::kC: return "C";
  case Element::kN: return "N";
  case Element::kO: return "O";
  case Element::kF: return "F";
  case Element::kP: return "P";
  case Element::kS: return "S";
  case Element::kCl: return "Cl";
  case Element::kBr: return "Br";
  case Element::kI: return "I";
  }
  return "?";
}

inline constexpr std::optional<Element> element_from_symbol(
    std::string_view s) noexcept {
  for (Element e: kAllElements)
    if (symbol(e) == s)
      return e;
  return std::nullopt;
}

inline constexpr std::optional<Element> element_from_number(int z) noexcept {
  for (Element e: kAllElements)
    if (atomic_number(e) == z)
      return e;
  return std::nullopt;
}

inline constexpr bool can_be_aromatic(Element e) noexcept {
  return e == Element::kB || e == Element::kC || e == Element::kN
         || e == Element::kO || e == Element::kP || e == Element::kS;
}

inline constexpr bool is_halogen(Element e) noexcept {
  return e == Element::kF || e == Element::kCl || e == Element::kBr
         || e == Element::kI;
}

/// Allowed total valences (bond-order sum plus attached hydrogens), ascending.
/// Charged atoms follow the isoelectronic neighbor; for |charge| >= 2 the
/// list is empty and only an upper bound of 8 is enforced.
inline std::span<const int> allowed_valences(Element e, int charge) noexcept {
  static constexpr int v0[] = { 0 };
  static constexpr int v1[] = { 1 };
  static constexpr int v2[] = { 2 };
  static constexpr int v3[] = { 3 };
  static constexpr int v4[] = { 4 };
  static constexpr int v35[] = { 3, 5 };
  static constexpr int v135[] = { 1, 3, 5 };
  static constexpr int v246[] = { 2, 4, 6 };

  if (charge == 0) {
    switch (e) {
    case Element::kH: return v1;
    case Element::kB: return v3;
    case Element::kC: return v4;
    case Element::kN:
    case Element::kP: return v35;
    case Element::kO: return v2;
    case Element::kS: return v246;
    default: return v1;
    }
  }
  if (charge == 1) {
    switch (e) {
    case Element::kH: return v0;
    case Element::kB: return v2;
    case Element::kC: return v3;
    case Element::kN:
    case Element::kP: return v4;
    case Element::kO: return v3;
    case Element::kS: return v35;
    default: return v2;
    }
  }
  if (charge == -1) {
    switch (e) {
    case Element::kH: return v0;
    case Element::kB: return v4;
    case Element::kC: return v3;
    case Element::kN:
    case Element::kP: return v2;
    case Element::kO: return v1;
    case Element::kS: return v135;
    default: return v0;
    }
  }
  return {};
}

inline int max_valence(Element e, int charge) noexcept {
  auto v = allowed_valences(e, charge);
  return v.empty() ? 8 : v.back();
}

}  // namespace gnc
