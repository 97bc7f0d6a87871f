#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "superdelta/scalar.hpp"

namespace superdelta {

// Monomials of the free supercommutative algebra, packed as up to four
// 16-bit variable ids in ascending order (0xFFFF pads). A variable id's low
// bit is its parity: even ids commute, odd ids anticommute and square to
// zero. Total degree is capped at 4, the degree of the Jordan identity.
using Mono = std::uint64_t;

inline constexpr Mono kMonoOne = ~Mono{0};
inline constexpr int kMonoDegreeBound = 4;

inline std::uint16_t make_variable_id(std::uint32_t index, std::uint8_t parity) {
  std::uint32_t id = (index << 1) | (parity & 1u);
  if (id > 0xFFFE) throw std::invalid_argument("variable index out of range");
  return static_cast<std::uint16_t>(id);
}

inline Mono mono_variable(std::uint16_t id) {
  return (kMonoOne & ~Mono{0xFFFF}) | static_cast<Mono>(id);
}

inline std::array<std::uint16_t, 4> mono_unpack(Mono m) {
  return {static_cast<std::uint16_t>(m), static_cast<std::uint16_t>(m >> 16),
          static_cast<std::uint16_t>(m >> 32), static_cast<std::uint16_t>(m >> 48)};
}

inline Mono mono_pack(const std::array<std::uint16_t, 4>& ids) {
  return static_cast<Mono>(ids[0]) | (static_cast<Mono>(ids[1]) << 16) |
         (static_cast<Mono>(ids[2]) << 32) | (static_cast<Mono>(ids[3]) << 48);
}

inline int mono_degree(Mono m) {
  auto ids = mono_unpack(m);
  int d = 0;
  for (auto id : ids)
    if (id != 0xFFFF) ++d;
  return d;
}

/// Canonical product of two monomials: merged id list plus the sign
/// accumulated from moving odd variables past each other. Returns sign 0
/// when an odd variable repeats.
inline std::pair<Mono, int> mono_mul(Mono a, Mono b) {
  auto ia = mono_unpack(a);
  auto ib = mono_unpack(b);
  int da = mono_degree(a), db = mono_degree(b);
  if (da + db > kMonoDegreeBound)
    throw std::logic_error("FreeSuperPoly degree bound exceeded");
  std::array<std::uint16_t, 4> out{0xFFFF, 0xFFFF, 0xFFFF, 0xFFFF};
  int oa = 0, ob = 0, n = 0, sign = 0;
  int odd_left_in_a = 0;
  for (int i = 0; i < da; ++i)
    if (ia[i] & 1) ++odd_left_in_a;
  while (oa < da || ob < db) {
    if (ob >= db || (oa < da && ia[oa] <= ib[ob])) {
      if (oa < da && ob < db && ia[oa] == ib[ob] && (ia[oa] & 1)) {
        return {kMonoOne, 0};  // odd variable squared
      }
      if (ia[oa] & 1) --odd_left_in_a;
      out[n++] = ia[oa++];
    } else {
      if (ib[ob] & 1) sign += odd_left_in_a;
      out[n++] = ib[ob++];
    }
  }
  return {mono_pack(out), (sign & 1) ? -1 : 1};
}

/// Free supercommutative polynomial with exact coefficients; the shared
/// coefficient space for generic-element identity checking.
struct FreeSuperPoly {
  FieldDesc field;
  std::unordered_map<Mono, Scalar> terms;

  explicit FreeSuperPoly(const FieldDesc& f) : field(f) {}

  static FreeSuperPoly zero(const FieldDesc& f) { return FreeSuperPoly(f); }

  static FreeSuperPoly variable(const FieldDesc& f, std::uint16_t id) {
    FreeSuperPoly p(f);
    p.terms.emplace(mono_variable(id), Scalar::one(f));
    return p;
  }

  bool is_zero() const { return terms.empty(); }

  void add_term(Mono m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  /// *this += sign * c * (a * b)
  void add_scaled_product(const FreeSuperPoly& a, const FreeSuperPoly& b,
                          const Scalar& c, bool negate) {
    for (const auto& [ma, ca] : a.terms) {
      for (const auto& [mb, cb] : b.terms) {
        auto [m, s] = mono_mul(ma, mb);
        if (s == 0) continue;
        Scalar v = ca * cb * c;
        if ((s < 0) != negate) v = -v;
        add_term(m, v);
      }
    }
  }

  FreeSuperPoly operator*(const FreeSuperPoly& o) const {
    FreeSuperPoly out(field);
    out.add_scaled_product(*this, o, Scalar::one(field), false);
    return out;
  }

  FreeSuperPoly& operator+=(const FreeSuperPoly& o) {
    for (const auto& [m, c] : o.terms) add_term(m, c);
    return *this;
  }

  FreeSuperPoly& operator-=(const FreeSuperPoly& o) {
    for (const auto& [m, c] : o.terms) add_term(m, -c);
    return *this;
  }
};

}  // namespace superdelta
