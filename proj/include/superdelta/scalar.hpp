#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

namespace superdelta {

enum class FieldKind : std::uint8_t { Rationals, PrimeField };

/// Base field descriptor: the rationals, or a prime field F_p with odd p.
struct FieldDesc {
  FieldKind kind = FieldKind::Rationals;
  std::uint64_t p = 0;  // modulus, meaningful only for PrimeField

  static FieldDesc rationals() { return FieldDesc{FieldKind::Rationals, 0}; }
  static FieldDesc prime_field(std::uint64_t p);  // requires p odd prime >= 3

  bool is_rational() const { return kind == FieldKind::Rationals; }
  bool operator==(const FieldDesc&) const = default;
  std::string str() const;
};

bool is_prime_u64(std::uint64_t n);

/// Exact field element in canonical form: a reduced fraction over Q, or a
/// residue in [0, p) over F_p. Values from distinct fields never mix.
class Scalar {
 public:
  Scalar() : field_(FieldDesc::rationals()), v_(mpq_class(0)) {}

  static Scalar zero(const FieldDesc& f);
  static Scalar one(const FieldDesc& f);
  static Scalar from_int(const FieldDesc& f, long long v);
  static Scalar from_mpq(mpq_class v);                       // Q only
  static Scalar residue(const FieldDesc& f, std::uint64_t r);  // F_p only

  const FieldDesc& field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;

  /// Canonical string: "a/b" (b>0, reduced, "/1" omitted) over Q, decimal
  /// residue over F_p.
  std::string str() const;

  const mpq_class& rational() const;   // requires Rationals
  std::uint64_t residue_value() const;  // requires PrimeField

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar operator-() const;
  Scalar inv() const;

  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

 private:
  Scalar(FieldDesc f, mpq_class q) : field_(f), v_(std::move(q)) {}
  Scalar(FieldDesc f, std::uint64_t r) : field_(f), v_(r) {}

  FieldDesc field_;
  std::variant<mpq_class, std::uint64_t> v_;
};

/// Parses "a", "-a", "a/b" in the given field; fractions over F_p resolve
/// to a * b^-1 mod p.
Scalar parse_scalar(std::string_view text, const FieldDesc& field);

/// The field element 1/2 (requires characteristic != 2, which FieldDesc
/// already guarantees).
Scalar half(const FieldDesc& field);

namespace fp {
// Modular arithmetic helpers on canonical residues in [0, p).
std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t inv(std::uint64_t a, std::uint64_t p);
std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p);
}  // namespace fp

}  // namespace superdelta
