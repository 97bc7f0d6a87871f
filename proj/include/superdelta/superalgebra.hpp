#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "superdelta/linalg.hpp"
#include "superdelta/scalar.hpp"

namespace superdelta {

/// Finite-dimensional Z2-graded algebra given by a parity vector and a
/// sparse structure-constant table: e_i * e_j = sum_k c * e_k. Absent (i,j)
/// pairs mean zero product; stored constants are nonzero and respect the
/// grading parity(k) = parity(i) + parity(j) mod 2.
struct SuperAlgebra {
  using Terms = std::vector<std::pair<std::uint32_t, Scalar>>;
  using Table = std::map<std::pair<std::uint32_t, std::uint32_t>, Terms>;

  FieldDesc field;
  std::size_t dim = 0;
  std::vector<std::uint8_t> parity;
  std::vector<std::string> names;  // optional basis labels
  Table table;

  SuperAlgebra() : field(FieldDesc::rationals()) {}
  SuperAlgebra(FieldDesc f, std::size_t n)
      : field(f), dim(n), parity(n, 0) {}

  /// Canonicalises (sorts by k, drops zeros) and enforces the grading
  /// invariant; throws on violation.
  void set_product(std::uint32_t i, std::uint32_t j, Terms terms);
  const Terms* product_terms(std::uint32_t i, std::uint32_t j) const;

  std::string basis_name(std::uint32_t i) const;
  std::size_t even_dim() const;
  std::size_t odd_dim() const;
};

struct Element {
  const SuperAlgebra* alg = nullptr;
  std::vector<Scalar> coords;

  static Element zero(const SuperAlgebra& a);
  static Element basis(const SuperAlgebra& a, std::uint32_t i);

  bool is_zero() const;
  /// Parity of a homogeneous element (zero counts as even); nullopt when
  /// the support mixes parities.
  std::optional<std::uint8_t> homogeneous_parity() const;
  std::string str() const;

  Element operator+(const Element& o) const;
  Element operator-(const Element& o) const;
  Element operator-() const;
  Element scaled(const Scalar& c) const;
  bool operator==(const Element& o) const;
};

Element multiply(const SuperAlgebra& a, const Element& u, const Element& v);

/// Homogeneous (or, when parity is unset, arbitrary) linear endomorphism;
/// column c of the matrix is the image of e_c.
struct LinearMap {
  const SuperAlgebra* alg = nullptr;
  std::optional<std::uint8_t> parity;
  Matrix mat;

  static LinearMap homogeneous(const SuperAlgebra& a, std::uint8_t parity, Matrix m);
  static LinearMap ungraded(const SuperAlgebra& a, Matrix m);
  static LinearMap identity(const SuperAlgebra& a);

  Element apply(const Element& x) const;
  Element apply_basis(std::uint32_t i) const;
};

/// Auxiliary super-skew bilinear product {.,.} on a superalgebra.
struct Bracket {
  const SuperAlgebra* gamma = nullptr;
  SuperAlgebra::Table table;

  explicit Bracket(const SuperAlgebra& g) : gamma(&g) {}

  void set_bracket(std::uint32_t i, std::uint32_t j, SuperAlgebra::Terms terms);
  const SuperAlgebra::Terms* terms(std::uint32_t i, std::uint32_t j) const;
  Element eval(const Element& u, const Element& v) const;
  Element eval_basis(std::uint32_t i, std::uint32_t j) const;

  /// Super-skew and bracket-grading check; fills a witness on failure.
  bool is_super_skew(std::string* witness = nullptr) const;
};

/// Even linear map satisfying the Leibniz rule on all basis pairs,
/// verified at construction.
struct Derivation {
  LinearMap map;
  static Derivation checked(const SuperAlgebra& a, Matrix m);
  Element apply(const Element& x) const { return map.apply(x); }
};

/// Even linear * with (a*)* = a and (ab)* = (-1)^{p(a)p(b)} b* a*,
/// verified at construction.
struct Superinvolution {
  LinearMap map;
  static Superinvolution checked(const SuperAlgebra& a, Matrix m);
  Element apply(const Element& x) const { return map.apply(x); }
};

bool check_supercommutative(const SuperAlgebra& a);

std::optional<Element> find_unit(const SuperAlgebra& a);

/// Graded tensor product: (a x b)(c x d) = (-1)^{p(b)p(c)} (ac) x (bd).
SuperAlgebra tensor_super(const SuperAlgebra& a, const SuperAlgebra& b);

/// Super-symmetrised product a o b = 1/2 (ab + (-1)^{p(a)p(b)} ba) on the
/// same graded space.
SuperAlgebra plus(const SuperAlgebra& a);

/// Even part of G(n) x A as an ungraded (all-even) algebra.
SuperAlgebra envelope(const SuperAlgebra& a, std::size_t n);

/// R_z : y -> z*y for homogeneous z.
LinearMap left_mult(const SuperAlgebra& a, const Element& z);

enum class IdentityKind { Associative, Jordan, Alternative, Lie };

struct IdentityReport {
  bool ok = false;
  std::string witness;  // empty on success
};

/// Generic-element verification over free supercommutative coefficients:
/// sound and complete for all scalar extensions, in particular over F_p
/// where per-variable degrees reach the field size and sampling would be
/// unsound.
IdentityReport verify_superidentity(const SuperAlgebra& a, IdentityKind kind);

}  // namespace superdelta
