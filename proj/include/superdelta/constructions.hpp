#pragma once

#include "superdelta/superalgebra.hpp"

namespace superdelta {

/// Grassmann algebra G(n): basis indexed by generator subsets (bitmask
/// ascending), xi_i^2 = 0, xi_i xi_j = -xi_j xi_i.
SuperAlgebra grassmann(std::size_t n, const FieldDesc& field);

/// Truncated polynomial algebra B(m) = F[a_1..a_m | a_i^p = 0] over F_p,
/// with the monomial index bookkeeping needed by derivations.
struct TruncatedPoly {
  SuperAlgebra algebra;
  std::size_t m = 0;
  std::uint64_t p = 0;

  std::vector<std::uint32_t> exponents(std::uint32_t index) const;
  std::uint32_t index(const std::vector<std::uint32_t>& exp) const;
};

TruncatedPoly truncated_poly(std::size_t m, std::uint64_t p);

/// B(m,n) = B(m) tensor G(n).
SuperAlgebra b_mn(std::size_t m, std::size_t n, std::uint64_t p);

/// d/d a_{var} on B(m) (0-based variable index).
Derivation partial_derivative(const TruncatedPoly& b, std::size_t var);

/// Jordan bracket of vector type: {a,b} = D(a)b - a D(b).
Bracket vector_bracket(const SuperAlgebra& gamma, const Derivation& d);

/// Poisson bracket on G(n) from the generator-wise super-derivatives, sign
/// convention fixed so that {xi_i, xi_i} = 1; gamma must be a grassmann()
/// output.
Bracket poisson_grassmann(const SuperAlgebra& gamma);

/// Kantor double J(Gamma, {,}) = Gamma + Gamma x. The first dim(Gamma)
/// basis vectors are Gamma, the second half is Gamma x.
SuperAlgebra kantor_double(const SuperAlgebra& gamma, const Bracket& br);

/// Cheng-Kac superalgebra CK(Z, d), dimension 8 dim(Z); sector layout
/// Z, w1 Z, w2 Z, w3 Z (even), x Z, x1 Z, x2 Z, x3 Z (odd).
SuperAlgebra cheng_kac(const SuperAlgebra& z, const Derivation& d);

/// Algebra plus a validated superinvolution matrix.
struct StarAlgebra {
  SuperAlgebra algebra;
  Matrix star;
};

/// B(1,2): 1 even, x, y odd, xy = -yx = 1; star negates the odd part.
/// Characteristic 3 only.
StarAlgebra b12(const FieldDesc& field);

/// B(4,2): 2x2 matrix units plus the Cayley bimodule {m1, m2}; star is the
/// symplectic involution on the even part and negation on the odd part.
/// Characteristic 3 only.
StarAlgebra b42(const FieldDesc& field);

/// Hermitian 3x3 matrices over (B, *) under the super-symmetrised matrix
/// product.
SuperAlgebra h3(const SuperAlgebra& b, const Superinvolution& star);
SuperAlgebra h3(const StarAlgebra& b);

}  // namespace superdelta
