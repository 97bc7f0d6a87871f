#pragma once

#include <optional>
#include <string>

#include "superdelta/superalgebra.hpp"

namespace superdelta {

/// Allowed matrix entries (row, col) for maps of the given parity, in lex
/// order; every entry for ungraded maps. This fixes the flattening shared
/// by all map subspaces below.
std::vector<std::pair<std::uint32_t, std::uint32_t>> map_entries(
    const SuperAlgebra& a, std::optional<std::uint8_t> parity);
std::vector<Scalar> flatten_map(const SuperAlgebra& a,
                                std::optional<std::uint8_t> parity, const Matrix& m);
Matrix unflatten_map(const SuperAlgebra& a, std::optional<std::uint8_t> parity,
                     const std::vector<Scalar>& v);

/// A graded subspace of elements (per-parity bases) or of linear maps
/// (flattened against map_entries).
struct GradedSubspace {
  enum class Ambient { Elements, Maps };
  Ambient ambient = Ambient::Maps;

  // element subspaces
  SubspaceBasis even_basis, odd_basis;

  // map subspaces
  std::optional<std::uint8_t> map_parity;
  SubspaceBasis basis;

  std::size_t dim() const {
    return ambient == Ambient::Elements ? even_basis.dim() + odd_basis.dim()
                                        : basis.dim();
  }
};

/// Kernel of phi(e_i e_j) = delta (phi(e_i) e_j + e_i phi(e_j)) over the
/// full map space (one vector equation per ordered basis pair).
GradedSubspace delta_derivations(const SuperAlgebra& a, const Scalar& delta);

/// Kernel of phi(xy) = delta (phi(x) y + (-1)^{p(x)p(phi)} x phi(y)) over
/// parity-homogeneous maps.
GradedSubspace delta_superderivations(const SuperAlgebra& a, const Scalar& delta,
                                      std::uint8_t parity);

GradedSubspace centroid(const SuperAlgebra& a);
GradedSubspace supercentroid(const SuperAlgebra& a, std::uint8_t parity);

/// Pointwise check of the defining relation on all basis pairs; parity
/// unset means the ungraded delta-derivation relation.
bool is_delta_superderivation(const SuperAlgebra& a, const LinearMap& f,
                              const Scalar& delta, std::optional<std::uint8_t> parity);

/// The derivation a -> {a, 1}; throws when the Leibniz rule fails (which
/// signals that the bracket is not Jordan).
Derivation bracket_derivation(const SuperAlgebra& gamma, const Bracket& br);

/// Phi = { homogeneous alpha : {alpha, a} = D(alpha) a - alpha D(a) }.
GradedSubspace compute_Phi(const SuperAlgebra& gamma, const Bracket& br);

struct BracketCheck {
  bool ok = false;
  std::string witness;
};

/// Super-skew plus the two Jordan-bracket identities on homogeneous basis
/// triples (both sides multilinear, so basis checking is complete).
BracketCheck is_jordan_bracket(const SuperAlgebra& gamma, const Bracket& br);

/// Poisson Leibniz law plus the Lie-superalgebra laws via the
/// generic-element engine.
BracketCheck is_poisson_bracket(const SuperAlgebra& gamma, const Bracket& br);

struct TrivialityReport {
  Scalar delta;
  std::optional<std::uint8_t> parity;
  std::size_t space_dim = 0;
  std::size_t trivial_dim = 0;
  std::size_t nontrivial_dim = 0;
  std::vector<Matrix> nontrivial_generators;
};

/// Solves the delta-(super)derivation space and splits it against the
/// (super)centroid, which is what trivial means here; over non-closed
/// fields the centroid may exceed the scalar multiples of the identity.
TrivialityReport classify(const SuperAlgebra& a, const Scalar& delta,
                          std::optional<std::uint8_t> parity);

/// Does the even 1/2-superderivation space of a Kantor double equal
/// span{ R_z : z in Gamma_0 }?
bool check_R_space(const SuperAlgebra& j, const SuperAlgebra& gamma, const Bracket& br);

struct SimplicityCertificate {
  enum class Verdict { Simple, NotSimple, Unknown };
  Verdict verdict = Verdict::Unknown;
  std::size_t closure_dim = 0;
  SubspaceBasis witness;  // proper nonzero invariant subspace for NotSimple
};

/// Burnside-style certificate: closure of {L_a, ad_a} of full dimension
/// proves there is no nonzero ideal B with {Gamma, B} inside B; otherwise
/// spinning hunts for a witness. Unknown is an honest third verdict.
SimplicityCertificate bracket_simple_certificate(const SuperAlgebra& gamma,
                                                 const Bracket& br,
                                                 std::uint64_t seed = 0);

struct LemmaSuiteReport {
  bool product_span_full = false;    // Gamma = Gamma {Gamma, Gamma}
  bool phi_d_stable = false;         // D(Phi) inside Phi
  bool dk_bracket_identity = false;  // D^k(alpha){b,c} = D^k(alpha)(D(b)c - b D(c)), k <= 3
  bool d_bracket_compatible = false; // D{b,c} = {D b, c} + {b, D c}
  std::string witness;

  bool all() const {
    return product_span_full && phi_d_stable && dk_bracket_identity && d_bracket_compatible;
  }
};

LemmaSuiteReport lemma_suite(const SuperAlgebra& gamma, const Bracket& br);

}  // namespace superdelta
