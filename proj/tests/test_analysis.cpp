#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "superdelta/analysis.hpp"
#include "superdelta/constructions.hpp"

using namespace superdelta;

namespace {
const FieldDesc Q = FieldDesc::rationals();
const FieldDesc F3 = FieldDesc::prime_field(3);
const FieldDesc F5 = FieldDesc::prime_field(5);

struct VectorDouble {
  TruncatedPoly gamma;
  Derivation d;
  Bracket bracket;
  SuperAlgebra j;

  VectorDouble(std::size_t m, std::uint64_t p, std::size_t var = 0)
      : gamma(truncated_poly(m, p)),
        d(partial_derivative(gamma, var)),
        bracket(vector_bracket(gamma.algebra, d)),
        j(kantor_double(gamma.algebra, bracket)) {}
};

// span of left multiplications by the given element-space basis, flattened
// as parity-pi maps
SubspaceBasis mult_span(const SuperAlgebra& a, const SubspaceBasis& elements,
                        std::uint8_t parity) {
  RowEchelon ech(a.field, map_entries(a, parity).size());
  for (const auto& v : elements.vectors) {
    LinearMap lm = left_mult(a, Element{&a, v});
    ech.add_row(flatten_map(a, parity, lm.mat));
  }
  return ech.row_space();
}

bool invertible_in(const SuperAlgebra& a, const Element& alpha) {
  auto unit = find_unit(a);
  if (!unit) return false;
  // alpha * beta = 1 solvable iff the unit lies in the column space of L_alpha
  Matrix l = left_mult(a, alpha).mat;
  RowEchelon cols(a.field, a.dim);
  for (std::size_t c = 0; c < a.dim; ++c) {
    std::vector<Scalar> col(a.dim, Scalar::zero(a.field));
    for (std::size_t r = 0; r < a.dim; ++r) col[r] = l.at(r, c);
    cols.add_row(col);
  }
  std::size_t rank = cols.rank();
  cols.add_row(unit->coords);
  return cols.rank() == rank;
}
}  // namespace

TEST_CASE("delta derivations on small algebras") {
  SuperAlgebra g1 = grassmann(1, Q);
  // the Euler map xi -> xi, 1 -> 0 is a derivation
  Matrix euler(Q, 2, 2);
  euler.at(1, 1) = Scalar::one(Q);
  CHECK(is_delta_superderivation(g1, LinearMap::ungraded(g1, euler), Scalar::one(Q),
                                 std::nullopt));
  GradedSubspace ders = delta_derivations(g1, Scalar::one(Q));
  CHECK(ders.dim() >= 1);

  // identity map is a 1/2-derivation of any unital algebra
  CHECK(is_delta_superderivation(g1, LinearMap::identity(g1), half(Q), std::nullopt));

  // unital algebra over Q at delta = 2: only the zero map
  CHECK(delta_derivations(g1, Scalar::from_int(Q, 2)).dim() == 0);

  // zero-multiplication algebra: every map satisfies every delta relation
  SuperAlgebra zero_mult(Q, 2);
  CHECK(delta_derivations(zero_mult, Scalar::from_int(Q, 7)).dim() == 4);
}

TEST_CASE("half-superderivations of the vector-type double over F5") {
  VectorDouble vd(1, 5);
  const SuperAlgebra& j = vd.j;
  Scalar h = half(F5);
  CHECK(h == Scalar::residue(F5, 3));

  GradedSubspace even = delta_superderivations(j, h, 0);
  CHECK(even.dim() == 5);  // dim Gamma_0 = p

  GradedSubspace odd = delta_superderivations(j, h, 1);
  CHECK(odd.dim() == 0);

  CHECK(check_R_space(j, vd.gamma.algebra, vd.bracket));

  // R_z for z = a is an even 1/2-superderivation; R_x (odd) is not one
  LinearMap ra = left_mult(j, Element::basis(j, 1));
  CHECK(is_delta_superderivation(j, ra, h, std::uint8_t{0}));
  LinearMap rx = left_mult(j, Element::basis(j, 5));  // x = 1*x at index dim(Gamma)
  CHECK_FALSE(is_delta_superderivation(j, rx, h, std::uint8_t{1}));

  // supercentroid: R_z with d(z) = 0, i.e. dimension 1
  GradedSubspace sc = supercentroid(j, 0);
  CHECK(sc.dim() == 1);
  // every supercentroid member is a 1/2-superderivation
  auto cmp = subspace_compare(sc.basis, even.basis);
  CHECK((cmp.relation == SubspaceRelation::FirstInsideSecond ||
         cmp.relation == SubspaceRelation::Equal));

  TrivialityReport rep = classify(j, h, std::uint8_t{0});
  CHECK(rep.space_dim == 5);
  CHECK(rep.trivial_dim == 1);
  CHECK(rep.nontrivial_dim == 4);
  // nontrivial generators are R_z with d(z) != 0: check the defining relation
  for (const auto& g : rep.nontrivial_generators) {
    LinearMap f = LinearMap::homogeneous(j, 0, g);
    CHECK(is_delta_superderivation(j, f, h, std::uint8_t{0}));
  }
}

TEST_CASE("characteristic 3: odd half-superderivations of vector doubles exist") {
  // Over F3 the maps z -> (mu x) z satisfy the odd 1/2-superderivation
  // relation on every sector pair (the obstruction carries a factor 3),
  // so the odd space is the full multiplication space Gamma x.
  VectorDouble vd(1, 3);
  const SuperAlgebra& j = vd.j;
  Scalar h = half(F3);
  LinearMap rx = left_mult(j, Element::basis(j, 3));  // x
  CHECK(is_delta_superderivation(j, rx, h, std::uint8_t{1}));
  GradedSubspace odd = delta_superderivations(j, h, 1);
  CHECK(odd.dim() == 3);
  TrivialityReport rep = classify(j, h, std::uint8_t{1});
  CHECK(rep.nontrivial_dim > 0);

  // over F5 the obstruction is invertible and the same solver finds nothing
  VectorDouble vd5(1, 5);
  CHECK(delta_superderivations(vd5.j, half(F5), 1).dim() == 0);
}

TEST_CASE("centroid facts") {
  VectorDouble vd(1, 5);
  GradedSubspace c = centroid(vd.j);
  CHECK(c.dim() == 1);  // trivial centroid of the simple double

  // identity map is in the even supercentroid of anything
  SuperAlgebra g2 = grassmann(2, Q);
  GradedSubspace sc = supercentroid(g2, 0);
  std::vector<Scalar> id_flat = flatten_map(g2, std::uint8_t{0},
                                            Matrix::identity(Q, g2.dim));
  CHECK(sc.basis.contains(id_flat));
}

TEST_CASE("Phi computation") {
  // vector bracket on B(1): Phi_even is all of Gamma_0
  VectorDouble vd(1, 3);
  GradedSubspace phi = compute_Phi(vd.gamma.algebra, vd.bracket);
  CHECK(phi.even_basis.dim() == 3);
  CHECK(phi.odd_basis.dim() == 0);

  // Poisson bracket on G(2): Phi = span{1}
  SuperAlgebra g2 = grassmann(2, Q);
  Bracket pb = poisson_grassmann(g2);
  GradedSubspace phi2 = compute_Phi(g2, pb);
  CHECK(phi2.even_basis.dim() == 1);
  CHECK(phi2.odd_basis.dim() == 0);
  CHECK(phi2.even_basis.vectors[0][0].is_one());  // the unit itself

  // 1 is always in Phi, and a Phi element with D(alpha) = 0 is invertible
  CHECK(invertible_in(g2, Element{&g2, phi2.even_basis.vectors[0]}));
}

TEST_CASE("bracket derivation") {
  VectorDouble vd(1, 5);
  Derivation d2 = bracket_derivation(vd.gamma.algebra, vd.bracket);
  CHECK(d2.map.mat == vd.d.map.mat);  // recovers the defining derivation
  // D(a^2) = 2a
  CHECK(d2.map.apply_basis(2) ==
        Element::basis(vd.gamma.algebra, 1).scaled(Scalar::from_int(F5, 2)));

  SuperAlgebra g2 = grassmann(2, Q);
  Bracket pb = poisson_grassmann(g2);
  Derivation dp = bracket_derivation(g2, pb);
  CHECK(dp.map.mat.is_zero());  // Poisson brackets have D = 0
}

TEST_CASE("sign-flipped bracket is rejected with a witness") {
  TruncatedPoly b13 = truncated_poly(1, 3);
  const SuperAlgebra& g = b13.algebra;
  Derivation d = partial_derivative(b13, 0);
  Bracket flipped(g);
  for (std::uint32_t i = 0; i < g.dim; ++i) {
    for (std::uint32_t j = 0; j < g.dim; ++j) {
      Element v = multiply(g, d.map.apply_basis(i), Element::basis(g, j)) +
                  multiply(g, Element::basis(g, i), d.map.apply_basis(j));
      SuperAlgebra::Terms terms;
      for (std::uint32_t k = 0; k < g.dim; ++k)
        if (!v.coords[k].is_zero()) terms.emplace_back(k, v.coords[k]);
      flipped.set_bracket(i, j, std::move(terms));
    }
  }
  BracketCheck check = is_jordan_bracket(g, flipped);
  CHECK_FALSE(check.ok);
  CHECK_FALSE(check.witness.empty());
}

TEST_CASE("half-superderivations of a double are multiplications by Phi") {
  // Poisson double of G(2): even 1/2-space = span{L_alpha : alpha in Phi_even}
  SuperAlgebra g2 = grassmann(2, Q);
  Bracket pb = poisson_grassmann(g2);
  SuperAlgebra j = kantor_double(g2, pb);
  Scalar h = half(Q);

  GradedSubspace even = delta_superderivations(j, h, 0);
  GradedSubspace phi = compute_Phi(g2, pb);
  // embed Phi elements into the double (first half of the basis)
  SubspaceBasis phi_in_j(Q, j.dim);
  for (const auto& v : phi.even_basis.vectors) {
    std::vector<Scalar> w(j.dim, Scalar::zero(Q));
    for (std::size_t t = 0; t < v.size(); ++t) w[t] = v[t];
    phi_in_j.vectors.push_back(std::move(w));
  }
  SubspaceBasis expected = mult_span(j, phi_in_j, 0);
  CHECK(subspace_compare(even.basis, expected).relation == SubspaceRelation::Equal);
  CHECK(even.dim() == 1);

  // odd 1/2-space matches Phi_odd = 0
  CHECK(delta_superderivations(j, h, 1).dim() == 0);

  // every 1/2-superderivation of the Poisson double is trivial
  CHECK(classify(j, h, std::uint8_t{0}).nontrivial_dim == 0);
  CHECK(classify(j, h, std::uint8_t{1}).nontrivial_dim == 0);
}

TEST_CASE("delta collapse away from one half") {
  SuperAlgebra g2 = grassmann(2, Q);
  Bracket pb = poisson_grassmann(g2);
  SuperAlgebra j = kantor_double(g2, pb);
  for (const char* text : {"2", "3", "1/3", "-1"}) {
    CHECK(delta_derivations(j, parse_scalar(text, Q)).dim() == 0);
  }
  // delta = 0: maps killing A^2; the double is unital so A^2 = A and only 0
  CHECK(delta_derivations(j, Scalar::zero(Q)).dim() == 0);
}

TEST_CASE("simplicity certificates") {
  TruncatedPoly b13 = truncated_poly(1, 3);
  const SuperAlgebra& g = b13.algebra;
  Bracket vb = vector_bracket(g, partial_derivative(b13, 0));
  SimplicityCertificate simple = bracket_simple_certificate(g, vb);
  CHECK(simple.verdict == SimplicityCertificate::Verdict::Simple);
  CHECK(simple.closure_dim == 9);

  Bracket zero(g);
  SimplicityCertificate not_simple = bracket_simple_certificate(g, zero);
  CHECK(not_simple.verdict == SimplicityCertificate::Verdict::NotSimple);
  REQUIRE(not_simple.witness.dim() == 2);  // span{a, a^2}
  CHECK(not_simple.witness.vectors[0][1].is_one());
  CHECK(not_simple.witness.vectors[1][2].is_one());
  CHECK(not_simple.witness.vectors[0][0].is_zero());

  // 1-dimensional algebra: no proper nonzero subspace exists
  SuperAlgebra f1(Q, 1);
  f1.set_product(0, 0, {{0, Scalar::one(Q)}});
  Bracket zb(f1);
  CHECK(bracket_simple_certificate(f1, zb).verdict ==
        SimplicityCertificate::Verdict::Simple);

  // Poisson bracket on G(2) over Q is simple
  SuperAlgebra g2 = grassmann(2, Q);
  Bracket pb = poisson_grassmann(g2);
  CHECK(bracket_simple_certificate(g2, pb).verdict ==
        SimplicityCertificate::Verdict::Simple);
}

TEST_CASE("lemma suite") {
  VectorDouble vd15(1, 5);
  LemmaSuiteReport rep = lemma_suite(vd15.gamma.algebra, vd15.bracket);
  CHECK(rep.product_span_full);
  CHECK(rep.phi_d_stable);
  CHECK(rep.dk_bracket_identity);
  CHECK(rep.d_bracket_compatible);
  CHECK(rep.all());

  VectorDouble vd23(2, 3);
  CHECK(lemma_suite(vd23.gamma.algebra, vd23.bracket).all());

  // negative control: the zero bracket fails Gamma = Gamma{Gamma,Gamma}
  TruncatedPoly b13 = truncated_poly(1, 3);
  Bracket zero(b13.algebra);
  LemmaSuiteReport zrep = lemma_suite(b13.algebra, zero);
  CHECK_FALSE(zrep.product_span_full);
  CHECK_FALSE(zrep.all());
  CHECK_FALSE(zrep.witness.empty());
}

TEST_CASE("delta in {0, 1} never counts as nontrivial") {
  VectorDouble vd(1, 5);
  // ordinary derivations: nonzero space, all trivial by definition
  TrivialityReport ones = classify(vd.j, Scalar::one(F5), std::nullopt);
  CHECK(ones.space_dim == 5);
  CHECK(ones.nontrivial_dim == 0);
  CHECK(ones.trivial_dim == ones.space_dim);
  TrivialityReport zeros = classify(vd.j, Scalar::zero(F5), std::uint8_t{0});
  CHECK(zeros.nontrivial_dim == 0);
}

TEST_CASE("supercentroid sits inside the half-superderivation space") {
  std::vector<SuperAlgebra> algebras;
  algebras.push_back(grassmann(2, Q));
  algebras.push_back(b42(F3).algebra);
  algebras.push_back(VectorDouble(1, 3).j);
  for (const auto& a : algebras) {
    Scalar h = half(a.field);
    for (std::uint8_t parity : {0, 1}) {
      GradedSubspace sc = supercentroid(a, parity);
      GradedSubspace hs = delta_superderivations(a, h, parity);
      auto cmp = subspace_compare(sc.basis, hs.basis);
      CHECK((cmp.relation == SubspaceRelation::FirstInsideSecond ||
             cmp.relation == SubspaceRelation::Equal));
    }
  }
}

TEST_CASE("Cheng-Kac centroid is one-dimensional") {
  TruncatedPoly z = truncated_poly(1, 5);
  SuperAlgebra ck = cheng_kac(z.algebra, partial_derivative(z, 0));
  GradedSubspace c = centroid(ck);
  CHECK(c.dim() == 1);
  // the centroid contains the identity map, so it is exactly F id
  CHECK(c.basis.contains(flatten_map(ck, std::nullopt, Matrix::identity(ck.field, ck.dim))));
}

TEST_CASE("J(B(2), d/da1) over F3: solver facts") {
  VectorDouble vd(2, 3);
  const SuperAlgebra& j = vd.j;
  CHECK(j.dim == 18);
  Scalar h = half(F3);

  GradedSubspace even = delta_superderivations(j, h, 0);
  CHECK(even.dim() == 9);  // all R_z, z in B(2)
  CHECK(check_R_space(j, vd.gamma.algebra, vd.bracket));

  // ker(d/da1) on B(2) is the polynomials in a2: the trivial part has dim 3
  TrivialityReport rep = classify(j, h, std::uint8_t{0});
  CHECK(rep.space_dim == 9);
  CHECK(rep.trivial_dim == 3);
  CHECK(rep.nontrivial_dim == 6);
}
