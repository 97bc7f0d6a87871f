#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "jordan_oracle.hpp"
#include "superdelta/constructions.hpp"
#include "superdelta/freesuperpoly.hpp"
#include "superdelta/superalgebra.hpp"

using namespace superdelta;

namespace {

const FieldDesc Q = FieldDesc::rationals();

// 2x2 matrix units as an all-even algebra
SuperAlgebra full_matrix_2x2(const FieldDesc& f) {
  SuperAlgebra m(f, 4);
  m.names = {"E11", "E12", "E21", "E22"};
  auto idx = [](int i, int j) { return static_cast<std::uint32_t>(2 * i + j); };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          if (j == k) m.set_product(idx(i, j), idx(k, l), {{idx(i, l), Scalar::one(f)}});
  return m;
}

}  // namespace

TEST_CASE("free supercommutative monomials") {
  auto t1 = mono_variable(make_variable_id(0, 0));
  auto t2 = mono_variable(make_variable_id(1, 0));
  auto s1 = mono_variable(make_variable_id(2, 1));
  auto s2 = mono_variable(make_variable_id(3, 1));

  CHECK(mono_degree(kMonoOne) == 0);
  CHECK(mono_degree(t1) == 1);

  auto [tt, st] = mono_mul(t1, t2);
  auto [tt2, st2] = mono_mul(t2, t1);
  CHECK(tt == tt2);  // even variables commute
  CHECK(st == st2);

  auto [ss, s12] = mono_mul(s1, s2);
  auto [ss2, s21] = mono_mul(s2, s1);
  CHECK(ss == ss2);
  CHECK(s12 == -s21);  // odd variables anticommute

  CHECK(mono_mul(s1, s1).second == 0);  // odd square
  auto [q, sq] = mono_mul(t1, t1);
  CHECK(sq == 1);
  CHECK(mono_degree(q) == 2);

  auto deg2 = mono_mul(t1, t2).first;
  auto deg4 = mono_mul(deg2, mono_mul(s1, s2).first).first;
  CHECK(mono_degree(deg4) == 4);
  CHECK_THROWS(mono_mul(deg4, t1));  // degree bound is 4
}

TEST_CASE("Grassmann multiplication and supercommutativity") {
  SuperAlgebra g2 = grassmann(2, Q);
  Element xi1 = Element::basis(g2, 1), xi2 = Element::basis(g2, 2);
  Element x12 = multiply(g2, xi1, xi2);
  CHECK(x12 == Element::basis(g2, 3));
  CHECK(multiply(g2, xi2, xi1) == -x12);

  CHECK(check_supercommutative(grassmann(3, Q)));
  CHECK_FALSE(check_supercommutative(full_matrix_2x2(Q)));
}

TEST_CASE("find_unit") {
  SuperAlgebra g = grassmann(2, Q);
  auto u = find_unit(g);
  REQUIRE(u.has_value());
  CHECK(*u == Element::basis(g, 0));
  Element any = Element::basis(g, 3);
  CHECK(multiply(g, *u, any) == any);

  SuperAlgebra zero_mult(Q, 2);
  CHECK_FALSE(find_unit(zero_mult).has_value());
}

TEST_CASE("tensor product with Koszul signs") {
  auto F3 = FieldDesc::prime_field(3);
  // A (x) 1-dim unital algebra is A again up to relabeling
  SuperAlgebra one(Q, 1);
  one.names = {"1"};
  one.set_product(0, 0, {{0, Scalar::one(Q)}});
  SuperAlgebra g2 = grassmann(2, Q);
  SuperAlgebra t = tensor_super(g2, one);
  REQUIRE(t.dim == g2.dim);
  for (std::uint32_t i = 0; i < t.dim; ++i)
    for (std::uint32_t j = 0; j < t.dim; ++j) {
      const auto* a = g2.product_terms(i, j);
      const auto* b = t.product_terms(i, j);
      CHECK((a == nullptr) == (b == nullptr));
      if (a && b) CHECK(*a == *b);
    }

  // B(1) (x) G(1) over F3: dim 6, and (a x xi)^2 = 0 by the Koszul sign
  SuperAlgebra b1 = truncated_poly(1, 3).algebra;
  SuperAlgebra g1 = grassmann(1, FieldDesc::prime_field(3));
  SuperAlgebra bg = tensor_super(b1, g1);
  CHECK(bg.dim == 6);
  // basis order: index = i * dim(G) + j; a x xi has i=1, j=1
  Element axi = Element::basis(bg, 1 * 2 + 1);
  CHECK(multiply(bg, axi, axi).is_zero());

  // G(1) (x) G(1): (xi x 1)(1 x xi) = -(1 x xi)(xi x 1)
  SuperAlgebra gg = tensor_super(grassmann(1, Q), grassmann(1, Q));
  Element xi_1 = Element::basis(gg, 2);  // (xi, 1)
  Element one_xi = Element::basis(gg, 1);
  CHECK(multiply(gg, xi_1, one_xi) == -multiply(gg, one_xi, xi_1));
}

TEST_CASE("plus construction") {
  SuperAlgebra m = full_matrix_2x2(Q);
  SuperAlgebra p = plus(m);
  // E11 o E12 = 1/2 E12
  Element v = multiply(p, Element::basis(p, 0), Element::basis(p, 1));
  CHECK(v == Element::basis(p, 1).scaled(half(Q)));
  CHECK(check_supercommutative(p));

  // plus of a supercommutative algebra is itself
  SuperAlgebra g = grassmann(2, Q);
  SuperAlgebra pg = plus(g);
  for (std::uint32_t i = 0; i < g.dim; ++i)
    for (std::uint32_t j = 0; j < g.dim; ++j) {
      const auto* a = g.product_terms(i, j);
      const auto* b = pg.product_terms(i, j);
      CHECK((a == nullptr) == (b == nullptr));
      if (a && b) CHECK(*a == *b);
    }
}

TEST_CASE("envelope") {
  SuperAlgebra g1 = grassmann(1, Q);
  SuperAlgebra e0 = envelope(g1, 0);
  CHECK(e0.dim == g1.even_dim());

  SuperAlgebra e1 = envelope(g1, 1);
  CHECK(e1.dim == 2);  // {1 x 1, g1 x xi}
  Element gxi = Element::basis(e1, 1);
  CHECK(multiply(e1, gxi, gxi).is_zero());
  for (auto p : e1.parity) CHECK(p == 0);

  // dim envelope(A, n) = 2^{n-1} (dim A0 + dim A1) for n >= 1
  SuperAlgebra a = grassmann(2, Q);
  for (std::size_t n = 1; n <= 4; ++n) {
    CHECK(envelope(a, n).dim == (std::size_t{1} << (n - 1)) * (a.even_dim() + a.odd_dim()));
  }
}

TEST_CASE("verify_superidentity basics") {
  CHECK(verify_superidentity(grassmann(3, Q), IdentityKind::Associative).ok);
  CHECK(verify_superidentity(grassmann(3, Q), IdentityKind::Jordan).ok);
  CHECK(verify_superidentity(full_matrix_2x2(Q), IdentityKind::Associative).ok);
  CHECK_FALSE(verify_superidentity(full_matrix_2x2(Q), IdentityKind::Jordan).ok);
  CHECK(verify_superidentity(plus(full_matrix_2x2(Q)), IdentityKind::Jordan).ok);

  // e1 e1 = e2, e2 e1 = e3, everything else zero: associativity fails
  SuperAlgebra bad(Q, 3);
  bad.set_product(0, 0, {{1, Scalar::one(Q)}});
  bad.set_product(1, 0, {{2, Scalar::one(Q)}});
  IdentityReport rep = verify_superidentity(bad, IdentityKind::Associative);
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rep.witness.empty());
}

TEST_CASE("left_mult") {
  SuperAlgebra g = grassmann(2, Q);
  LinearMap lu = left_mult(g, *find_unit(g));
  CHECK(lu.mat == Matrix::identity(Q, 4));

  LinearMap lz = left_mult(g, Element::zero(g));
  CHECK(lz.mat.is_zero());

  Element mixed = Element::basis(g, 0) + Element::basis(g, 1);
  CHECK_THROWS(left_mult(g, mixed));

  LinearMap lxi = left_mult(g, Element::basis(g, 1));
  CHECK(lxi.parity == std::uint8_t{1});
  CHECK(lxi.apply(Element::basis(g, 2)) == Element::basis(g, 3));
}

TEST_CASE("grading invariant is enforced at construction") {
  SuperAlgebra a(Q, 2);
  a.parity = {0, 1};
  CHECK_THROWS(a.set_product(0, 0, {{1, Scalar::one(Q)}}));  // even*even -> odd
  CHECK_NOTHROW(a.set_product(0, 1, {{1, Scalar::one(Q)}}));
  CHECK_THROWS(a.set_product(0, 0, {{0, Scalar::one(FieldDesc::prime_field(5))}}));
}

TEST_CASE("plus of random graded algebras is supercommutative") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 24; ++trial) {
    const FieldDesc f = trial % 2 ? FieldDesc::prime_field(5) : Q;
    std::size_t n = 2 + rng() % 4;
    SuperAlgebra a(f, n);
    for (auto& p : a.parity) p = rng() % 2;
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        SuperAlgebra::Terms terms;
        for (std::uint32_t k = 0; k < n; ++k) {
          if (a.parity[k] != ((a.parity[i] + a.parity[j]) & 1)) continue;
          long long c = static_cast<long long>(rng() % 7) - 3;
          if (c != 0) terms.emplace_back(k, Scalar::from_int(f, c));
        }
        a.set_product(i, j, std::move(terms));
      }
    }
    CHECK(check_supercommutative(plus(a)));
  }
}

TEST_CASE("jordan oracle agrees with the generic engine on small algebras") {
  auto F3 = FieldDesc::prime_field(3);
  auto F5 = FieldDesc::prime_field(5);

  std::vector<SuperAlgebra> corpus;
  corpus.push_back(grassmann(1, Q));
  corpus.push_back(grassmann(2, F5));
  corpus.push_back(truncated_poly(1, 3).algebra);
  corpus.push_back(truncated_poly(1, 5).algebra);
  corpus.push_back(full_matrix_2x2(Q));
  corpus.push_back(plus(full_matrix_2x2(F3)));
  corpus.push_back(b12(F3).algebra);
  corpus.push_back(b42(F3).algebra);
  {
    // commutative but not Jordan: e0^2 = e1, e1^2 = e0
    SuperAlgebra c(Q, 2);
    c.set_product(0, 0, {{1, Scalar::one(Q)}});
    c.set_product(1, 1, {{0, Scalar::one(Q)}});
    corpus.push_back(std::move(c));
  }
  {
    SuperAlgebra zero_mult(F5, 3);
    zero_mult.parity = {0, 1, 1};
    corpus.push_back(std::move(zero_mult));
  }
  {
    TruncatedPoly b1 = truncated_poly(1, 3);
    Derivation d = partial_derivative(b1, 0);
    Bracket br = vector_bracket(b1.algebra, d);
    corpus.push_back(kantor_double(b1.algebra, br));  // dim 6
  }

  int jordan_count = 0;
  for (const auto& a : corpus) {
    REQUIRE(a.dim <= 6);
    auto engine = verify_superidentity(a, IdentityKind::Jordan);
    auto oracle = superdelta::testing::brute_force_jordan(a);
    CHECK(engine.ok == oracle.ok);
    if (engine.ok) ++jordan_count;
  }
  CHECK(jordan_count >= 6);  // corpus mixes both outcomes
}
