#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "superdelta/linalg.hpp"

using namespace superdelta;

namespace {

Matrix make(const FieldDesc& f, std::size_t r, std::size_t c,
            std::initializer_list<long long> vals) {
  Matrix m(f, r, c);
  std::size_t i = 0;
  for (long long v : vals) m.a[i++] = Scalar::from_int(f, v);
  return m;
}

Matrix random_matrix(std::mt19937_64& rng, const FieldDesc& f, std::size_t r,
                     std::size_t c) {
  Matrix m(f, r, c);
  for (auto& e : m.a) {
    long long v = static_cast<long long>(rng() % 11) - 5;
    e = Scalar::from_int(f, v);
  }
  return m;
}

}  // namespace

TEST_CASE("rref on simple inputs") {
  auto Q = FieldDesc::rationals();
  auto F3 = FieldDesc::prime_field(3);

  auto [r1, p1] = rref(Matrix::identity(Q, 3));
  CHECK(r1 == Matrix::identity(Q, 3));
  CHECK(p1 == std::vector<std::uint32_t>{0, 1, 2});

  auto [r2, p2] = rref(make(Q, 2, 2, {1, 2, 2, 4}));
  CHECK(r2 == make(Q, 2, 2, {1, 2, 0, 0}));
  CHECK(p2 == std::vector<std::uint32_t>{0});

  // [[1,1],[1,2]] over F3 reduces to the identity (hand elimination)
  auto [r3, p3] = rref(make(F3, 2, 2, {1, 1, 1, 2}));
  CHECK(r3 == Matrix::identity(F3, 2));
  CHECK(p3 == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("kernel basics") {
  auto Q = FieldDesc::rationals();
  CHECK(kernel(Matrix(Q, 2, 2)).dim() == 2);        // zero matrix
  CHECK(kernel(Matrix::identity(Q, 4)).dim() == 0);  // identity

  Matrix m = make(Q, 1, 3, {1, 2, 3});
  SubspaceBasis k = kernel(m);
  CHECK(k.dim() == 2);  // rank-nullity: 3 - 1
  for (const auto& v : k.vectors) {
    auto mv = matvec(m, v);
    for (const auto& s : mv) CHECK(s.is_zero());
  }
}

TEST_CASE("kernel exactness and rank-nullity on random matrices") {
  std::mt19937_64 rng(7);
  for (const auto& f : {FieldDesc::rationals(), FieldDesc::prime_field(5)}) {
    for (int it = 0; it < 40; ++it) {
      std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
      Matrix m = random_matrix(rng, f, r, c);
      auto [rr, piv] = rref(m);
      SubspaceBasis k = kernel(m);
      CHECK(piv.size() + k.dim() == c);
      for (const auto& v : k.vectors) {
        for (const auto& s : matvec(m, v)) CHECK(s.is_zero());
      }
      // row space is preserved: every original row reduces to zero
      RowEchelon ech(f, c);
      for (std::size_t i = 0; i < rr.rows; ++i) {
        std::vector<Scalar> row(rr.a.begin() + i * c, rr.a.begin() + (i + 1) * c);
        ech.add_row(row);
      }
      for (std::size_t i = 0; i < r; ++i) {
        std::vector<Scalar> row(m.a.begin() + i * c, m.a.begin() + (i + 1) * c);
        for (const auto& s : ech.reduce(row)) CHECK(s.is_zero());
      }
    }
  }
}

TEST_CASE("subspace_compare") {
  auto Q = FieldDesc::rationals();
  SubspaceBasis b(Q, 3);
  b.vectors = {{Scalar::one(Q), Scalar::zero(Q), Scalar::zero(Q)}};

  auto self = subspace_compare(b, b);
  CHECK(self.relation == SubspaceRelation::Equal);

  SubspaceBasis zero(Q, 3);
  CHECK(subspace_compare(zero, b).relation == SubspaceRelation::FirstInsideSecond);
  CHECK(subspace_compare(b, zero).relation == SubspaceRelation::SecondInsideFirst);

  // span{e1} vs span{e1+e2} in dimension 3
  SubspaceBasis b2(Q, 3);
  b2.vectors = {{Scalar::one(Q), Scalar::one(Q), Scalar::zero(Q)}};
  auto r = subspace_compare(b, b2);
  CHECK(r.relation == SubspaceRelation::Incomparable);
  CHECK(r.sum_dim == 2);
  CHECK(r.intersection_dim == 0);

  SubspaceBasis other(Q, 4);
  CHECK_THROWS(subspace_compare(b, other));
}

TEST_CASE("spin") {
  auto Q = FieldDesc::rationals();
  std::vector<Scalar> e1 = {Scalar::one(Q), Scalar::zero(Q), Scalar::zero(Q)};

  CHECK(spin(Q, 3, {e1}, {Matrix::identity(Q, 3)}).dim() == 1);
  CHECK(spin(Q, 3, {}, {Matrix::identity(Q, 3)}).dim() == 0);

  // cyclic shift spins e1 to the whole space
  Matrix shift(Q, 3, 3);
  shift.at(1, 0) = Scalar::one(Q);
  shift.at(2, 1) = Scalar::one(Q);
  shift.at(0, 2) = Scalar::one(Q);
  SubspaceBasis full = spin(Q, 3, {e1}, {shift});
  CHECK(full.dim() == 3);

  // operator-invariance of the result
  for (const auto& v : full.vectors) CHECK(full.contains(matvec(shift, v)));
}

TEST_CASE("operator_closure") {
  auto Q = FieldDesc::rationals();
  CHECK(operator_closure(Q, 2, {Matrix::identity(Q, 2)}).dim() == 1);

  Matrix diag = make(Q, 2, 2, {1, 0, 0, 2});
  CHECK(operator_closure(Q, 2, {diag}).dim() == 2);  // identity + diag span

  Matrix e12 = make(Q, 2, 2, {0, 1, 0, 0});
  Matrix e21 = make(Q, 2, 2, {0, 0, 1, 0});
  SubspaceBasis full = operator_closure(Q, 2, {e12, e21});
  CHECK(full.dim() == 4);

  // product-closedness of the closure
  for (const auto& u : full.vectors) {
    for (const auto& v : full.vectors) {
      Matrix mu = unflatten_matrix(Q, 2, 2, u);
      Matrix mv = unflatten_matrix(Q, 2, 2, v);
      CHECK(full.contains(flatten_matrix(matmul(mu, mv))));
    }
  }
}

TEST_CASE("streamed rows match batch rref") {
  std::mt19937_64 rng(3);
  auto F5 = FieldDesc::prime_field(5);
  Matrix m = random_matrix(rng, F5, 30, 8);
  auto [rr, piv] = rref(m);
  RowEchelon ech(F5, 8);
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::vector<Scalar> row(m.a.begin() + i * 8, m.a.begin() + (i + 1) * 8);
    ech.add_row(row);
  }
  CHECK(ech.rank() == piv.size());
  SubspaceBasis rs = ech.row_space();
  for (std::size_t i = 0; i < rs.dim(); ++i)
    for (std::size_t c = 0; c < 8; ++c) CHECK(rs.vectors[i][c] == rr.at(i, c));
}
