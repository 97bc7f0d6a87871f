#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "superdelta/scalar.hpp"

namespace superdelta {

/// Dense exact matrix, row-major. Immutable by convention after assembly.
struct Matrix {
  FieldDesc field;
  std::size_t rows = 0, cols = 0;
  std::vector<Scalar> a;

  Matrix() : field(FieldDesc::rationals()) {}
  Matrix(FieldDesc f, std::size_t r, std::size_t c)
      : field(f), rows(r), cols(c), a(r * c, Scalar::zero(f)) {}

  static Matrix identity(const FieldDesc& f, std::size_t n);

  Scalar& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const Scalar& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

  bool is_zero() const;
  bool operator==(const Matrix& o) const;
};

Matrix matmul(const Matrix& x, const Matrix& y);
std::vector<Scalar> matvec(const Matrix& m, const std::vector<Scalar>& v);
Matrix mat_add(const Matrix& x, const Matrix& y);
Matrix mat_scale(const Scalar& c, const Matrix& x);

/// Basis of a subspace of F^ambient_dim, rows in reduced row-echelon form.
struct SubspaceBasis {
  FieldDesc field;
  std::size_t ambient_dim = 0;
  std::vector<std::vector<Scalar>> vectors;

  SubspaceBasis() : field(FieldDesc::rationals()) {}
  SubspaceBasis(FieldDesc f, std::size_t n) : field(f), ambient_dim(n) {}
  std::size_t dim() const { return vectors.size(); }
  bool contains(const std::vector<Scalar>& v) const;
  bool operator==(const SubspaceBasis& o) const;
};

using SparseRow = std::vector<std::pair<std::uint32_t, Scalar>>;

/// Streaming reduced-echelon accumulator. Rows are fed one at a time and
/// the maintained echelon stays fully reduced, so feeding n^3 equation rows
/// never materialises the whole system.
class RowEchelon {
 public:
  RowEchelon(const FieldDesc& f, std::size_t cols);
  RowEchelon(const RowEchelon&) = delete;
  RowEchelon(RowEchelon&&) noexcept;
  ~RowEchelon();

  /// Reduces the row against the echelon and inserts the residual if it is
  /// nonzero. Returns true when the rank grew.
  bool add_row(const std::vector<Scalar>& dense);
  bool add_row(const SparseRow& sparse);

  std::size_t rank() const;
  std::size_t cols() const;
  std::vector<std::uint32_t> pivots() const;  // sorted pivot columns

  /// Residual of v after elimination against the echelon (zero iff v lies
  /// in the row space).
  std::vector<Scalar> reduce(const std::vector<Scalar>& v) const;

  SubspaceBasis row_space() const;  // RREF rows, sorted by pivot
  SubspaceBasis kernel() const;     // RREF basis of the right kernel

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Reduced row-echelon form, same shape as the input (zero rows trail).
std::pair<Matrix, std::vector<std::uint32_t>> rref(const Matrix& m);

/// RREF basis of {v : Mv = 0}.
SubspaceBasis kernel(const Matrix& m);

enum class SubspaceRelation { Equal, FirstInsideSecond, SecondInsideFirst, Incomparable };

struct SubspaceCompareResult {
  SubspaceRelation relation;
  std::size_t sum_dim = 0;
  std::size_t intersection_dim = 0;
};

SubspaceCompareResult subspace_compare(const SubspaceBasis& b1, const SubspaceBasis& b2);

/// Smallest subspace containing the seeds and invariant under every
/// operator (MeatAxe-style spinning).
SubspaceBasis spin(const FieldDesc& field, std::size_t dim,
                   const std::vector<std::vector<Scalar>>& seeds,
                   const std::vector<Matrix>& operators);

/// Basis of the unital associative matrix algebra generated by the given
/// n x n matrices, as flattened n^2-vectors.
SubspaceBasis operator_closure(const FieldDesc& field, std::size_t n,
                               const std::vector<Matrix>& generators);

std::vector<Scalar> flatten_matrix(const Matrix& m);
Matrix unflatten_matrix(const FieldDesc& f, std::size_t rows, std::size_t cols,
                        const std::vector<Scalar>& v);

}  // namespace superdelta
