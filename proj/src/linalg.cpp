#include "superdelta/linalg.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace superdelta {

namespace {

struct RingQ {
  using Elem = mpq_class;
  static Elem zero() { return mpq_class(0); }
  bool is_zero(const Elem& e) const { return e == 0; }
  bool is_one(const Elem& e) const { return e == 1; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem inv(const Elem& a) const { return 1 / a; }
};

struct RingP {
  std::uint64_t p;
  std::uint64_t binv;  // floor((2^64-1)/p), Barrett factor for p < 2^32
  bool small;

  explicit RingP(std::uint64_t p_) : p(p_), binv(~0ull / p_), small(p_ < (1ull << 32)) {}

  using Elem = std::uint64_t;
  static Elem zero() { return 0; }
  bool is_zero(Elem e) const { return e == 0; }
  bool is_one(Elem e) const { return e == 1; }
  Elem mul(Elem a, Elem b) const {
    if (small) {
      std::uint64_t x = a * b;
      std::uint64_t q = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(x) * binv) >> 64);
      std::uint64_t r = x - q * p;
      while (r >= p) r -= p;
      return r;
    }
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p - b; }
  Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
  Elem inv(Elem a) const { return fp::inv(a, p); }
};

// Streaming reduced echelon over one coefficient ring. Rows are sparse,
// sorted by column, pivot first with coefficient 1; every row has zero
// entries at all other pivot columns, so the echelon is always in RREF.
template <class Ring>
class Core {
 public:
  using Elem = typename Ring::Elem;
  using SRow = std::vector<std::pair<std::uint32_t, Elem>>;

  Core(Ring ring, std::size_t ncols)
      : ring_(ring), ncols_(ncols), pivot_row_of_col_(ncols, -1) {}

  std::size_t rank() const { return rows_.size(); }
  std::size_t cols() const { return ncols_; }

  std::vector<std::uint32_t> pivots_sorted() const {
    std::vector<std::uint32_t> out = pivot_col_of_row_;
    std::sort(out.begin(), out.end());
    return out;
  }

  // Eliminates every entry sitting at a pivot column; the residual has
  // support only on pivot-free columns.
  void reduce_inplace(SRow& input) const {
    SRow out;
    out.reserve(input.size());
    SRow cur = std::move(input);
    std::size_t i = 0;
    while (i < cur.size()) {
      std::uint32_t col = cur[i].first;
      std::int32_t pr = pivot_row_of_col_[col];
      if (pr < 0) {
        out.push_back(std::move(cur[i]));
        ++i;
        continue;
      }
      const SRow& src = rows_[pr];
      Elem f = std::move(cur[i].second);
      SRow merged;
      merged.reserve(cur.size() - i + src.size());
      std::size_t a = i + 1, b = 1;  // src[0] is (col, 1) and cancels cur[i]
      while (a < cur.size() || b < src.size()) {
        if (b >= src.size() ||
            (a < cur.size() && cur[a].first < src[b].first)) {
          merged.push_back(std::move(cur[a]));
          ++a;
        } else if (a >= cur.size() || src[b].first < cur[a].first) {
          Elem val = ring_.neg(ring_.mul(f, src[b].second));
          if (!ring_.is_zero(val)) merged.emplace_back(src[b].first, std::move(val));
          ++b;
        } else {
          Elem val = ring_.sub(cur[a].second, ring_.mul(f, src[b].second));
          if (!ring_.is_zero(val)) merged.emplace_back(cur[a].first, std::move(val));
          ++a;
          ++b;
        }
      }
      cur = std::move(merged);
      i = 0;
    }
    input = std::move(out);
  }

  bool add_row(SRow r) {
    reduce_inplace(r);
    if (r.empty()) return false;
    if (!ring_.is_one(r[0].second)) {
      Elem iv = ring_.inv(r[0].second);
      for (auto& e : r) e.second = ring_.mul(e.second, iv);
    }
    std::uint32_t pcol = r[0].first;
    for (auto& row : rows_) {
      auto it = std::lower_bound(
          row.begin(), row.end(), pcol,
          [](const auto& e, std::uint32_t c) { return e.first < c; });
      if (it != row.end() && it->first == pcol) {
        Elem f = it->second;
        row = axpy(row, r, f);
      }
    }
    pivot_row_of_col_[pcol] = static_cast<std::int32_t>(rows_.size());
    pivot_col_of_row_.push_back(pcol);
    rows_.push_back(std::move(r));
    return true;
  }

  // dst - f*src over full rows
  SRow axpy(const SRow& dst, const SRow& src, const Elem& f) const {
    SRow out;
    out.reserve(dst.size() + src.size());
    std::size_t a = 0, b = 0;
    while (a < dst.size() || b < src.size()) {
      if (b >= src.size() || (a < dst.size() && dst[a].first < src[b].first)) {
        out.push_back(dst[a]);
        ++a;
      } else if (a >= dst.size() || src[b].first < dst[a].first) {
        Elem val = ring_.neg(ring_.mul(f, src[b].second));
        if (!ring_.is_zero(val)) out.emplace_back(src[b].first, std::move(val));
        ++b;
      } else {
        Elem val = ring_.sub(dst[a].second, ring_.mul(f, src[b].second));
        if (!ring_.is_zero(val)) out.emplace_back(dst[a].first, std::move(val));
        ++a;
        ++b;
      }
    }
    return out;
  }

  std::vector<SRow> rows_sorted_by_pivot() const {
    std::vector<std::size_t> order(rows_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return pivot_col_of_row_[x] < pivot_col_of_row_[y];
    });
    std::vector<SRow> out;
    out.reserve(order.size());
    for (std::size_t i : order) out.push_back(rows_[i]);
    return out;
  }

  // Standard kernel basis: one vector per pivot-free column.
  std::vector<SRow> kernel_rows() const {
    std::vector<SRow> out;
    for (std::uint32_t f = 0; f < ncols_; ++f) {
      if (pivot_row_of_col_[f] >= 0) continue;
      SRow v;
      for (std::size_t ri = 0; ri < rows_.size(); ++ri) {
        const SRow& row = rows_[ri];
        auto it = std::lower_bound(
            row.begin(), row.end(), f,
            [](const auto& e, std::uint32_t c) { return e.first < c; });
        if (it != row.end() && it->first == f) {
          v.emplace_back(pivot_col_of_row_[ri], ring_.neg(it->second));
        }
      }
      v.emplace_back(f, one_elem());
      std::sort(v.begin(), v.end(),
                [](const auto& x, const auto& y) { return x.first < y.first; });
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  static Elem one_elem() {
    if constexpr (std::is_same_v<Elem, mpq_class>) {
      return mpq_class(1);
    } else {
      return 1;
    }
  }

  Ring ring_;
  std::size_t ncols_;
  std::vector<SRow> rows_;
  std::vector<std::int32_t> pivot_row_of_col_;
  std::vector<std::uint32_t> pivot_col_of_row_;
};

mpq_class to_q(const Scalar& s) { return s.rational(); }
std::uint64_t to_p(const Scalar& s) { return s.residue_value(); }

}  // namespace

Matrix Matrix::identity(const FieldDesc& f, std::size_t n) {
  Matrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& s : a)
    if (!s.is_zero()) return false;
  return true;
}

bool Matrix::operator==(const Matrix& o) const {
  return field == o.field && rows == o.rows && cols == o.cols && a == o.a;
}

Matrix matmul(const Matrix& x, const Matrix& y) {
  if (!(x.field == y.field) || x.cols != y.rows)
    throw std::invalid_argument("matmul: incompatible matrices");
  Matrix z(x.field, x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t k = 0; k < x.cols; ++k) {
      const Scalar& xv = x.at(i, k);
      if (xv.is_zero()) continue;
      for (std::size_t j = 0; j < y.cols; ++j) {
        const Scalar& yv = y.at(k, j);
        if (yv.is_zero()) continue;
        z.at(i, j) += xv * yv;
      }
    }
  }
  return z;
}

std::vector<Scalar> matvec(const Matrix& m, const std::vector<Scalar>& v) {
  if (v.size() != m.cols) throw std::invalid_argument("matvec: size mismatch");
  std::vector<Scalar> out(m.rows, Scalar::zero(m.field));
  for (std::size_t c = 0; c < m.cols; ++c) {
    if (v[c].is_zero()) continue;
    for (std::size_t r = 0; r < m.rows; ++r) {
      const Scalar& mv = m.at(r, c);
      if (!mv.is_zero()) out[r] += mv * v[c];
    }
  }
  return out;
}

Matrix mat_add(const Matrix& x, const Matrix& y) {
  if (!(x.field == y.field) || x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("mat_add: incompatible matrices");
  Matrix z = x;
  for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
  return z;
}

Matrix mat_scale(const Scalar& c, const Matrix& x) {
  Matrix z = x;
  for (auto& e : z.a) e = c * e;
  return z;
}

bool SubspaceBasis::contains(const std::vector<Scalar>& v) const {
  RowEchelon ech(field, ambient_dim);
  for (const auto& row : vectors) ech.add_row(row);
  auto res = ech.reduce(v);
  for (const auto& s : res)
    if (!s.is_zero()) return false;
  return true;
}

bool SubspaceBasis::operator==(const SubspaceBasis& o) const {
  return field == o.field && ambient_dim == o.ambient_dim && vectors == o.vectors;
}

struct RowEchelon::Impl {
  FieldDesc field;
  std::variant<Core<RingQ>, Core<RingP>> core;

  Impl(const FieldDesc& f, std::size_t n)
      : field(f),
        core(f.is_rational()
                 ? std::variant<Core<RingQ>, Core<RingP>>(
                       std::in_place_index<0>, RingQ{}, n)
                 : std::variant<Core<RingQ>, Core<RingP>>(
                       std::in_place_index<1>, RingP{f.p}, n)) {}

  template <class F>
  auto visit(F&& f) {
    return std::visit(std::forward<F>(f), core);
  }
  template <class F>
  auto visit(F&& f) const {
    return std::visit(std::forward<F>(f), core);
  }
};

RowEchelon::RowEchelon(const FieldDesc& f, std::size_t cols)
    : impl_(std::make_unique<Impl>(f, cols)) {}
RowEchelon::RowEchelon(RowEchelon&&) noexcept = default;
RowEchelon::~RowEchelon() = default;

bool RowEchelon::add_row(const std::vector<Scalar>& dense) {
  if (dense.size() != cols())
    throw std::invalid_argument("RowEchelon::add_row: row width mismatch");
  SparseRow sp;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (!dense[i].is_zero()) sp.emplace_back(static_cast<std::uint32_t>(i), dense[i]);
  return add_row(sp);
}

bool RowEchelon::add_row(const SparseRow& sparse) {
  for (const auto& [c, s] : sparse) {
    (void)s;
    if (c >= cols()) throw std::invalid_argument("RowEchelon::add_row: column out of range");
  }
  return impl_->visit([&](auto& core) -> bool {
    using C = std::decay_t<decltype(core)>;
    typename C::SRow r;
    r.reserve(sparse.size());
    if constexpr (std::is_same_v<C, Core<RingQ>>) {
      for (const auto& [c, s] : sparse)
        if (!s.is_zero()) r.emplace_back(c, to_q(s));
    } else {
      for (const auto& [c, s] : sparse)
        if (!s.is_zero()) r.emplace_back(c, to_p(s));
    }
    // canonicalise: sorted by column, duplicates combined, zeros dropped
    std::sort(r.begin(), r.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    typename C::SRow canon;
    canon.reserve(r.size());
    for (auto& e : r) {
      if (!canon.empty() && canon.back().first == e.first) {
        if constexpr (std::is_same_v<C, Core<RingQ>>) {
          canon.back().second += e.second;
        } else {
          canon.back().second = fp::add(canon.back().second, e.second, impl_->field.p);
        }
      } else {
        canon.push_back(std::move(e));
      }
    }
    canon.erase(std::remove_if(canon.begin(), canon.end(),
                               [](const auto& e) { return e.second == 0; }),
                canon.end());
    return core.add_row(std::move(canon));
  });
}

std::size_t RowEchelon::rank() const {
  return impl_->visit([](const auto& c) { return c.rank(); });
}

std::size_t RowEchelon::cols() const {
  return impl_->visit([](const auto& c) { return c.cols(); });
}

std::vector<std::uint32_t> RowEchelon::pivots() const {
  return impl_->visit([](const auto& c) { return c.pivots_sorted(); });
}

std::vector<Scalar> RowEchelon::reduce(const std::vector<Scalar>& v) const {
  if (v.size() != cols())
    throw std::invalid_argument("RowEchelon::reduce: vector width mismatch");
  const FieldDesc f = impl_->field;
  return impl_->visit([&](const auto& core) {
    using C = std::decay_t<decltype(core)>;
    typename C::SRow r;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_zero()) continue;
      if constexpr (std::is_same_v<C, Core<RingQ>>) {
        r.emplace_back(static_cast<std::uint32_t>(i), to_q(v[i]));
      } else {
        r.emplace_back(static_cast<std::uint32_t>(i), to_p(v[i]));
      }
    }
    core.reduce_inplace(r);
    std::vector<Scalar> out(core.cols(), Scalar::zero(f));
    for (const auto& [c, val] : r) {
      if constexpr (std::is_same_v<C, Core<RingQ>>) {
        out[c] = Scalar::from_mpq(val);
      } else {
        out[c] = Scalar::residue(f, val);
      }
    }
    return out;
  });
}

SubspaceBasis RowEchelon::row_space() const {
  const FieldDesc f = impl_->field;
  return impl_->visit([&](const auto& core) {
    using C = std::decay_t<decltype(core)>;
    SubspaceBasis out(f, core.cols());
    for (const auto& row : core.rows_sorted_by_pivot()) {
      std::vector<Scalar> v(core.cols(), Scalar::zero(f));
      for (const auto& [c, val] : row) {
        if constexpr (std::is_same_v<C, Core<RingQ>>) {
          v[c] = Scalar::from_mpq(val);
        } else {
          v[c] = Scalar::residue(f, val);
        }
      }
      out.vectors.push_back(std::move(v));
    }
    return out;
  });
}

SubspaceBasis RowEchelon::kernel() const {
  const FieldDesc f = impl_->field;
  return impl_->visit([&](const auto& core) {
    using C = std::decay_t<decltype(core)>;
    // kernel vectors are independent; RREF-ify for the canonical basis
    C fresh = [&] {
      if constexpr (std::is_same_v<C, Core<RingQ>>) {
        return Core<RingQ>(RingQ{}, core.cols());
      } else {
        return Core<RingP>(RingP{f.p}, core.cols());
      }
    }();
    for (auto& kr : core.kernel_rows()) fresh.add_row(std::move(kr));
    SubspaceBasis out(f, core.cols());
    for (const auto& row : fresh.rows_sorted_by_pivot()) {
      std::vector<Scalar> v(core.cols(), Scalar::zero(f));
      for (const auto& [c, val] : row) {
        if constexpr (std::is_same_v<C, Core<RingQ>>) {
          v[c] = Scalar::from_mpq(val);
        } else {
          v[c] = Scalar::residue(f, val);
        }
      }
      out.vectors.push_back(std::move(v));
    }
    return out;
  });
}

std::pair<Matrix, std::vector<std::uint32_t>> rref(const Matrix& m) {
  RowEchelon ech(m.field, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    std::vector<Scalar> row(m.a.begin() + r * m.cols, m.a.begin() + (r + 1) * m.cols);
    ech.add_row(row);
  }
  SubspaceBasis rs = ech.row_space();
  Matrix out(m.field, m.rows, m.cols);
  for (std::size_t r = 0; r < rs.vectors.size(); ++r)
    for (std::size_t c = 0; c < m.cols; ++c) out.at(r, c) = rs.vectors[r][c];
  return {std::move(out), ech.pivots()};
}

SubspaceBasis kernel(const Matrix& m) {
  RowEchelon ech(m.field, m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    SparseRow row;
    for (std::size_t c = 0; c < m.cols; ++c)
      if (!m.at(r, c).is_zero()) row.emplace_back(static_cast<std::uint32_t>(c), m.at(r, c));
    ech.add_row(row);
  }
  return ech.kernel();
}

SubspaceCompareResult subspace_compare(const SubspaceBasis& b1, const SubspaceBasis& b2) {
  if (b1.ambient_dim != b2.ambient_dim || !(b1.field == b2.field))
    throw std::invalid_argument("subspace_compare: ambient mismatch");
  RowEchelon ech(b1.field, b1.ambient_dim);
  for (const auto& v : b1.vectors) ech.add_row(v);
  for (const auto& v : b2.vectors) ech.add_row(v);
  SubspaceCompareResult res;
  res.sum_dim = ech.rank();
  res.intersection_dim = b1.dim() + b2.dim() - res.sum_dim;
  bool first_in_second = res.sum_dim == b2.dim();
  bool second_in_first = res.sum_dim == b1.dim();
  if (first_in_second && second_in_first)
    res.relation = SubspaceRelation::Equal;
  else if (first_in_second)
    res.relation = SubspaceRelation::FirstInsideSecond;
  else if (second_in_first)
    res.relation = SubspaceRelation::SecondInsideFirst;
  else
    res.relation = SubspaceRelation::Incomparable;
  return res;
}

SubspaceBasis spin(const FieldDesc& field, std::size_t dim,
                   const std::vector<std::vector<Scalar>>& seeds,
                   const std::vector<Matrix>& operators) {
  for (const auto& op : operators)
    if (op.rows != dim || op.cols != dim)
      throw std::invalid_argument("spin: operator dimension mismatch");
  RowEchelon ech(field, dim);
  std::deque<std::vector<Scalar>> queue;
  for (const auto& s : seeds) {
    if (s.size() != dim) throw std::invalid_argument("spin: seed dimension mismatch");
    if (ech.add_row(s)) queue.push_back(s);
  }
  while (!queue.empty()) {
    std::vector<Scalar> v = std::move(queue.front());
    queue.pop_front();
    for (const auto& op : operators) {
      std::vector<Scalar> w = matvec(op, v);
      if (ech.add_row(w)) queue.push_back(std::move(w));
    }
  }
  return ech.row_space();
}

std::vector<Scalar> flatten_matrix(const Matrix& m) { return m.a; }

Matrix unflatten_matrix(const FieldDesc& f, std::size_t rows, std::size_t cols,
                        const std::vector<Scalar>& v) {
  if (v.size() != rows * cols) throw std::invalid_argument("unflatten: size mismatch");
  Matrix m(f, rows, cols);
  m.a = v;
  return m;
}

SubspaceBasis operator_closure(const FieldDesc& field, std::size_t n,
                               const std::vector<Matrix>& generators) {
  for (const auto& g : generators)
    if (g.rows != n || g.cols != n || !(g.field == field))
      throw std::invalid_argument("operator_closure: generator size mismatch");
  RowEchelon ech(field, n * n);
  std::deque<Matrix> queue;
  auto offer = [&](const Matrix& m) {
    if (ech.add_row(flatten_matrix(m))) queue.push_back(m);
  };
  offer(Matrix::identity(field, n));
  for (const auto& g : generators) offer(g);
  while (!queue.empty()) {
    Matrix m = std::move(queue.front());
    queue.pop_front();
    for (const auto& g : generators) {
      offer(matmul(m, g));
      offer(matmul(g, m));
    }
  }
  return ech.row_space();
}

}  // namespace superdelta
