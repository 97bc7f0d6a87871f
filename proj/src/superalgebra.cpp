#include "superdelta/superalgebra.hpp"

#include <algorithm>
#include <stdexcept>

namespace superdelta {

namespace {

void canonicalize_terms(SuperAlgebra::Terms& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SuperAlgebra::Terms out;
  for (auto& [k, c] : terms) {
    if (!out.empty() && out.back().first == k) {
      out.back().second += c;
    } else {
      out.emplace_back(k, c);
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& t) { return t.second.is_zero(); }),
            out.end());
  terms = std::move(out);
}

}  // namespace

void SuperAlgebra::set_product(std::uint32_t i, std::uint32_t j, Terms terms) {
  if (i >= dim || j >= dim) throw std::invalid_argument("set_product: index out of range");
  canonicalize_terms(terms);
  for (const auto& [k, c] : terms) {
    if (k >= dim) throw std::invalid_argument("set_product: target index out of range");
    if (!(c.field() == field)) throw std::invalid_argument("set_product: scalar field mismatch");
    if (parity[k] != ((parity[i] + parity[j]) & 1)) {
      throw std::invalid_argument("grading violation at product (" +
                                  basis_name(i) + ", " + basis_name(j) +
                                  ") -> " + basis_name(k));
    }
  }
  auto key = std::make_pair(i, j);
  if (terms.empty()) {
    table.erase(key);
  } else {
    table[key] = std::move(terms);
  }
}

const SuperAlgebra::Terms* SuperAlgebra::product_terms(std::uint32_t i,
                                                       std::uint32_t j) const {
  auto it = table.find({i, j});
  return it == table.end() ? nullptr : &it->second;
}

std::string SuperAlgebra::basis_name(std::uint32_t i) const {
  if (i < names.size() && !names[i].empty()) return names[i];
  return "e" + std::to_string(i);
}

std::size_t SuperAlgebra::even_dim() const {
  std::size_t d = 0;
  for (auto p : parity)
    if (p == 0) ++d;
  return d;
}

std::size_t SuperAlgebra::odd_dim() const { return dim - even_dim(); }

Element Element::zero(const SuperAlgebra& a) {
  return Element{&a, std::vector<Scalar>(a.dim, Scalar::zero(a.field))};
}

Element Element::basis(const SuperAlgebra& a, std::uint32_t i) {
  Element e = zero(a);
  e.coords.at(i) = Scalar::one(a.field);
  return e;
}

bool Element::is_zero() const {
  for (const auto& c : coords)
    if (!c.is_zero()) return false;
  return true;
}

std::optional<std::uint8_t> Element::homogeneous_parity() const {
  std::optional<std::uint8_t> p;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].is_zero()) continue;
    std::uint8_t q = alg->parity[i];
    if (p && *p != q) return std::nullopt;
    p = q;
  }
  return p ? p : std::optional<std::uint8_t>{0};
}

std::string Element::str() const {
  std::string out;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += coords[i].str() + "*" + alg->basis_name(static_cast<std::uint32_t>(i));
  }
  return out.empty() ? "0" : out;
}

namespace {
void require_same_algebra(const Element& u, const Element& v) {
  if (u.alg != v.alg) throw std::invalid_argument("algebra mismatch between elements");
}
}  // namespace

Element Element::operator+(const Element& o) const {
  require_same_algebra(*this, o);
  Element out = *this;
  for (std::size_t i = 0; i < coords.size(); ++i) out.coords[i] += o.coords[i];
  return out;
}

Element Element::operator-(const Element& o) const {
  require_same_algebra(*this, o);
  Element out = *this;
  for (std::size_t i = 0; i < coords.size(); ++i) out.coords[i] -= o.coords[i];
  return out;
}

Element Element::operator-() const {
  Element out = *this;
  for (auto& c : out.coords) c = -c;
  return out;
}

Element Element::scaled(const Scalar& c) const {
  Element out = *this;
  for (auto& x : out.coords) x = c * x;
  return out;
}

bool Element::operator==(const Element& o) const {
  return alg == o.alg && coords == o.coords;
}

Element multiply(const SuperAlgebra& a, const Element& u, const Element& v) {
  if (u.alg != &a || v.alg != &a) throw std::invalid_argument("algebra mismatch");
  Element out = Element::zero(a);
  for (const auto& [key, terms] : a.table) {
    const Scalar& ui = u.coords[key.first];
    if (ui.is_zero()) continue;
    const Scalar& vj = v.coords[key.second];
    if (vj.is_zero()) continue;
    Scalar c = ui * vj;
    for (const auto& [k, sc] : terms) out.coords[k] += c * sc;
  }
  return out;
}

LinearMap LinearMap::homogeneous(const SuperAlgebra& a, std::uint8_t parity, Matrix m) {
  if (m.rows != a.dim || m.cols != a.dim || !(m.field == a.field))
    throw std::invalid_argument("LinearMap: matrix shape/field mismatch");
  for (std::size_t r = 0; r < a.dim; ++r) {
    for (std::size_t c = 0; c < a.dim; ++c) {
      if (!m.at(r, c).is_zero() &&
          a.parity[r] != ((a.parity[c] + parity) & 1)) {
        throw std::invalid_argument("LinearMap: entry (" + std::to_string(r) +
                                    "," + std::to_string(c) +
                                    ") violates homogeneity");
      }
    }
  }
  return LinearMap{&a, parity, std::move(m)};
}

LinearMap LinearMap::ungraded(const SuperAlgebra& a, Matrix m) {
  if (m.rows != a.dim || m.cols != a.dim || !(m.field == a.field))
    throw std::invalid_argument("LinearMap: matrix shape/field mismatch");
  return LinearMap{&a, std::nullopt, std::move(m)};
}

LinearMap LinearMap::identity(const SuperAlgebra& a) {
  return LinearMap{&a, 0, Matrix::identity(a.field, a.dim)};
}

Element LinearMap::apply(const Element& x) const {
  if (x.alg != alg) throw std::invalid_argument("algebra mismatch");
  return Element{alg, matvec(mat, x.coords)};
}

Element LinearMap::apply_basis(std::uint32_t i) const {
  Element out = Element::zero(*alg);
  for (std::size_t r = 0; r < alg->dim; ++r) out.coords[r] = mat.at(r, i);
  return out;
}

void Bracket::set_bracket(std::uint32_t i, std::uint32_t j, SuperAlgebra::Terms terms) {
  if (i >= gamma->dim || j >= gamma->dim)
    throw std::invalid_argument("set_bracket: index out of range");
  canonicalize_terms(terms);
  auto key = std::make_pair(i, j);
  if (terms.empty()) {
    table.erase(key);
  } else {
    table[key] = std::move(terms);
  }
}

const SuperAlgebra::Terms* Bracket::terms(std::uint32_t i, std::uint32_t j) const {
  auto it = table.find({i, j});
  return it == table.end() ? nullptr : &it->second;
}

Element Bracket::eval_basis(std::uint32_t i, std::uint32_t j) const {
  Element out = Element::zero(*gamma);
  if (const auto* t = terms(i, j)) {
    for (const auto& [k, c] : *t) out.coords[k] += c;
  }
  return out;
}

Element Bracket::eval(const Element& u, const Element& v) const {
  if (u.alg != gamma || v.alg != gamma)
    throw std::invalid_argument("bracket: algebra mismatch");
  Element out = Element::zero(*gamma);
  for (const auto& [key, t] : table) {
    const Scalar& ui = u.coords[key.first];
    if (ui.is_zero()) continue;
    const Scalar& vj = v.coords[key.second];
    if (vj.is_zero()) continue;
    Scalar c = ui * vj;
    for (const auto& [k, sc] : t) out.coords[k] += c * sc;
  }
  return out;
}

bool Bracket::is_super_skew(std::string* witness) const {
  const SuperAlgebra& g = *gamma;
  for (std::uint32_t i = 0; i < g.dim; ++i) {
    for (std::uint32_t j = 0; j < g.dim; ++j) {
      Element lhs = eval_basis(i, j);
      // bracket grading: {G_i, G_j} inside G_{i+j}
      for (std::size_t k = 0; k < g.dim; ++k) {
        if (!lhs.coords[k].is_zero() &&
            g.parity[k] != ((g.parity[i] + g.parity[j]) & 1)) {
          if (witness)
            *witness = "bracket grading fails at {" + g.basis_name(i) + ", " +
                       g.basis_name(j) + "}";
          return false;
        }
      }
      Element rhs = eval_basis(j, i);
      bool flip = (g.parity[i] & g.parity[j]) == 0;
      Element expect = flip ? -rhs : rhs;
      if (!(lhs == expect)) {
        if (witness)
          *witness = "super-skew fails at {" + g.basis_name(i) + ", " +
                     g.basis_name(j) + "}: got " + lhs.str() + ", expected " +
                     expect.str();
        return false;
      }
    }
  }
  return true;
}

Derivation Derivation::checked(const SuperAlgebra& a, Matrix m) {
  LinearMap map = LinearMap::homogeneous(a, 0, std::move(m));
  for (std::uint32_t i = 0; i < a.dim; ++i) {
    Element di = map.apply_basis(i);
    for (std::uint32_t j = 0; j < a.dim; ++j) {
      Element lhs = map.apply(multiply(a, Element::basis(a, i), Element::basis(a, j)));
      Element rhs = multiply(a, di, Element::basis(a, j)) +
                    multiply(a, Element::basis(a, i), map.apply_basis(j));
      if (!(lhs == rhs)) {
        throw std::invalid_argument("Leibniz rule fails at (" + a.basis_name(i) +
                                    ", " + a.basis_name(j) + ")");
      }
    }
  }
  return Derivation{std::move(map)};
}

Superinvolution Superinvolution::checked(const SuperAlgebra& a, Matrix m) {
  LinearMap map = LinearMap::homogeneous(a, 0, std::move(m));
  for (std::uint32_t i = 0; i < a.dim; ++i) {
    Element twice = map.apply(map.apply_basis(i));
    if (!(twice == Element::basis(a, i)))
      throw std::invalid_argument("superinvolution is not involutive at " + a.basis_name(i));
  }
  for (std::uint32_t i = 0; i < a.dim; ++i) {
    for (std::uint32_t j = 0; j < a.dim; ++j) {
      Element lhs = map.apply(multiply(a, Element::basis(a, i), Element::basis(a, j)));
      Element rhs = multiply(a, map.apply_basis(j), map.apply_basis(i));
      if (a.parity[i] && a.parity[j]) rhs = -rhs;
      if (!(lhs == rhs)) {
        throw std::invalid_argument("superinvolution antihomomorphism fails at (" +
                                    a.basis_name(i) + ", " + a.basis_name(j) + ")");
      }
    }
  }
  return Superinvolution{std::move(map)};
}

bool check_supercommutative(const SuperAlgebra& a) {
  for (std::uint32_t i = 0; i < a.dim; ++i) {
    for (std::uint32_t j = i; j < a.dim; ++j) {
      Element ij = Element::zero(a);
      if (const auto* t = a.product_terms(i, j))
        for (const auto& [k, c] : *t) ij.coords[k] += c;
      Element ji = Element::zero(a);
      if (const auto* t = a.product_terms(j, i))
        for (const auto& [k, c] : *t) ji.coords[k] += c;
      bool flip = (a.parity[i] & a.parity[j]) == 0;
      if (!(ij == (flip ? ji : -ji))) return false;
    }
  }
  return true;
}

std::optional<Element> find_unit(const SuperAlgebra& a) {
  // solve u*e_j = e_j and e_j*u = e_j as a linear system in u's coordinates,
  // with an augmented right-hand-side column
  const std::size_t n = a.dim;
  RowEchelon ech(a.field, n + 1);
  auto feed = [&](bool left) {
    for (std::uint32_t j = 0; j < n; ++j) {
      // coordinate k of (u*e_j) or (e_j*u)
      std::vector<SparseRow> rows(n);
      for (std::uint32_t i = 0; i < n; ++i) {
        const auto* t = left ? a.product_terms(i, j) : a.product_terms(j, i);
        if (!t) continue;
        for (const auto& [k, c] : *t) rows[k].emplace_back(i, c);
      }
      for (std::uint32_t k = 0; k < n; ++k) {
        auto& row = rows[k];
        std::sort(row.begin(), row.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        if (k == j) row.emplace_back(static_cast<std::uint32_t>(n), -Scalar::one(a.field));
        if (!row.empty()) ech.add_row(row);
      }
    }
  };
  feed(true);
  feed(false);
  // inconsistent iff the RHS column became a pivot
  for (auto p : ech.pivots())
    if (p == n) return std::nullopt;
  SubspaceBasis rs = ech.row_space();
  Element u = Element::zero(a);
  for (const auto& row : rs.vectors) {
    std::size_t pivot = 0;
    while (pivot <= n && row[pivot].is_zero()) ++pivot;
    if (pivot < n) u.coords[pivot] = -row[n];  // free variables set to zero
  }
  // the unit is unique when it exists; re-verify to be safe
  for (std::uint32_t j = 0; j < n; ++j) {
    Element ej = Element::basis(a, j);
    if (!(multiply(a, u, ej) == ej) || !(multiply(a, ej, u) == ej))
      return std::nullopt;
  }
  return u;
}

SuperAlgebra tensor_super(const SuperAlgebra& a, const SuperAlgebra& b) {
  if (!(a.field == b.field)) throw std::invalid_argument("tensor_super: field mismatch");
  SuperAlgebra t(a.field, a.dim * b.dim);
  auto index = [&](std::uint32_t i, std::uint32_t j) {
    return i * static_cast<std::uint32_t>(b.dim) + j;
  };
  t.names.resize(t.dim);
  for (std::uint32_t i = 0; i < a.dim; ++i) {
    for (std::uint32_t j = 0; j < b.dim; ++j) {
      t.parity[index(i, j)] = (a.parity[i] + b.parity[j]) & 1;
      std::string na = a.basis_name(i), nb = b.basis_name(j);
      t.names[index(i, j)] = na == "1" ? nb : (nb == "1" ? na : na + " " + nb);
    }
  }
  for (const auto& [ka, ta] : a.table) {
    for (const auto& [kb, tb] : b.table) {
      auto [i1, i2] = ka;
      auto [j1, j2] = kb;
      // (a x b)(c x d) = (-1)^{p(b)p(c)} ac x bd
      bool negate = (b.parity[j1] & a.parity[i2]) != 0;
      SuperAlgebra::Terms terms;
      for (const auto& [k1, c1] : ta) {
        for (const auto& [k2, c2] : tb) {
          Scalar c = c1 * c2;
          if (negate) c = -c;
          terms.emplace_back(index(k1, k2), c);
        }
      }
      t.set_product(index(i1, j1), index(i2, j2), std::move(terms));
    }
  }
  return t;
}

SuperAlgebra plus(const SuperAlgebra& a) {
  SuperAlgebra p(a.field, a.dim);
  p.parity = a.parity;
  p.names = a.names;
  Scalar h = half(a.field);
  for (std::uint32_t i = 0; i < a.dim; ++i) {
    for (std::uint32_t j = 0; j < a.dim; ++j) {
      SuperAlgebra::Terms terms;
      if (const auto* t = a.product_terms(i, j)) {
        for (const auto& [k, c] : *t) terms.emplace_back(k, h * c);
      }
      if (const auto* t = a.product_terms(j, i)) {
        bool negate = (a.parity[i] & a.parity[j]) != 0;
        for (const auto& [k, c] : *t)
          terms.emplace_back(k, negate ? -(h * c) : h * c);
      }
      p.set_product(i, j, std::move(terms));
    }
  }
  return p;
}

namespace {

int grassmann_merge_sign(std::uint32_t g, std::uint32_t h) {
  // (-1)^{#inversions} for interleaving two ascending generator sets
  int inv = 0;
  for (std::uint32_t bh = h; bh; bh &= bh - 1) {
    std::uint32_t bit = bh & ~(bh - 1);
    inv += __builtin_popcount(g & ~(bit - 1) & ~bit);
  }
  return (inv & 1) ? -1 : 1;
}

}  // namespace

SuperAlgebra envelope(const SuperAlgebra& a, std::size_t n) {
  if (n > 20) throw std::invalid_argument("envelope: generator count too large");
  // basis (mask, i) with |mask| = parity(e_i) mod 2
  std::vector<std::pair<std::uint32_t, std::uint32_t>> basis;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> idx;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::uint8_t pm = __builtin_popcount(mask) & 1;
    for (std::uint32_t i = 0; i < a.dim; ++i) {
      if (a.parity[i] != pm) continue;
      idx[{mask, i}] = static_cast<std::uint32_t>(basis.size());
      basis.emplace_back(mask, i);
    }
  }
  SuperAlgebra env(a.field, basis.size());
  env.names.resize(env.dim);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    auto [mask, i] = basis[b];
    std::string gname;
    for (std::size_t t = 0; t < n; ++t)
      if (mask & (1u << t)) gname += "g" + std::to_string(t + 1);
    if (gname.empty()) gname = "1";
    std::string an = a.basis_name(i);
    env.names[b] = gname == "1" ? an : (an == "1" ? gname : gname + " " + an);
  }
  for (std::size_t b1 = 0; b1 < basis.size(); ++b1) {
    auto [g, i] = basis[b1];
    for (std::size_t b2 = 0; b2 < basis.size(); ++b2) {
      auto [h, j] = basis[b2];
      if (g & h) continue;
      const auto* t = a.product_terms(i, j);
      if (!t) continue;
      int sign = grassmann_merge_sign(g, h);
      // Koszul: moving e_i past h costs (-1)^{p(e_i)|h|}
      if (a.parity[i] && (__builtin_popcount(h) & 1)) sign = -sign;
      SuperAlgebra::Terms terms;
      for (const auto& [k, c] : *t) {
        terms.emplace_back(idx.at({g | h, k}), sign < 0 ? -c : c);
      }
      env.set_product(static_cast<std::uint32_t>(b1),
                      static_cast<std::uint32_t>(b2), std::move(terms));
    }
  }
  return env;
}

LinearMap left_mult(const SuperAlgebra& a, const Element& z) {
  if (z.alg != &a) throw std::invalid_argument("algebra mismatch");
  auto pz = z.homogeneous_parity();
  if (!pz) throw std::invalid_argument("left_mult requires a homogeneous element");
  Matrix m(a.field, a.dim, a.dim);
  for (std::uint32_t j = 0; j < a.dim; ++j) {
    Element img = multiply(a, z, Element::basis(a, j));
    for (std::size_t r = 0; r < a.dim; ++r) m.at(r, j) = img.coords[r];
  }
  return LinearMap::homogeneous(a, *pz, std::move(m));
}

}  // namespace superdelta
