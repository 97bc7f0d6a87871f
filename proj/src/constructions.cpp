#include "superdelta/constructions.hpp"

#include <algorithm>
#include <stdexcept>

namespace superdelta {

namespace {

int subset_merge_sign(std::uint32_t g, std::uint32_t h) {
  int inv = 0;
  for (std::uint32_t bh = h; bh; bh &= bh - 1) {
    std::uint32_t bit = bh & ~(bh - 1);
    inv += __builtin_popcount(g & ~(bit - 1) & ~bit);
  }
  return (inv & 1) ? -1 : 1;
}

std::string grassmann_name(std::uint32_t mask) {
  if (mask == 0) return "1";
  std::string out;
  for (std::uint32_t t = 0; mask >> t; ++t)
    if (mask & (1u << t)) out += "\xce\xbe" + std::to_string(t + 1);  // xi
  return out;
}

}  // namespace

SuperAlgebra grassmann(std::size_t n, const FieldDesc& field) {
  if (n > 20) throw std::invalid_argument("grassmann: generator count too large");
  SuperAlgebra g(field, std::size_t{1} << n);
  g.names.resize(g.dim);
  for (std::uint32_t mask = 0; mask < g.dim; ++mask) {
    g.parity[mask] = __builtin_popcount(mask) & 1;
    g.names[mask] = grassmann_name(mask);
  }
  for (std::uint32_t s = 0; s < g.dim; ++s) {
    for (std::uint32_t t = 0; t < g.dim; ++t) {
      if (s & t) continue;  // repeated generator
      int sign = subset_merge_sign(s, t);
      Scalar c = Scalar::one(field);
      if (sign < 0) c = -c;
      g.set_product(s, t, {{s | t, c}});
    }
  }
  return g;
}

std::vector<std::uint32_t> TruncatedPoly::exponents(std::uint32_t index) const {
  std::vector<std::uint32_t> e(m);
  for (std::size_t i = 0; i < m; ++i) {
    e[i] = index % static_cast<std::uint32_t>(p);
    index /= static_cast<std::uint32_t>(p);
  }
  return e;
}

std::uint32_t TruncatedPoly::index(const std::vector<std::uint32_t>& exp) const {
  std::uint32_t idx = 0;
  for (std::size_t i = m; i-- > 0;) idx = idx * static_cast<std::uint32_t>(p) + exp[i];
  return idx;
}

TruncatedPoly truncated_poly(std::size_t m, std::uint64_t p) {
  if (m < 1) throw std::invalid_argument("truncated_poly: m >= 1 required");
  FieldDesc field = FieldDesc::prime_field(p);
  std::uint64_t dim = 1;
  for (std::size_t i = 0; i < m; ++i) {
    dim *= p;
    if (dim > 2'000'000) throw std::invalid_argument("truncated_poly: dimension too large");
  }
  TruncatedPoly out;
  out.m = m;
  out.p = p;
  out.algebra = SuperAlgebra(field, dim);
  out.algebra.names.resize(dim);
  for (std::uint32_t idx = 0; idx < dim; ++idx) {
    auto e = out.exponents(idx);
    std::string name;
    for (std::size_t i = 0; i < m; ++i) {
      if (e[i] == 0) continue;
      if (!name.empty()) name += " ";
      name += m == 1 ? "a" : "a" + std::to_string(i + 1);
      if (e[i] > 1) name += "^" + std::to_string(e[i]);
    }
    out.algebra.names[idx] = name.empty() ? "1" : name;
  }
  for (std::uint32_t s = 0; s < dim; ++s) {
    auto es = out.exponents(s);
    for (std::uint32_t t = 0; t < dim; ++t) {
      auto et = out.exponents(t);
      bool truncated = false;
      std::vector<std::uint32_t> sum(m);
      for (std::size_t i = 0; i < m; ++i) {
        sum[i] = es[i] + et[i];
        if (sum[i] >= p) truncated = true;  // a_i^p = 0 kills the monomial
      }
      if (truncated) continue;
      out.algebra.set_product(s, t, {{out.index(sum), Scalar::one(field)}});
    }
  }
  return out;
}

SuperAlgebra b_mn(std::size_t m, std::size_t n, std::uint64_t p) {
  TruncatedPoly b = truncated_poly(m, p);
  if (n == 0) return b.algebra;
  return tensor_super(b.algebra, grassmann(n, b.algebra.field));
}

Derivation partial_derivative(const TruncatedPoly& b, std::size_t var) {
  if (var >= b.m) throw std::invalid_argument("partial_derivative: variable out of range");
  const SuperAlgebra& a = b.algebra;
  Matrix mat(a.field, a.dim, a.dim);
  for (std::uint32_t idx = 0; idx < a.dim; ++idx) {
    auto e = b.exponents(idx);
    if (e[var] == 0) continue;
    Scalar c = Scalar::from_int(a.field, static_cast<long long>(e[var]));
    auto low = e;
    --low[var];
    mat.at(b.index(low), idx) = c;
  }
  return Derivation::checked(a, std::move(mat));
}

Bracket vector_bracket(const SuperAlgebra& gamma, const Derivation& d) {
  if (d.map.alg != &gamma) throw std::invalid_argument("vector_bracket: derivation over wrong algebra");
  if (!check_supercommutative(gamma))
    throw std::invalid_argument("vector_bracket: gamma is not supercommutative");
  Bracket br(gamma);
  for (std::uint32_t i = 0; i < gamma.dim; ++i) {
    Element di = d.map.apply_basis(i);
    for (std::uint32_t j = 0; j < gamma.dim; ++j) {
      Element val = multiply(gamma, di, Element::basis(gamma, j)) -
                    multiply(gamma, Element::basis(gamma, i), d.map.apply_basis(j));
      SuperAlgebra::Terms terms;
      for (std::uint32_t k = 0; k < gamma.dim; ++k)
        if (!val.coords[k].is_zero()) terms.emplace_back(k, val.coords[k]);
      br.set_bracket(i, j, std::move(terms));
    }
  }
  return br;
}

Bracket poisson_grassmann(const SuperAlgebra& gamma) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < gamma.dim) ++n;
  if ((std::size_t{1} << n) != gamma.dim)
    throw std::invalid_argument("poisson_grassmann: not a Grassmann algebra");
  for (std::uint32_t mask = 0; mask < gamma.dim; ++mask) {
    if (gamma.parity[mask] != (__builtin_popcount(mask) & 1))
      throw std::invalid_argument("poisson_grassmann: unexpected basis layout");
  }
  // left derivative: d/dxi_i (xi_S) = (-1)^{#generators of S below i} xi_{S-i}
  auto partial_sign = [](std::uint32_t mask, std::uint32_t i) {
    return (__builtin_popcount(mask & ((1u << i) - 1)) & 1) ? -1 : 1;
  };
  Bracket br(gamma);
  for (std::uint32_t s = 0; s < gamma.dim; ++s) {
    for (std::uint32_t t = 0; t < gamma.dim; ++t) {
      std::vector<Scalar> acc(gamma.dim, Scalar::zero(gamma.field));
      for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t bit = 1u << i;
        if (!(s & bit) || !(t & bit)) continue;
        int sign = partial_sign(s, i) * partial_sign(t, i);
        // overall convention (-1)^{p(s)+1} makes {xi_i, xi_i} = 1
        if ((__builtin_popcount(s) & 1) == 0) sign = -sign;
        const auto* prod = gamma.product_terms(s ^ bit, t ^ bit);
        if (!prod) continue;
        for (const auto& [k, c] : *prod) {
          acc[k] += sign < 0 ? -c : c;
        }
      }
      SuperAlgebra::Terms terms;
      for (std::uint32_t k = 0; k < gamma.dim; ++k)
        if (!acc[k].is_zero()) terms.emplace_back(k, acc[k]);
      br.set_bracket(s, t, std::move(terms));
    }
  }
  return br;
}

SuperAlgebra kantor_double(const SuperAlgebra& gamma, const Bracket& br) {
  if (br.gamma != &gamma) throw std::invalid_argument("kantor_double: bracket/algebra mismatch");
  if (!find_unit(gamma)) throw std::invalid_argument("kantor_double: gamma is not unital");
  std::string skew_witness;
  if (!br.is_super_skew(&skew_witness))
    throw std::invalid_argument("kantor_double: bracket is not super-skew: " + skew_witness);
  const std::size_t g = gamma.dim;
  SuperAlgebra j(gamma.field, 2 * g);
  j.names.resize(j.dim);
  for (std::uint32_t i = 0; i < g; ++i) {
    j.parity[i] = gamma.parity[i];
    j.parity[g + i] = (gamma.parity[i] + 1) & 1;
    std::string nm = gamma.basis_name(i);
    j.names[i] = nm;
    j.names[g + i] = nm == "1" ? "x" : nm + " x";
  }
  auto shift = [g](const SuperAlgebra::Terms& terms, bool to_x_part, bool negate) {
    SuperAlgebra::Terms out;
    out.reserve(terms.size());
    for (const auto& [k, c] : terms)
      out.emplace_back(k + (to_x_part ? g : 0), negate ? -c : c);
    return out;
  };
  for (std::uint32_t a = 0; a < g; ++a) {
    for (std::uint32_t b = 0; b < g; ++b) {
      bool pb = gamma.parity[b];
      if (const auto* t = gamma.product_terms(a, b)) {
        j.set_product(a, b, shift(*t, false, false));          // a.b = ab
        j.set_product(a, g + b, shift(*t, true, false));       // a.(bx) = (ab)x
        j.set_product(g + a, b, shift(*t, true, pb));          // (ax).b = (-1)^{p(b)} (ab)x
      }
      if (const auto* t = br.terms(a, b)) {
        j.set_product(g + a, g + b, shift(*t, false, pb));     // (ax).(bx) = (-1)^{p(b)} {a,b}
      }
    }
  }
  return j;
}

namespace {

// x_{i x j}: (index 1..3, sign), or index 0 for zero; cross-product signs
// (cyclic positive), which is what the Jordan identity on CK(Z, d) needs
std::pair<int, int> cross(int i, int j) {
  if (i == j) return {0, 0};
  bool cyclic = (i == 1 && j == 2) || (i == 2 && j == 3) || (i == 3 && j == 1);
  return {6 - i - j, cyclic ? 1 : -1};
}

bool is_associative_commutative(const SuperAlgebra& a) {
  for (std::uint32_t i = 0; i < a.dim; ++i) {
    Element ei = Element::basis(a, i);
    for (std::uint32_t j = 0; j < a.dim; ++j) {
      Element ej = Element::basis(a, j);
      if (!(multiply(a, ei, ej) == multiply(a, ej, ei))) return false;
      for (std::uint32_t k = 0; k < a.dim; ++k) {
        Element ek = Element::basis(a, k);
        if (!(multiply(a, multiply(a, ei, ej), ek) ==
              multiply(a, ei, multiply(a, ej, ek))))
          return false;
      }
    }
  }
  return true;
}

}  // namespace

SuperAlgebra cheng_kac(const SuperAlgebra& z, const Derivation& d) {
  if (d.map.alg != &z) throw std::invalid_argument("cheng_kac: derivation over wrong algebra");
  if (z.odd_dim() != 0) throw std::invalid_argument("cheng_kac: Z must be all even");
  if (!find_unit(z)) throw std::invalid_argument("cheng_kac: Z must be unital");
  if (!is_associative_commutative(z))
    throw std::invalid_argument("cheng_kac: Z must be associative and commutative");

  const std::uint32_t nz = static_cast<std::uint32_t>(z.dim);
  // sectors 0 = Z, 1..3 = w_i Z (even), 4 = x Z, 5..7 = x_i Z (odd)
  SuperAlgebra ck(z.field, 8 * z.dim);
  ck.names.resize(ck.dim);
  auto at = [nz](std::uint32_t sector, std::uint32_t f) { return sector * nz + f; };
  static const char* sector_names[] = {"", "w1 ", "w2 ", "w3 ", "x ", "x1 ", "x2 ", "x3 "};
  for (std::uint32_t s = 0; s < 8; ++s) {
    for (std::uint32_t f = 0; f < nz; ++f) {
      ck.parity[at(s, f)] = s >= 4;
      std::string base = z.basis_name(f);
      std::string prefix = sector_names[s];
      if (s == 0) {
        ck.names[at(s, f)] = base;
      } else {
        ck.names[at(s, f)] = base == "1"
                                 ? std::string(prefix).substr(0, std::string(prefix).size() - 1)
                                 : prefix + base;
      }
    }
  }

  // Z-side helpers, all returning coordinate vectors over Z
  auto prod_fg = [&](std::uint32_t f, std::uint32_t g) {
    std::vector<Scalar> out(nz, Scalar::zero(z.field));
    if (const auto* t = z.product_terms(f, g))
      for (const auto& [k, c] : *t) out[k] += c;
    return out;
  };
  auto prod_f_dg = [&](std::uint32_t f, std::uint32_t g) {
    // f * d(g)
    std::vector<Scalar> out(nz, Scalar::zero(z.field));
    for (std::uint32_t m = 0; m < nz; ++m) {
      const Scalar& dm = d.map.mat.at(m, g);
      if (dm.is_zero()) continue;
      if (const auto* t = z.product_terms(f, m))
        for (const auto& [k, c] : *t) out[k] += dm * c;
    }
    return out;
  };

  auto add_sector = [&](std::uint32_t li, std::uint32_t ri, std::uint32_t target_sector,
                        const std::vector<Scalar>& coeffs, int sign) {
    SuperAlgebra::Terms terms;
    for (std::uint32_t k = 0; k < nz; ++k) {
      if (coeffs[k].is_zero()) continue;
      terms.emplace_back(at(target_sector, k), sign < 0 ? -coeffs[k] : coeffs[k]);
    }
    ck.set_product(li, ri, std::move(terms));
  };

  for (std::uint32_t f = 0; f < nz; ++f) {
    for (std::uint32_t g = 0; g < nz; ++g) {
      auto fg = prod_fg(f, g);
      auto f_dg = prod_f_dg(f, g);
      auto df_g = prod_f_dg(g, f);  // commutative Z: d(f)g = g*d(f)

      // even x even
      add_sector(at(0, f), at(0, g), 0, fg, 1);                     // f g
      for (std::uint32_t i = 1; i <= 3; ++i) {
        add_sector(at(0, f), at(i, g), i, fg, 1);                   // f (w_i g)
        add_sector(at(i, f), at(0, g), i, fg, 1);                   // (w_i f) g
        add_sector(at(i, f), at(i, g), 0, fg, -1);                  // w_i^2 = -1
      }

      // even x odd (even and odd elements commute)
      add_sector(at(0, f), at(4, g), 4, fg, 1);                     // f (x g)
      add_sector(at(4, f), at(0, g), 4, fg, 1);                     // (x f) g
      for (std::uint32_t i = 1; i <= 3; ++i) {
        add_sector(at(0, f), at(4 + i, g), 4 + i, fg, 1);           // f (x_i g)
        add_sector(at(4 + i, f), at(0, g), 4 + i, fg, 1);           // (x_i f) g
      }
      for (std::uint32_t jw = 1; jw <= 3; ++jw) {
        add_sector(at(4, f), at(jw, g), 4 + jw, f_dg, 1);           // (x f)(w_j g) = x_j(f d(g))
        add_sector(at(jw, f), at(4, g), 4 + jw, df_g, 1);           // (w_j f)(x g) = x_j(d(f) g)
        for (std::uint32_t i = 1; i <= 3; ++i) {
          auto [k, sign] = cross(static_cast<int>(i), static_cast<int>(jw));
          if (k != 0) {
            add_sector(at(4 + i, f), at(jw, g), 4 + static_cast<std::uint32_t>(k), fg,
                       sign);                                       // (x_i f)(w_j g) = x_{ixj}(fg)
            add_sector(at(jw, f), at(4 + i, g), 4 + static_cast<std::uint32_t>(k), fg,
                       sign);                                       // (w_j f)(x_i g) = x_{ixj}(gf)
          }
        }
      }

      // odd x odd
      {
        // (x f)(x g) = d(f) g - f d(g)
        std::vector<Scalar> v(nz, Scalar::zero(z.field));
        for (std::uint32_t k = 0; k < nz; ++k) v[k] = df_g[k] - f_dg[k];
        add_sector(at(4, f), at(4, g), 0, v, 1);
      }
      for (std::uint32_t i = 1; i <= 3; ++i) {
        add_sector(at(4, f), at(4 + i, g), i, fg, -1);              // (x f)(x_j g) = -w_j(fg)
        add_sector(at(4 + i, f), at(4, g), i, fg, 1);               // (x_i f)(x g) = w_i(fg)
        // (x_i f)(x_j g) = 0
      }
    }
  }
  return ck;
}

StarAlgebra b12(const FieldDesc& field) {
  if (field.is_rational() || field.p != 3)
    throw std::invalid_argument("b12 requires characteristic 3");
  SuperAlgebra b(field, 3);
  b.parity = {0, 1, 1};
  b.names = {"1", "x", "y"};
  Scalar one = Scalar::one(field);
  for (std::uint32_t i = 0; i < 3; ++i) {
    b.set_product(0, i, {{i, one}});
    if (i != 0) b.set_product(i, 0, {{i, one}});
  }
  b.set_product(1, 2, {{0, one}});
  b.set_product(2, 1, {{0, -one}});
  Matrix star(field, 3, 3);
  star.at(0, 0) = one;
  star.at(1, 1) = -one;
  star.at(2, 2) = -one;
  Superinvolution::checked(b, star);  // validate the laws
  return StarAlgebra{std::move(b), std::move(star)};
}

StarAlgebra b42(const FieldDesc& field) {
  if (field.is_rational() || field.p != 3)
    throw std::invalid_argument("b42 requires characteristic 3");
  SuperAlgebra b(field, 6);
  b.parity = {0, 0, 0, 0, 1, 1};
  b.names = {"e11", "e12", "e21", "e22", "m1", "m2"};
  Scalar one = Scalar::one(field);
  auto eidx = [](int i, int j) { return static_cast<std::uint32_t>((i - 1) * 2 + (j - 1)); };
  auto midx = [](int k) { return static_cast<std::uint32_t>(3 + k); };

  // matrix units
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k)
        for (int l = 1; l <= 2; ++l)
          if (j == k) b.set_product(eidx(i, j), eidx(k, l), {{eidx(i, l), one}});

  // e_{ij} . m_k = delta_{ik} m_j
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k)
        if (i == k) b.set_product(eidx(i, j), midx(k), {{midx(j), one}});

  // m . a = abar . m with the symplectic bar: e11 <-> e22, e12 -> -e12, e21 -> -e21
  struct BarImage {
    int i, j, sign;
  };
  auto bar = [](int i, int j) -> BarImage {
    if (i == j) return {3 - i, 3 - j, 1};
    return {i, j, -1};
  };
  for (int k = 1; k <= 2; ++k) {
    for (int i = 1; i <= 2; ++i) {
      for (int j = 1; j <= 2; ++j) {
        BarImage bi = bar(i, j);
        // abar . m_k = delta_{bi.i, k} m_{bi.j} with bi.sign
        if (bi.i == k)
          b.set_product(midx(k), eidx(i, j), {{midx(bi.j), bi.sign < 0 ? -one : one}});
      }
    }
  }

  // odd products: m1^2 = -e21, m2^2 = e12, m1 m2 = e11, m2 m1 = -e22
  b.set_product(midx(1), midx(1), {{eidx(2, 1), -one}});
  b.set_product(midx(2), midx(2), {{eidx(1, 2), one}});
  b.set_product(midx(1), midx(2), {{eidx(1, 1), one}});
  b.set_product(midx(2), midx(1), {{eidx(2, 2), -one}});

  Matrix star(field, 6, 6);
  star.at(eidx(2, 2), eidx(1, 1)) = one;
  star.at(eidx(1, 1), eidx(2, 2)) = one;
  star.at(eidx(1, 2), eidx(1, 2)) = -one;
  star.at(eidx(2, 1), eidx(2, 1)) = -one;
  star.at(midx(1), midx(1)) = -one;
  star.at(midx(2), midx(2)) = -one;
  Superinvolution::checked(b, star);
  return StarAlgebra{std::move(b), std::move(star)};
}

namespace {

// star-fixed vectors of a given parity, as an RREF basis over the full
// coordinate space
SubspaceBasis star_fixed_basis(const SuperAlgebra& b, const Superinvolution& star,
                               std::uint8_t parity) {
  std::vector<std::uint32_t> idx;
  for (std::uint32_t i = 0; i < b.dim; ++i)
    if (b.parity[i] == parity) idx.push_back(i);
  Matrix m(b.field, idx.size(), idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c) {
    Element img = star.map.apply_basis(idx[c]);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      m.at(r, c) = img.coords[idx[r]];
      if (r == c) m.at(r, c) -= Scalar::one(b.field);
    }
  }
  SubspaceBasis local = kernel(m);
  SubspaceBasis out(b.field, b.dim);
  for (const auto& v : local.vectors) {
    std::vector<Scalar> full(b.dim, Scalar::zero(b.field));
    for (std::size_t t = 0; t < idx.size(); ++t) full[idx[t]] = v[t];
    out.vectors.push_back(std::move(full));
  }
  return out;
}

}  // namespace

SuperAlgebra h3(const SuperAlgebra& b, const Superinvolution& star) {
  if (star.map.alg != &b) throw std::invalid_argument("h3: star over wrong algebra");
  const std::size_t nb = b.dim;

  // hermitian matrix = 3x3 grid of B-coordinate vectors
  using Grid = std::vector<std::vector<Scalar>>;  // 9 cells, each of length nb
  auto zero_grid = [&] {
    return Grid(9, std::vector<Scalar>(nb, Scalar::zero(b.field)));
  };
  auto cell = [](std::size_t i, std::size_t j) { return 3 * i + j; };

  struct BasisEntry {
    Grid grid;
    std::uint8_t parity;
    std::string name;
  };
  std::vector<BasisEntry> basis;

  SubspaceBasis fixed_even = star_fixed_basis(b, star, 0);
  SubspaceBasis fixed_odd = star_fixed_basis(b, star, 1);
  auto describe_fixed = [&](const std::vector<Scalar>& v) {
    int nnz = 0;
    std::uint32_t only = 0;
    for (std::uint32_t t = 0; t < nb; ++t) {
      if (!v[t].is_zero()) {
        ++nnz;
        only = t;
      }
    }
    if (nnz == 1 && v[only].is_one()) return b.basis_name(only);
    Element e{&b, v};
    return e.str();
  };

  for (std::size_t dpos = 0; dpos < 3; ++dpos) {
    for (const auto* fixed : {&fixed_even, &fixed_odd}) {
      for (const auto& v : fixed->vectors) {
        BasisEntry be{zero_grid(), fixed == &fixed_odd ? std::uint8_t{1} : std::uint8_t{0}, ""};
        be.grid[cell(dpos, dpos)] = v;
        be.name = "E" + std::to_string(dpos + 1) + std::to_string(dpos + 1) + "[" +
                  describe_fixed(v) + "]";
        basis.push_back(std::move(be));
      }
    }
  }
  const std::array<std::pair<std::size_t, std::size_t>, 3> offdiag = {
      {{0, 1}, {0, 2}, {1, 2}}};
  for (auto [i, j] : offdiag) {
    for (std::uint32_t t = 0; t < nb; ++t) {
      BasisEntry be{zero_grid(), b.parity[t], ""};
      be.grid[cell(i, j)][t] = Scalar::one(b.field);
      Element st = star.map.apply_basis(t);
      be.grid[cell(j, i)] = st.coords;
      be.name = "S" + std::to_string(i + 1) + std::to_string(j + 1) + "[" + b.basis_name(t) + "]";
      basis.push_back(std::move(be));
    }
  }

  const std::size_t dim = basis.size();
  SuperAlgebra h(b.field, dim);
  h.names.resize(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    h.parity[i] = basis[i].parity;
    h.names[i] = basis[i].name;
  }

  // coordinates of a hermitian grid in the chosen basis
  RowEchelon ech_even(b.field, b.dim);
  for (const auto& v : fixed_even.vectors) ech_even.add_row(v);
  RowEchelon ech_odd(b.field, b.dim);
  for (const auto& v : fixed_odd.vectors) ech_odd.add_row(v);
  auto fixed_coords = [&](const std::vector<Scalar>& v, std::uint8_t parity) {
    // RREF basis: coefficient of basis vector t is v at that vector's pivot
    const SubspaceBasis& fixed = parity ? fixed_odd : fixed_even;
    const RowEchelon& ech = parity ? ech_odd : ech_even;
    std::vector<Scalar> coords;
    coords.reserve(fixed.dim());
    for (const auto& bv : fixed.vectors) {
      std::size_t pivot = 0;
      while (pivot < bv.size() && bv[pivot].is_zero()) ++pivot;
      coords.push_back(v[pivot]);
    }
    for (const auto& r : ech.reduce(v))
      if (!r.is_zero()) throw std::logic_error("h3: diagonal entry escapes the star-fixed space");
    return coords;
  };

  auto mul_grid = [&](const Grid& x, const Grid& y) {
    Grid z = zero_grid();
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < 3; ++k) {
        Element xe{&b, x[cell(i, k)]};
        if (xe.is_zero()) continue;
        for (std::size_t j = 0; j < 3; ++j) {
          Element ye{&b, y[cell(k, j)]};
          if (ye.is_zero()) continue;
          Element prod = multiply(b, xe, ye);
          auto& target = z[cell(i, j)];
          for (std::size_t t = 0; t < nb; ++t) target[t] += prod.coords[t];
        }
      }
    }
    return z;
  };

  Scalar hf = half(b.field);
  for (std::uint32_t p1 = 0; p1 < dim; ++p1) {
    for (std::uint32_t p2 = 0; p2 < dim; ++p2) {
      Grid xy = mul_grid(basis[p1].grid, basis[p2].grid);
      Grid yx = mul_grid(basis[p2].grid, basis[p1].grid);
      bool negate = basis[p1].parity && basis[p2].parity;
      Grid sym = zero_grid();
      for (std::size_t c = 0; c < 9; ++c)
        for (std::size_t t = 0; t < nb; ++t)
          sym[c][t] = hf * (xy[c][t] + (negate ? -yx[c][t] : yx[c][t]));

      std::uint8_t rp = (basis[p1].parity + basis[p2].parity) & 1;
      SuperAlgebra::Terms terms;
      std::uint32_t pos = 0;
      // diagonal coordinates first, matching basis layout
      for (std::size_t dpos = 0; dpos < 3; ++dpos) {
        for (std::uint8_t par : {std::uint8_t{0}, std::uint8_t{1}}) {
          const SubspaceBasis& fixed = par ? fixed_odd : fixed_even;
          if (fixed.dim() == 0) continue;
          if (par == rp) {
            auto coords = fixed_coords(sym[cell(dpos, dpos)], par);
            for (std::size_t t = 0; t < coords.size(); ++t) {
              if (!coords[t].is_zero())
                terms.emplace_back(pos + static_cast<std::uint32_t>(t), coords[t]);
            }
          }
          pos += static_cast<std::uint32_t>(fixed.dim());
        }
      }
      for (auto [i, j] : offdiag) {
        for (std::uint32_t t = 0; t < nb; ++t) {
          const Scalar& c = sym[cell(i, j)][t];
          if (c.is_zero()) continue;
          if (b.parity[t] != rp)
            throw std::logic_error("h3: product has a component of the wrong parity");
          terms.emplace_back(pos + t, c);
        }
        pos += static_cast<std::uint32_t>(nb);
      }
      h.set_product(p1, p2, std::move(terms));
    }
  }
  return h;
}

SuperAlgebra h3(const StarAlgebra& b) {
  Superinvolution star = Superinvolution::checked(b.algebra, b.star);
  return h3(b.algebra, star);
}

}  // namespace superdelta
