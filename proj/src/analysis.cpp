#include "superdelta/analysis.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <stdexcept>

namespace superdelta {

std::vector<std::pair<std::uint32_t, std::uint32_t>> map_entries(
    const SuperAlgebra& a, std::optional<std::uint8_t> parity) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::uint32_t r = 0; r < a.dim; ++r) {
    for (std::uint32_t c = 0; c < a.dim; ++c) {
      if (!parity || a.parity[r] == ((a.parity[c] + *parity) & 1)) out.emplace_back(r, c);
    }
  }
  return out;
}

std::vector<Scalar> flatten_map(const SuperAlgebra& a,
                                std::optional<std::uint8_t> parity, const Matrix& m) {
  auto entries = map_entries(a, parity);
  std::vector<Scalar> v;
  v.reserve(entries.size());
  for (auto [r, c] : entries) v.push_back(m.at(r, c));
  // entries outside the allowed pattern must vanish
  if (parity) {
    for (std::uint32_t r = 0; r < a.dim; ++r)
      for (std::uint32_t c = 0; c < a.dim; ++c)
        if (a.parity[r] != ((a.parity[c] + *parity) & 1) && !m.at(r, c).is_zero())
          throw std::invalid_argument("flatten_map: matrix is not parity-homogeneous");
  }
  return v;
}

Matrix unflatten_map(const SuperAlgebra& a, std::optional<std::uint8_t> parity,
                     const std::vector<Scalar>& v) {
  auto entries = map_entries(a, parity);
  if (entries.size() != v.size()) throw std::invalid_argument("unflatten_map: size mismatch");
  Matrix m(a.field, a.dim, a.dim);
  for (std::size_t t = 0; t < entries.size(); ++t) m.at(entries[t].first, entries[t].second) = v[t];
  return m;
}

namespace {

// shared equation assembly for the delta-(super)derivation solvers
GradedSubspace solve_delta(const SuperAlgebra& a, const Scalar& delta,
                           std::optional<std::uint8_t> parity) {
  if (!(delta.field() == a.field))
    throw std::invalid_argument("delta must live in the algebra's field");
  const std::uint32_t n = static_cast<std::uint32_t>(a.dim);
  auto entries = map_entries(a, parity);
  std::vector<std::int32_t> entry_index(static_cast<std::size_t>(n) * n, -1);
  for (std::size_t t = 0; t < entries.size(); ++t)
    entry_index[entries[t].first * n + entries[t].second] = static_cast<std::int32_t>(t);
  auto idx = [&](std::uint32_t r, std::uint32_t c) { return entry_index[r * n + c]; };

  std::array<std::vector<std::uint32_t>, 2> rows_by_parity;
  for (std::uint32_t r = 0; r < n; ++r) rows_by_parity[a.parity[r]].push_back(r);
  auto allowed_rows = [&](std::uint32_t col) -> const std::vector<std::uint32_t>& {
    static const std::vector<std::uint32_t> empty;
    if (!parity) return empty;  // unused in ungraded mode
    return rows_by_parity[(a.parity[col] + *parity) & 1];
  };

  RowEchelon ech(a.field, entries.size());
  std::vector<SparseRow> rows(n);
  Scalar neg_delta = -delta;

  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      for (auto& r : rows) r.clear();
      // phi(e_i e_j)
      if (const auto* t = a.product_terms(i, j)) {
        for (const auto& [m, c] : *t) {
          if (parity) {
            for (std::uint32_t k : allowed_rows(m))
              rows[k].emplace_back(static_cast<std::uint32_t>(idx(k, m)), c);
          } else {
            for (std::uint32_t k = 0; k < n; ++k)
              rows[k].emplace_back(static_cast<std::uint32_t>(idx(k, m)), c);
          }
        }
      }
      // -delta phi(e_i) e_j
      {
        auto column_term = [&](std::uint32_t r) {
          if (const auto* t = a.product_terms(r, j)) {
            std::int32_t u = idx(r, i);
            for (const auto& [k, c] : *t)
              rows[k].emplace_back(static_cast<std::uint32_t>(u), neg_delta * c);
          }
        };
        if (parity) {
          for (std::uint32_t r : allowed_rows(i)) column_term(r);
        } else {
          for (std::uint32_t r = 0; r < n; ++r) column_term(r);
        }
      }
      // -delta (-1)^{p(e_i) p(phi)} e_i phi(e_j)
      {
        bool negate = parity && *parity && a.parity[i];
        Scalar coeff = negate ? delta : neg_delta;
        auto column_term = [&](std::uint32_t r) {
          if (const auto* t = a.product_terms(i, r)) {
            std::int32_t u = idx(r, j);
            for (const auto& [k, c] : *t)
              rows[k].emplace_back(static_cast<std::uint32_t>(u), coeff * c);
          }
        };
        if (parity) {
          for (std::uint32_t r : allowed_rows(j)) column_term(r);
        } else {
          for (std::uint32_t r = 0; r < n; ++r) column_term(r);
        }
      }
      for (auto& r : rows)
        if (!r.empty()) ech.add_row(r);
    }
  }

  GradedSubspace out;
  out.ambient = GradedSubspace::Ambient::Maps;
  out.map_parity = parity;
  out.basis = ech.kernel();

  // re-verify every member pointwise against the defining relation
  for (const auto& v : out.basis.vectors) {
    Matrix m = unflatten_map(a, parity, v);
    LinearMap f = parity ? LinearMap::homogeneous(a, *parity, std::move(m))
                         : LinearMap::ungraded(a, std::move(m));
    if (!is_delta_superderivation(a, f, delta, parity))
      throw std::logic_error("solver returned a map violating the defining relation");
  }
  return out;
}

GradedSubspace solve_centroid(const SuperAlgebra& a, std::optional<std::uint8_t> parity) {
  const std::uint32_t n = static_cast<std::uint32_t>(a.dim);
  auto entries = map_entries(a, parity);
  std::vector<std::int32_t> entry_index(static_cast<std::size_t>(n) * n, -1);
  for (std::size_t t = 0; t < entries.size(); ++t)
    entry_index[entries[t].first * n + entries[t].second] = static_cast<std::int32_t>(t);
  auto idx = [&](std::uint32_t r, std::uint32_t c) { return entry_index[r * n + c]; };
  auto allowed = [&](std::uint32_t r, std::uint32_t c) {
    return !parity || a.parity[r] == ((a.parity[c] + *parity) & 1);
  };

  RowEchelon ech(a.field, entries.size());
  std::vector<SparseRow> rows(n);
  Scalar minus_one = -Scalar::one(a.field);

  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const auto* tij = a.product_terms(i, j);
      // family 1: chi(e_i e_j) - chi(e_i) e_j = 0
      for (auto& r : rows) r.clear();
      if (tij) {
        for (const auto& [m, c] : *tij) {
          for (std::uint32_t k = 0; k < n; ++k)
            if (allowed(k, m)) rows[k].emplace_back(static_cast<std::uint32_t>(idx(k, m)), c);
        }
      }
      for (std::uint32_t r = 0; r < n; ++r) {
        if (!allowed(r, i)) continue;
        if (const auto* t = a.product_terms(r, j)) {
          for (const auto& [k, c] : *t)
            rows[k].emplace_back(static_cast<std::uint32_t>(idx(r, i)), minus_one * c);
        }
      }
      for (auto& r : rows)
        if (!r.empty()) ech.add_row(r);

      // family 2: chi(e_i e_j) - (-1)^{p(e_i)p(chi)} e_i chi(e_j) = 0
      for (auto& r : rows) r.clear();
      if (tij) {
        for (const auto& [m, c] : *tij) {
          for (std::uint32_t k = 0; k < n; ++k)
            if (allowed(k, m)) rows[k].emplace_back(static_cast<std::uint32_t>(idx(k, m)), c);
        }
      }
      {
        bool negate = parity && *parity && a.parity[i];
        for (std::uint32_t r = 0; r < n; ++r) {
          if (!allowed(r, j)) continue;
          if (const auto* t = a.product_terms(i, r)) {
            for (const auto& [k, c] : *t)
              rows[k].emplace_back(static_cast<std::uint32_t>(idx(r, j)),
                                   negate ? c : minus_one * c);
          }
        }
      }
      for (auto& r : rows)
        if (!r.empty()) ech.add_row(r);
    }
  }

  GradedSubspace out;
  out.ambient = GradedSubspace::Ambient::Maps;
  out.map_parity = parity;
  out.basis = ech.kernel();
  return out;
}

}  // namespace

GradedSubspace delta_derivations(const SuperAlgebra& a, const Scalar& delta) {
  return solve_delta(a, delta, std::nullopt);
}

GradedSubspace delta_superderivations(const SuperAlgebra& a, const Scalar& delta,
                                      std::uint8_t parity) {
  return solve_delta(a, delta, parity);
}

GradedSubspace centroid(const SuperAlgebra& a) { return solve_centroid(a, std::nullopt); }

GradedSubspace supercentroid(const SuperAlgebra& a, std::uint8_t parity) {
  return solve_centroid(a, parity);
}

bool is_delta_superderivation(const SuperAlgebra& a, const LinearMap& f,
                              const Scalar& delta, std::optional<std::uint8_t> parity) {
  if (f.alg != &a) throw std::invalid_argument("map over wrong algebra");
  if (parity && (!f.parity || *f.parity != *parity))
    throw std::invalid_argument("map parity does not match the requested parity");
  for (std::uint32_t i = 0; i < a.dim; ++i) {
    Element fi = f.apply_basis(i);
    for (std::uint32_t j = 0; j < a.dim; ++j) {
      Element lhs = f.apply(multiply(a, Element::basis(a, i), Element::basis(a, j)));
      Element rhs = multiply(a, fi, Element::basis(a, j));
      Element t2 = multiply(a, Element::basis(a, i), f.apply_basis(j));
      bool negate = parity && *parity && a.parity[i];
      rhs = negate ? rhs - t2 : rhs + t2;
      if (!(lhs == rhs.scaled(delta))) return false;
    }
  }
  return true;
}

Derivation bracket_derivation(const SuperAlgebra& gamma, const Bracket& br) {
  if (br.gamma != &gamma) throw std::invalid_argument("bracket over wrong algebra");
  auto unit = find_unit(gamma);
  if (!unit) throw std::invalid_argument("bracket_derivation: gamma has no unit");
  Matrix m(gamma.field, gamma.dim, gamma.dim);
  for (std::uint32_t i = 0; i < gamma.dim; ++i) {
    Element di = br.eval(Element::basis(gamma, i), *unit);
    for (std::size_t r = 0; r < gamma.dim; ++r) m.at(r, i) = di.coords[r];
  }
  return Derivation::checked(gamma, std::move(m));
}

GradedSubspace compute_Phi(const SuperAlgebra& gamma, const Bracket& br) {
  Derivation d = bracket_derivation(gamma, br);
  const std::uint32_t n = static_cast<std::uint32_t>(gamma.dim);

  GradedSubspace out;
  out.ambient = GradedSubspace::Ambient::Elements;

  for (std::uint8_t par : {0, 1}) {
    std::vector<std::uint32_t> idx;
    for (std::uint32_t i = 0; i < n; ++i)
      if (gamma.parity[i] == par) idx.push_back(i);
    RowEchelon ech(gamma.field, idx.size());
    std::vector<SparseRow> rows(n);
    for (std::uint32_t j = 0; j < n; ++j) {
      for (auto& r : rows) r.clear();
      Element dj = d.map.apply_basis(j);
      for (std::uint32_t t = 0; t < idx.size(); ++t) {
        std::uint32_t i = idx[t];
        // {e_i, e_j} - D(e_i) e_j + e_i D(e_j), coefficient of alpha_i
        Element v = br.eval_basis(i, j) -
                    multiply(gamma, d.map.apply_basis(i), Element::basis(gamma, j)) +
                    multiply(gamma, Element::basis(gamma, i), dj);
        for (std::uint32_t k = 0; k < n; ++k)
          if (!v.coords[k].is_zero()) rows[k].emplace_back(t, v.coords[k]);
      }
      for (auto& r : rows)
        if (!r.empty()) ech.add_row(r);
    }
    SubspaceBasis local = ech.kernel();
    SubspaceBasis full(gamma.field, n);
    for (const auto& v : local.vectors) {
      std::vector<Scalar> w(n, Scalar::zero(gamma.field));
      for (std::size_t t = 0; t < idx.size(); ++t) w[idx[t]] = v[t];
      full.vectors.push_back(std::move(w));
    }
    (par == 0 ? out.even_basis : out.odd_basis) = std::move(full);
  }
  return out;
}

namespace {

std::string triple_name(const SuperAlgebra& g, std::uint32_t a, std::uint32_t b,
                        std::uint32_t c) {
  return "(" + g.basis_name(a) + ", " + g.basis_name(b) + ", " + g.basis_name(c) + ")";
}

}  // namespace

BracketCheck is_jordan_bracket(const SuperAlgebra& gamma, const Bracket& br) {
  BracketCheck out;
  if (br.gamma != &gamma) throw std::invalid_argument("bracket over wrong algebra");
  if (!br.is_super_skew(&out.witness)) return out;
  auto unit = find_unit(gamma);
  if (!unit) {
    out.witness = "gamma has no unit";
    return out;
  }
  const std::uint32_t n = static_cast<std::uint32_t>(gamma.dim);
  std::vector<Element> dvec;  // D(e_i) = {e_i, 1}
  dvec.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i)
    dvec.push_back(br.eval(Element::basis(gamma, i), *unit));

  auto mul = [&](const Element& x, const Element& y) { return multiply(gamma, x, y); };

  for (std::uint32_t a = 0; a < n; ++a) {
    Element ea = Element::basis(gamma, a);
    for (std::uint32_t b = 0; b < n; ++b) {
      Element eb = Element::basis(gamma, b);
      bool sab = gamma.parity[a] && gamma.parity[b];
      for (std::uint32_t c = 0; c < n; ++c) {
        Element ec = Element::basis(gamma, c);
        // identity (1): {a, bc} = {a,b}c + (-1)^{p(a)p(b)} b{a,c} - {a,1}bc
        Element lhs1 = br.eval(ea, mul(eb, ec));
        Element t1 = mul(br.eval(ea, eb), ec);
        Element t2 = mul(eb, br.eval(ea, ec));
        Element t3 = mul(mul(dvec[a], eb), ec);
        Element rhs1 = (sab ? t1 - t2 : t1 + t2) - t3;
        if (!(lhs1 == rhs1)) {
          out.witness = "identity (1) fails at " + triple_name(gamma, a, b, c) +
                        ": lhs = " + lhs1.str() + ", rhs = " + rhs1.str();
          return out;
        }
        // identity (2): {a,{b,c}} = {{a,b},c} + (-1)^{p(a)p(b)}{b,{a,c}}
        //   + {a,1}{b,c} + (-1)^{p(a)(p(b)+p(c))}{b,1}{c,a}
        //   + (-1)^{p(c)(p(a)+p(b))}{c,1}{a,b}
        Element lhs2 = br.eval(ea, br.eval(eb, ec));
        Element u1 = br.eval(br.eval(ea, eb), ec);
        Element u2 = br.eval(eb, br.eval(ea, ec));
        Element u3 = mul(dvec[a], br.eval(eb, ec));
        Element u4 = mul(dvec[b], br.eval(ec, ea));
        Element u5 = mul(dvec[c], br.eval(ea, eb));
        bool s4 = gamma.parity[a] && ((gamma.parity[b] + gamma.parity[c]) & 1);
        bool s5 = gamma.parity[c] && ((gamma.parity[a] + gamma.parity[b]) & 1);
        Element rhs2 = u1 + (sab ? -u2 : u2) + u3 + (s4 ? -u4 : u4) + (s5 ? -u5 : u5);
        if (!(lhs2 == rhs2)) {
          out.witness = "identity (2) fails at " + triple_name(gamma, a, b, c) +
                        ": lhs = " + lhs2.str() + ", rhs = " + rhs2.str();
          return out;
        }
      }
    }
  }
  out.ok = true;
  return out;
}

BracketCheck is_poisson_bracket(const SuperAlgebra& gamma, const Bracket& br) {
  BracketCheck out;
  if (br.gamma != &gamma) throw std::invalid_argument("bracket over wrong algebra");
  if (!br.is_super_skew(&out.witness)) return out;
  const std::uint32_t n = static_cast<std::uint32_t>(gamma.dim);
  auto mul = [&](const Element& x, const Element& y) { return multiply(gamma, x, y); };
  for (std::uint32_t a = 0; a < n; ++a) {
    Element ea = Element::basis(gamma, a);
    for (std::uint32_t b = 0; b < n; ++b) {
      Element eb = Element::basis(gamma, b);
      bool sab = gamma.parity[a] && gamma.parity[b];
      for (std::uint32_t c = 0; c < n; ++c) {
        Element ec = Element::basis(gamma, c);
        Element lhs = br.eval(ea, mul(eb, ec));
        Element t1 = mul(br.eval(ea, eb), ec);
        Element t2 = mul(eb, br.eval(ea, ec));
        Element rhs = sab ? t1 - t2 : t1 + t2;
        if (!(lhs == rhs)) {
          out.witness = "Poisson Leibniz law fails at " + triple_name(gamma, a, b, c);
          return out;
        }
      }
    }
  }
  // Lie-superalgebra laws of the bracket, via the generic-element engine
  SuperAlgebra lie(gamma.field, gamma.dim);
  lie.parity = gamma.parity;
  lie.names = gamma.names;
  for (const auto& [key, terms] : br.table) lie.set_product(key.first, key.second, terms);
  IdentityReport rep = verify_superidentity(lie, IdentityKind::Lie);
  if (!rep.ok) {
    out.witness = "Lie superalgebra law fails: " + rep.witness;
    return out;
  }
  out.ok = true;
  return out;
}

TrivialityReport classify(const SuperAlgebra& a, const Scalar& delta,
                          std::optional<std::uint8_t> parity) {
  GradedSubspace space = parity ? delta_superderivations(a, delta, *parity)
                                : delta_derivations(a, delta);

  TrivialityReport rep{delta, parity, space.dim(), 0, 0, {}};
  // at delta = 0 or 1 nothing counts as nontrivial, by definition
  if (delta.is_zero() || delta.is_one()) {
    rep.trivial_dim = rep.space_dim;
    return rep;
  }
  GradedSubspace triv = parity ? supercentroid(a, *parity) : centroid(a);
  RowEchelon ech(a.field, space.basis.ambient_dim);
  for (const auto& v : triv.basis.vectors) ech.add_row(v);
  for (const auto& v : space.basis.vectors) {
    auto residual = ech.reduce(v);
    bool zero = true;
    for (const auto& s : residual)
      if (!s.is_zero()) {
        zero = false;
        break;
      }
    if (!zero) {
      rep.nontrivial_generators.push_back(unflatten_map(a, parity, v));
      ech.add_row(residual);
    }
  }
  rep.nontrivial_dim = rep.nontrivial_generators.size();
  rep.trivial_dim = rep.space_dim - rep.nontrivial_dim;
  return rep;
}

bool check_R_space(const SuperAlgebra& j, const SuperAlgebra& gamma, const Bracket& br) {
  if (br.gamma != &gamma) throw std::invalid_argument("bracket over wrong algebra");
  if (j.dim != 2 * gamma.dim)
    throw std::invalid_argument("check_R_space: j is not a double of gamma");
  GradedSubspace space = delta_superderivations(j, half(j.field), 0);
  RowEchelon ech(j.field, space.basis.ambient_dim);
  for (std::uint32_t i = 0; i < gamma.dim; ++i) {
    if (gamma.parity[i] != 0) continue;
    LinearMap rz = left_mult(j, Element::basis(j, i));
    ech.add_row(flatten_map(j, std::uint8_t{0}, rz.mat));
  }
  SubspaceBasis rspace = ech.row_space();
  return subspace_compare(space.basis, rspace).relation == SubspaceRelation::Equal;
}

SimplicityCertificate bracket_simple_certificate(const SuperAlgebra& gamma,
                                                 const Bracket& br, std::uint64_t seed) {
  if (br.gamma != &gamma) throw std::invalid_argument("bracket over wrong algebra");
  const std::uint32_t n = static_cast<std::uint32_t>(gamma.dim);
  std::vector<Matrix> ops;
  for (std::uint32_t i = 0; i < n; ++i) {
    ops.push_back(left_mult(gamma, Element::basis(gamma, i)).mat);
    Matrix ad(gamma.field, n, n);
    for (std::uint32_t jc = 0; jc < n; ++jc) {
      Element v = br.eval_basis(i, jc);
      for (std::size_t r = 0; r < n; ++r) ad.at(r, jc) = v.coords[r];
    }
    ops.push_back(std::move(ad));
  }

  SimplicityCertificate cert;
  SubspaceBasis closure = operator_closure(gamma.field, n, ops);
  cert.closure_dim = closure.dim();
  if (cert.closure_dim == static_cast<std::size_t>(n) * n) {
    cert.verdict = SimplicityCertificate::Verdict::Simple;
    return cert;
  }

  auto try_seed = [&](const std::vector<Scalar>& v) -> bool {
    SubspaceBasis s = spin(gamma.field, n, {v}, ops);
    if (s.dim() > 0 && s.dim() < n) {
      cert.verdict = SimplicityCertificate::Verdict::NotSimple;
      cert.witness = std::move(s);
      return true;
    }
    return false;
  };

  for (std::uint32_t i = 0; i < n; ++i) {
    std::vector<Scalar> v(n, Scalar::zero(gamma.field));
    v[i] = Scalar::one(gamma.field);
    if (try_seed(v)) return cert;
  }
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 16; ++trial) {
    std::vector<Scalar> v(n, Scalar::zero(gamma.field));
    bool nonzero = false;
    for (auto& s : v) {
      long long x = static_cast<long long>(rng() % 5) - 2;
      s = Scalar::from_int(gamma.field, x);
      nonzero = nonzero || !s.is_zero();
    }
    if (nonzero && try_seed(v)) return cert;
  }
  cert.verdict = SimplicityCertificate::Verdict::Unknown;
  return cert;
}

LemmaSuiteReport lemma_suite(const SuperAlgebra& gamma, const Bracket& br) {
  LemmaSuiteReport rep;
  const std::uint32_t n = static_cast<std::uint32_t>(gamma.dim);
  Derivation d = bracket_derivation(gamma, br);
  auto mul = [&](const Element& x, const Element& y) { return multiply(gamma, x, y); };

  // Gamma = Gamma {Gamma, Gamma}
  {
    RowEchelon ech(gamma.field, n);
    for (std::uint32_t i = 0; i < n && ech.rank() < n; ++i) {
      Element ei = Element::basis(gamma, i);
      for (std::uint32_t j = 0; j < n && ech.rank() < n; ++j) {
        for (std::uint32_t k = 0; k < n && ech.rank() < n; ++k) {
          Element v = mul(ei, br.eval_basis(j, k));
          if (!v.is_zero()) ech.add_row(v.coords);
        }
      }
    }
    rep.product_span_full = ech.rank() == n;
    if (!rep.product_span_full)
      rep.witness = "Gamma{Gamma,Gamma} has dimension " + std::to_string(ech.rank()) +
                    " < " + std::to_string(n);
  }

  GradedSubspace phi = compute_Phi(gamma, br);

  // D(Phi) inside Phi, per parity
  {
    rep.phi_d_stable = true;
    for (const auto* part : {&phi.even_basis, &phi.odd_basis}) {
      RowEchelon ech(gamma.field, n);
      for (const auto& v : part->vectors) ech.add_row(v);
      for (const auto& v : part->vectors) {
        Element alpha{&gamma, v};
        Element da = d.apply(alpha);
        for (const auto& s : ech.reduce(da.coords)) {
          if (!s.is_zero()) {
            rep.phi_d_stable = false;
            if (rep.witness.empty())
              rep.witness = "D(" + alpha.str() + ") escapes Phi";
            break;
          }
        }
      }
    }
  }

  // D^k(alpha){b,c} = D^k(alpha)(D(b)c - b D(c)), k = 1..3
  {
    rep.dk_bracket_identity = true;
    std::vector<Element> phis;
    for (const auto* part : {&phi.even_basis, &phi.odd_basis})
      for (const auto& v : part->vectors) phis.push_back(Element{&gamma, v});
    for (const auto& alpha : phis) {
      Element dk = alpha;
      for (int k = 1; k <= 3 && rep.dk_bracket_identity; ++k) {
        dk = d.apply(dk);
        for (std::uint32_t b = 0; b < n && rep.dk_bracket_identity; ++b) {
          Element eb = Element::basis(gamma, b);
          Element db = d.map.apply_basis(b);
          for (std::uint32_t c = 0; c < n; ++c) {
            Element ec = Element::basis(gamma, c);
            Element lhs = mul(dk, br.eval_basis(b, c));
            Element rhs = mul(dk, mul(db, ec) - mul(eb, d.map.apply_basis(c)));
            if (!(lhs == rhs)) {
              rep.dk_bracket_identity = false;
              if (rep.witness.empty())
                rep.witness = "D^k identity fails at k=" + std::to_string(k) + ", (" +
                              gamma.basis_name(b) + ", " + gamma.basis_name(c) + ")";
              break;
            }
          }
        }
      }
    }
  }

  // D{b,c} = {D b, c} + {b, D c}
  {
    rep.d_bracket_compatible = true;
    for (std::uint32_t b = 0; b < n && rep.d_bracket_compatible; ++b) {
      Element eb = Element::basis(gamma, b);
      Element db = d.map.apply_basis(b);
      for (std::uint32_t c = 0; c < n; ++c) {
        Element ec = Element::basis(gamma, c);
        Element lhs = d.apply(br.eval_basis(b, c));
        Element rhs = br.eval(db, ec) + br.eval(eb, d.map.apply_basis(c));
        if (!(lhs == rhs)) {
          rep.d_bracket_compatible = false;
          if (rep.witness.empty())
            rep.witness = "D{b,c} compatibility fails at (" + gamma.basis_name(b) +
                          ", " + gamma.basis_name(c) + ")";
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace superdelta
