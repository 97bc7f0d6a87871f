#include <algorithm>
#include <vector>

#include "superdelta/freesuperpoly.hpp"
#include "superdelta/superalgebra.hpp"

namespace superdelta {

namespace {

// Element of G(A) with free supercommutative coefficients: coordinate i
// carries polynomials whose monomials all have parity p(e_i).
struct GenericVec {
  std::vector<FreeSuperPoly> c;
};

GenericVec generic_zero(const SuperAlgebra& a) {
  GenericVec v;
  v.c.assign(a.dim, FreeSuperPoly::zero(a.field));
  return v;
}

// One fresh variable per basis element per argument slot.
GenericVec generic_element(const SuperAlgebra& a, std::uint32_t slot) {
  GenericVec v = generic_zero(a);
  for (std::uint32_t i = 0; i < a.dim; ++i) {
    std::uint32_t index = slot * static_cast<std::uint32_t>(a.dim) + i;
    v.c[i] = FreeSuperPoly::variable(a.field, make_variable_id(index, a.parity[i]));
  }
  return v;
}

// (f x e_i)(g x e_j) = (-1)^{p(e_i)p(g)} (fg) x (e_i e_j)
GenericVec envelope_mul(const SuperAlgebra& a, const GenericVec& x, const GenericVec& y) {
  GenericVec out = generic_zero(a);
  for (const auto& [key, terms] : a.table) {
    const FreeSuperPoly& fi = x.c[key.first];
    if (fi.is_zero()) continue;
    const FreeSuperPoly& gj = y.c[key.second];
    if (gj.is_zero()) continue;
    bool negate = (a.parity[key.first] & a.parity[key.second]) != 0;
    for (const auto& [k, cv] : terms) {
      out.c[k].add_scaled_product(fi, gj, cv, negate);
    }
  }
  return out;
}

GenericVec sub(const GenericVec& x, const GenericVec& y) {
  GenericVec out = x;
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] -= y.c[i];
  return out;
}

GenericVec add(const GenericVec& x, const GenericVec& y) {
  GenericVec out = x;
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] += y.c[i];
  return out;
}

std::string describe_variable(const SuperAlgebra& a, std::uint16_t id) {
  std::uint32_t index = id >> 1;
  std::uint32_t slot = index / static_cast<std::uint32_t>(a.dim);
  std::uint32_t basis = index % static_cast<std::uint32_t>(a.dim);
  static const char* slot_names[] = {"x", "y", "z"};
  std::string s = slot < 3 ? slot_names[slot] : "w";
  return s + "[" + a.basis_name(basis) + "]";
}

std::string describe_mono(const SuperAlgebra& a, Mono m) {
  std::string out;
  for (auto id : mono_unpack(m)) {
    if (id == 0xFFFF) continue;
    if (!out.empty()) out += "*";
    out += describe_variable(a, id);
  }
  return out.empty() ? "1" : out;
}

bool first_nonzero(const SuperAlgebra& a, const GenericVec& v, std::string* witness,
                   const char* label) {
  for (std::uint32_t k = 0; k < v.c.size(); ++k) {
    if (v.c[k].is_zero()) continue;
    if (witness) {
      Mono best = kMonoOne;
      const Scalar* coeff = nullptr;
      for (const auto& [m, c] : v.c[k].terms) {
        if (coeff == nullptr || m < best) {
          best = m;
          coeff = &c;
        }
      }
      *witness = std::string(label) + " fails at coordinate " + a.basis_name(k) +
                 ": monomial " + describe_mono(a, best) + " has coefficient " +
                 coeff->str();
    }
    return true;
  }
  return false;
}

}  // namespace

IdentityReport verify_superidentity(const SuperAlgebra& a, IdentityKind kind) {
  IdentityReport report;
  GenericVec x = generic_element(a, 0);
  GenericVec y = generic_element(a, 1);

  switch (kind) {
    case IdentityKind::Associative: {
      GenericVec z = generic_element(a, 2);
      GenericVec d = sub(envelope_mul(a, envelope_mul(a, x, y), z),
                         envelope_mul(a, x, envelope_mul(a, y, z)));
      if (first_nonzero(a, d, &report.witness, "associativity")) return report;
      break;
    }
    case IdentityKind::Jordan: {
      if (!check_supercommutative(a)) {
        report.witness = "not supercommutative";
        return report;
      }
      GenericVec x2 = envelope_mul(a, x, x);
      GenericVec lhs = envelope_mul(a, envelope_mul(a, x2, y), x);
      GenericVec rhs = envelope_mul(a, x2, envelope_mul(a, y, x));
      GenericVec d = sub(lhs, rhs);
      if (first_nonzero(a, d, &report.witness, "(x^2 y) x = x^2 (y x)")) return report;
      break;
    }
    case IdentityKind::Alternative: {
      GenericVec xx = envelope_mul(a, x, x);
      GenericVec d1 = sub(envelope_mul(a, xx, y),
                          envelope_mul(a, x, envelope_mul(a, x, y)));
      if (first_nonzero(a, d1, &report.witness, "(x,x,y) = 0")) return report;
      GenericVec yy = envelope_mul(a, y, y);
      GenericVec d2 = sub(envelope_mul(a, envelope_mul(a, x, y), y),
                          envelope_mul(a, x, yy));
      if (first_nonzero(a, d2, &report.witness, "(x,y,y) = 0")) return report;
      break;
    }
    case IdentityKind::Lie: {
      GenericVec anti = add(envelope_mul(a, x, y), envelope_mul(a, y, x));
      if (first_nonzero(a, anti, &report.witness, "xy + yx = 0")) return report;
      GenericVec z = generic_element(a, 2);
      GenericVec jac = add(add(envelope_mul(a, envelope_mul(a, x, y), z),
                               envelope_mul(a, envelope_mul(a, y, z), x)),
                           envelope_mul(a, envelope_mul(a, z, x), y));
      if (first_nonzero(a, jac, &report.witness, "Jacobi")) return report;
      break;
    }
  }
  report.ok = true;
  return report;
}

}  // namespace superdelta
