#include "superdelta/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace superdelta {

namespace {

[[noreturn]] void bad_field_mix(const FieldDesc& a, const FieldDesc& b) {
  throw std::invalid_argument("field mismatch: " + a.str() + " vs " + b.str());
}

void require_same_field(const Scalar& a, const Scalar& b) {
  if (!(a.field() == b.field())) bad_field_mix(a.field(), b.field());
}

}  // namespace

std::string FieldDesc::str() const {
  return is_rational() ? "Q" : "F" + std::to_string(p);
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  // deterministic Miller-Rabin for 64-bit inputs
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = fp::pow(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = fp::mul(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

FieldDesc FieldDesc::prime_field(std::uint64_t p) {
  if (p < 3) throw std::invalid_argument("prime field needs p >= 3");
  if (p % 2 == 0) throw std::invalid_argument("characteristic 2 not supported");
  if (p >= (std::uint64_t{1} << 62))
    throw std::invalid_argument("prime modulus must fit in 62 bits");
  if (!is_prime_u64(p)) {
    throw std::invalid_argument(std::to_string(p) + " is not prime");
  }
  return FieldDesc{FieldKind::PrimeField, p};
}

namespace fp {

std::uint64_t add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;  // no overflow: p < 2^62 enforced by FieldDesc
  return s >= p ? s - p : s;
}

std::uint64_t sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(
      static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  while (e) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t inv(std::uint64_t a, std::uint64_t p) {
  if (a == 0) throw std::domain_error("inverse of zero in F" + std::to_string(p));
  return pow(a, p - 2, p);
}

}  // namespace fp

Scalar Scalar::zero(const FieldDesc& f) {
  return f.is_rational() ? Scalar(f, mpq_class(0)) : Scalar(f, std::uint64_t{0});
}

Scalar Scalar::one(const FieldDesc& f) {
  return f.is_rational() ? Scalar(f, mpq_class(1)) : Scalar(f, std::uint64_t{1});
}

Scalar Scalar::from_int(const FieldDesc& f, long long v) {
  if (f.is_rational()) return Scalar(f, mpq_class(static_cast<long>(v)));
  long long m = v % static_cast<long long>(f.p);
  if (m < 0) m += static_cast<long long>(f.p);
  return Scalar(f, static_cast<std::uint64_t>(m));
}

Scalar Scalar::from_mpq(mpq_class v) {
  v.canonicalize();
  return Scalar(FieldDesc::rationals(), std::move(v));
}

Scalar Scalar::residue(const FieldDesc& f, std::uint64_t r) {
  if (f.is_rational()) throw std::invalid_argument("residue() needs a prime field");
  return Scalar(f, r % f.p);
}

bool Scalar::is_zero() const {
  if (field_.is_rational()) return std::get<mpq_class>(v_) == 0;
  return std::get<std::uint64_t>(v_) == 0;
}

bool Scalar::is_one() const {
  if (field_.is_rational()) return std::get<mpq_class>(v_) == 1;
  return std::get<std::uint64_t>(v_) == 1;
}

std::string Scalar::str() const {
  if (field_.is_rational()) return std::get<mpq_class>(v_).get_str();
  return std::to_string(std::get<std::uint64_t>(v_));
}

const mpq_class& Scalar::rational() const {
  if (!field_.is_rational()) throw std::logic_error("not a rational scalar");
  return std::get<mpq_class>(v_);
}

std::uint64_t Scalar::residue_value() const {
  if (field_.is_rational()) throw std::logic_error("not a prime-field scalar");
  return std::get<std::uint64_t>(v_);
}

bool Scalar::operator==(const Scalar& o) const {
  return field_ == o.field_ && v_ == o.v_;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  require_same_field(a, b);
  if (a.field_.is_rational()) {
    return Scalar(a.field_, mpq_class(std::get<mpq_class>(a.v_) +
                                      std::get<mpq_class>(b.v_)));
  }
  return Scalar(a.field_, fp::add(std::get<std::uint64_t>(a.v_),
                                  std::get<std::uint64_t>(b.v_), a.field_.p));
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  require_same_field(a, b);
  if (a.field_.is_rational()) {
    return Scalar(a.field_, mpq_class(std::get<mpq_class>(a.v_) -
                                      std::get<mpq_class>(b.v_)));
  }
  return Scalar(a.field_, fp::sub(std::get<std::uint64_t>(a.v_),
                                  std::get<std::uint64_t>(b.v_), a.field_.p));
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  require_same_field(a, b);
  if (a.field_.is_rational()) {
    return Scalar(a.field_, mpq_class(std::get<mpq_class>(a.v_) *
                                      std::get<mpq_class>(b.v_)));
  }
  return Scalar(a.field_, fp::mul(std::get<std::uint64_t>(a.v_),
                                  std::get<std::uint64_t>(b.v_), a.field_.p));
}

Scalar operator/(const Scalar& a, const Scalar& b) {
  require_same_field(a, b);
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.field_.is_rational()) {
    return Scalar(a.field_, mpq_class(std::get<mpq_class>(a.v_) /
                                      std::get<mpq_class>(b.v_)));
  }
  return Scalar(a.field_,
                fp::mul(std::get<std::uint64_t>(a.v_),
                        fp::inv(std::get<std::uint64_t>(b.v_), a.field_.p),
                        a.field_.p));
}

Scalar Scalar::operator-() const {
  if (field_.is_rational()) return Scalar(field_, mpq_class(-std::get<mpq_class>(v_)));
  return Scalar(field_, fp::sub(0, std::get<std::uint64_t>(v_), field_.p));
}

Scalar Scalar::inv() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  if (field_.is_rational()) {
    return Scalar(field_, mpq_class(1 / std::get<mpq_class>(v_)));
  }
  return Scalar(field_, fp::inv(std::get<std::uint64_t>(v_), field_.p));
}

namespace {

// "±digits" or "±digits/digits"; returns num/den digit spans
struct ParsedFraction {
  bool neg = false;
  std::string num, den;  // den empty when no '/'
};

ParsedFraction split_fraction(std::string_view text) {
  ParsedFraction out;
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    out.neg = text[i] == '-';
    ++i;
  }
  std::size_t start = i;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == start) throw std::invalid_argument("bad scalar literal: '" + std::string(text) + "'");
  out.num = std::string(text.substr(start, i - start));
  if (i < text.size()) {
    if (text[i] != '/') throw std::invalid_argument("bad scalar literal: '" + std::string(text) + "'");
    ++i;
    std::size_t dstart = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == dstart || i != text.size()) {
      throw std::invalid_argument("bad scalar literal: '" + std::string(text) + "'");
    }
    out.den = std::string(text.substr(dstart, i - dstart));
  }
  return out;
}

std::uint64_t mpz_mod_u64(const mpz_class& v, std::uint64_t p) {
  mpz_class r;
  mpz_class m(std::to_string(p));
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());  // non-negative
  return std::stoull(r.get_str());
}

}  // namespace

Scalar parse_scalar(std::string_view text, const FieldDesc& field) {
  ParsedFraction f = split_fraction(text);
  mpz_class num(f.num);
  if (f.neg) num = -num;
  mpz_class den = f.den.empty() ? mpz_class(1) : mpz_class(f.den);
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  if (field.is_rational()) {
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar::from_mpq(std::move(q));
  }
  std::uint64_t n = mpz_mod_u64(num, field.p);
  std::uint64_t d = mpz_mod_u64(den, field.p);
  if (d == 0) throw std::invalid_argument("denominator divisible by p in '" + std::string(text) + "'");
  return Scalar::residue(field, fp::mul(n, fp::inv(d, field.p), field.p));
}

Scalar half(const FieldDesc& field) {
  return Scalar::one(field) / Scalar::from_int(field, 2);
}

}  // namespace superdelta
