#include "motiveforge/mp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mforge::mp {

namespace {
Precision max_prec(const Real& a, const Real& b) {
  return std::max(a.precision(), b.precision());
}
}  // namespace

Real::Real(Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

Real::Real(long value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_si(value_, value, MPFR_RNDN);
}

Real::Real(const mpz_class& value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_z(value_, value.get_mpz_t(), MPFR_RNDN);
}

Real::Real(const mpq_class& value, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_q(value_, value.get_mpq_t(), MPFR_RNDN);
}

Real::Real(const std::string& decimal, Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_str(value_, decimal.c_str(), 10, MPFR_RNDN);
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

mpz_class Real::round() const {
  mpz_class out;
  mpfr_t tmp;
  mpfr_init2(tmp, precision());
  mpfr_round(tmp, value_);
  mpfr_get_z(out.get_mpz_t(), tmp, MPFR_RNDN);
  mpfr_clear(tmp);
  return out;
}

std::string Real::to_string(int digits) const {
  std::vector<char> buf(static_cast<size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

Real& Real::operator+=(const Real& rhs) {
  mpfr_add(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& rhs) {
  mpfr_sub(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& rhs) {
  mpfr_mul(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& rhs) {
  mpfr_div(value_, value_, rhs.value_, MPFR_RNDN);
  return *this;
}
Real Real::operator-() const {
  Real r(precision());
  mpfr_neg(r.get(), value_, MPFR_RNDN);
  return r;
}

Real operator+(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, long b) {
  Real r(a.precision());
  mpfr_mul_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, long b) {
  Real r(a.precision());
  mpfr_div_si(r.get(), a.get(), b, MPFR_RNDN);
  return r;
}
bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }

Real abs(const Real& x) {
  Real r(x.precision());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real sqrt(const Real& x) {
  Real r(x.precision());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real exp(const Real& x) {
  Real r(x.precision());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real log(const Real& x) {
  Real r(x.precision());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real sin(const Real& x) {
  Real r(x.precision());
  mpfr_sin(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real cos(const Real& x) {
  Real r(x.precision());
  mpfr_cos(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real pow(const Real& base, const Real& exponent) {
  Real r(max_prec(base, exponent));
  mpfr_pow(r.get(), base.get(), exponent.get(), MPFR_RNDN);
  return r;
}
Real pow(const Real& base, long exponent) {
  Real r(base.precision());
  mpfr_pow_si(r.get(), base.get(), exponent, MPFR_RNDN);
  return r;
}
Real gamma(const Real& x) {
  Real r(x.precision());
  mpfr_gamma(r.get(), x.get(), MPFR_RNDN);
  return r;
}
Real pi(Precision prec) {
  Real r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Precision bits_for_digits(int digits) {
  return static_cast<Precision>(std::ceil(digits * 3.3219280948873623)) + 16;
}

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator/(const Complex& a, const Complex& b) {
  Real d = norm(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
Complex conj(const Complex& z) { return {z.re, -z.im}; }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
Real abs(const Complex& z) {
  Real r(z.precision());
  mpfr_hypot(r.get(), z.re.get(), z.im.get(), MPFR_RNDN);
  return r;
}

Complex exp(const Complex& z) {
  Real m = exp(z.re);
  Real s(z.precision()), c(z.precision());
  mpfr_sin_cos(s.get(), c.get(), z.im.get(), MPFR_RNDN);
  return {m * c, m * s};
}

Complex pow(const Complex& z, long exponent) {
  Precision prec = z.precision();
  Complex result(Real(1, prec), Real(0, prec));
  Complex base = z;
  bool invert = exponent < 0;
  unsigned long e = invert ? static_cast<unsigned long>(-exponent) : static_cast<unsigned long>(exponent);
  while (e) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  if (invert) result = Complex(Real(1, prec), Real(0, prec)) / result;
  return result;
}

Complex sqrt(const Complex& z) {
  Precision prec = z.precision();
  Real r = abs(z);
  if (r.is_zero()) return Complex(prec);
  // Re sqrt = sqrt((r + x)/2), Im sqrt = sign(y) sqrt((r - x)/2)
  Real re = sqrt((r + z.re) / 2);
  Real im = sqrt((r - z.re) / 2);
  if (z.im.sign() < 0) im = -im;
  return {re, im};
}

Complex unit_root(long num, long den, Precision prec) {
  Real angle = pi(prec) * (2 * num);
  angle /= Real(den, prec);
  Real s(prec), c(prec);
  mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
  return {c, s};
}

void mul_into(Complex& r, const Complex& a, const Complex& b, Real& t1, Real& t2) {
  mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(r.im.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), r.im.get(), t2.get(), MPFR_RNDN);
  mpfr_swap(r.re.get(), t1.get());
}

}  // namespace mforge::mp
