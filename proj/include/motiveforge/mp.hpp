#pragma once

// Thin RAII layer over MPFR. Binary operators produce a result at the larger
// of the operand precisions; kernels that care about allocation call the
// mpfr_* functions directly on get().

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace mforge::mp {

using Precision = mpfr_prec_t;

class Real {
 public:
  explicit Real(Precision prec = 64);
  Real(long value, Precision prec);
  Real(const mpz_class& value, Precision prec);
  Real(const mpq_class& value, Precision prec);
  Real(const std::string& decimal, Precision prec);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  Precision precision() const { return mpfr_get_prec(value_); }

  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(value_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  // Nearest integer (ties away from zero).
  mpz_class round() const;
  // Decimal rendering with `digits` significant digits.
  std::string to_string(int digits) const;

  Real& operator+=(const Real& rhs);
  Real& operator-=(const Real& rhs);
  Real& operator*=(const Real& rhs);
  Real& operator/=(const Real& rhs);
  Real operator-() const;

 private:
  mpfr_t value_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator*(const Real& a, long b);
Real operator/(const Real& a, long b);
bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real pow(const Real& base, const Real& exponent);
Real pow(const Real& base, long exponent);
Real gamma(const Real& x);
Real pi(Precision prec);

// Bits needed to carry `digits` decimal digits.
Precision bits_for_digits(int digits);

struct Complex {
  Real re;
  Real im;

  explicit Complex(Precision prec = 64) : re(prec), im(prec) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  Precision precision() const { return re.precision(); }
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex conj(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real abs(const Complex& z);
Complex exp(const Complex& z);
Complex pow(const Complex& z, long exponent);
// Principal square root.
Complex sqrt(const Complex& z);
// e^{2 pi i num/den}
Complex unit_root(long num, long den, Precision prec);

// In-place fused operations used by hot loops: r = a*b with scratch space.
void mul_into(Complex& r, const Complex& a, const Complex& b, Real& t1, Real& t2);

}  // namespace mforge::mp
