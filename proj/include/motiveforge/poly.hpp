#pragma once

// Dense integer polynomials in T, coefficient i multiplies T^i.

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

namespace mforge {

using Poly = std::vector<mpz_class>;
using QPoly = std::vector<mpq_class>;

void trim(Poly& f);
int degree(const Poly& f);  // -1 for the zero polynomial
Poly poly_one();
Poly poly_linear(const mpz_class& c0, const mpz_class& c1);  // c0 + c1 T

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const mpz_class& c);
Poly pow(const Poly& f, unsigned n);

// Division in Q[T]; false unless b | a with an integral quotient.
bool exact_divide(const Poly& a, const Poly& b, Poly& quotient);
// f(cT).
Poly scale_var(const Poly& f, const mpz_class& c);
// f(T/p^k) when every coefficient is divisible; false otherwise.
bool scale_var_down(const Poly& f, const mpz_class& p, int k, Poly& out);

// f / gcd(f, f'): the same roots, each simple.
Poly squarefree_factor(const Poly& f);

bool equal(const Poly& a, const Poly& b);
std::string to_string(const Poly& f);

// Expressions such as "(1-p^2T)(1+5T+10T^2)" or "1-738*T-41^4*T^2" with p bound.
Poly parse_poly_expr(const std::string& text, long p);

// Power sums s_1..s_n of the reciprocal roots of 1 + c_1 T + ... .
std::vector<mpz_class> power_sums(const Poly& f, int n);
// Inverse of power_sums via Newton's identities: 1 + c_1 T + ... + c_n T^n.
QPoly from_power_sums(const std::vector<mpq_class>& sums);

// Reciprocal roots (roots of T^d f(1/T)) in long double.
std::vector<std::complex<long double>> reciprocal_roots(const Poly& f);

}  // namespace mforge
