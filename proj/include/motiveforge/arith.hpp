#pragma once

// Elementary integer arithmetic shared by the finite-field, quadratic-field and
// p-adic layers.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mforge {

using u64 = std::uint64_t;
using i64 = std::int64_t;

bool is_prime(u64 n);
std::vector<u64> primes_up_to(u64 n);
std::vector<std::pair<u64, int>> factor(u64 n);
// Trial division; the integers handled here are small heights from the tables.
std::vector<std::pair<mpz_class, int>> factor(const mpz_class& n);
std::vector<u64> prime_divisors(const mpz_class& n);

u64 gcd_u64(u64 a, u64 b);
u64 lcm_u64(u64 a, u64 b);
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);
u64 invmod(u64 a, u64 m);

// ord_p(n) for n != 0.
int valuation(const mpz_class& n, u64 p);
int valuation(const mpq_class& x, u64 p);

// Kronecker symbol (D | n).
int kronecker(long D, long n);

// Squarefree part (sign preserved).
mpz_class squarefree_part(const mpz_class& n);
// Discriminant of Q(sqrt(n)) for n non-square; 1 for squares.
long fundamental_discriminant(const mpz_class& n);
bool is_fundamental_discriminant(long D);

// Square roots modulo p and p^k. Return false when no root exists.
bool sqrt_mod_prime(u64 a, u64 p, u64& root);
bool sqrt_mod_prime_power(const mpz_class& a, u64 p, int k, mpz_class& root);

// Exact rational parsing: "3", "-1/512000", "27/64". Throws ParseError.
mpq_class parse_rational(const std::string& text);
std::vector<mpq_class> parse_rational_list(const std::string& text);
std::string to_string(const mpq_class& x);

mpz_class ipow(const mpz_class& base, unsigned long exp);
mpz_class ipow(u64 base, unsigned long exp);

}  // namespace mforge
