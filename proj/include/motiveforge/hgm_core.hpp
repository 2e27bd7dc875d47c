#pragma once

#include <gmpxx.h>

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "motiveforge/arith.hpp"

namespace mforge {

struct HypergeometricData {
  std::vector<mpq_class> alpha;  // sorted ascending
  std::vector<mpq_class> beta;
  int degree = 0;
  std::vector<long> gammaP;  // descending
  std::vector<long> gammaQ;
  mpq_class M;
  long lcmDen = 1;

  // "1/2,1/4,3/4|1,1,1"
  std::string to_string() const;
  // Motivic weight read off the interlacing of alpha and beta.
  int weight() const;
};

struct SpecializationPoint {
  mpq_class t;
  std::set<u64> excludedPrimes;
  std::set<u64> degeneratePrimes;

  bool is_good(u64 p) const { return !excludedPrimes.count(p); }
  bool is_degenerate(u64 p) const { return degeneratePrimes.count(p) != 0; }
};

struct SeriesTruncation {
  HypergeometricData data;
  std::vector<mpq_class> coeffs;  // A_0..A_N
};

HypergeometricData parse_hypergeometric(const std::vector<mpq_class>& alpha, const std::vector<mpq_class>& beta);
HypergeometricData parse_hypergeometric(const std::string& alpha, const std::string& beta);

std::pair<std::vector<long>, std::vector<long>> gamma_vectors(const HypergeometricData& data);

SeriesTruncation hypergeometric_coefficients(const HypergeometricData& data, int N);

// True iff the hypergeometric operator kills the truncated series through z^{N-d}.
bool ode_residual(const HypergeometricData& data, int N);
bool ode_annihilates(const HypergeometricData& data, const std::vector<mpq_class>& coeffs);

SpecializationPoint classify_primes(const HypergeometricData& data, const mpq_class& t);

// Exact products of cyclotomic polynomials over Q, used as an identity oracle.
std::vector<mpz_class> cyclotomic_poly(long n);

}  // namespace mforge
