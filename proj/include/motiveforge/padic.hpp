#pragma once

// Newton polygons and p-adic slope factorization of ordinary quartics.

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "motiveforge/arith.hpp"
#include "motiveforge/hilbert_asai.hpp"
#include "motiveforge/poly.hpp"

namespace mforge {

struct PAdicElement {
  u64 p = 0;
  int N = 0;          // known modulo p^N
  mpz_class value;    // reduced into [0, p^N)
  int valuation = 0;  // min(ord_p(value), N)

  static PAdicElement make(u64 p, int N, const mpz_class& v);
  bool operator==(const PAdicElement& o) const { return p == o.p && N == o.N && value == o.value; }
};

// Slopes of the lower convex hull of (i, ord_p c_i), i.e. valuations of the reciprocal roots.
struct SlopeProfile {
  std::vector<std::pair<mpq_class, int>> slopes;  // ascending, with multiplicity
  std::vector<mpq_class> expanded() const;
  std::string to_string() const;
};

SlopeProfile newton_slopes(const Poly& f, u64 p);
bool is_ordinary(const Poly& quartic, u64 p);

// Slope factorization Q = low * high over Z_p, both with constant term 1, modulo p^N.
struct SlopeFactorization {
  u64 p = 0;
  int N = 0;
  Poly low;   // reciprocal roots of slope 0 and 1
  Poly high;  // reciprocal roots of slope 3 and 4
  PAdicElement delta0, delta1;
  PAdicElement product;  // delta0 * delta1
};

SlopeFactorization slope_factorization(const Poly& quartic, u64 p, int N = 20);
PAdicElement slope_split(const Poly& quartic, u64 p, int N = 20);

// Hecke eigenvalue candidates alpha + p^w0/alpha for both square roots alpha of delta0 delta1 / p.
struct ApCandidates {
  u64 p = 0;
  int N = 0;  // candidates known modulo p^N
  PAdicElement alpha;
  mpz_class plus, minus;
};
ApCandidates recover_ap(const Poly& quartic, u64 p, int N = 20, int w0 = 3);

// Images of a + b sqrt(D) in Z/p^N under both embeddings sqrt(D) -> +-r. Empty when D is not a square mod p.
std::vector<mpz_class> embed_quadratic(const QuadElement& x, u64 p, int N);

}  // namespace mforge
