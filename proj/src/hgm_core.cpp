#include "motiveforge/hgm_core.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "motiveforge/error.hpp"
#include "motiveforge/poly.hpp"

namespace mforge {

namespace {

// Multiplicity of Phi_n in a cyclotomic multiset, after checking packets are complete.
std::map<long, int> cyclotomic_indices(const std::vector<mpq_class>& params, const char* which) {
  std::map<mpq_class, int> count;
  for (auto& a : params) ++count[a];
  std::map<long, int> out;
  for (auto& [a, mult] : count) {
    long n = a.get_den().get_si();
    // Every b/n with gcd(b,n)=1 must occur with the same multiplicity.
    for (long b = 1; b <= n; ++b) {
      if (std::gcd(b, n) != 1) continue;
      mpq_class x(b, n);
      auto it = count.find(x);
      if (it == count.end() || it->second != mult) {
        throw Error(ErrorCode::NotCyclotomic,
                    std::string(which) + " is not defined over Q: " + x.get_str() + " has multiplicity " +
                        std::to_string(it == count.end() ? 0 : it->second) + ", expected " + std::to_string(mult));
      }
    }
    // Record once per packet, at its smallest member.
    if (a.get_num() == 1 || n == 1) out[n] = mult;
  }
  return out;
}

}  // namespace

std::vector<mpz_class> cyclotomic_poly(long n) {
  // x^n - 1 = prod_{d | n} Phi_d(x)
  Poly f(n + 1);
  f[0] = -1;
  f[n] = 1;
  for (long d = 1; d < n; ++d) {
    if (n % d) continue;
    Poly q;
    if (!exact_divide(f, cyclotomic_poly(d), q)) throw Error(ErrorCode::InvalidArgument, "cyclotomic recursion");
    f = q;
  }
  return f;
}

std::string HypergeometricData::to_string() const {
  std::ostringstream os;
  for (size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i].get_str();
  os << "|";
  for (size_t i = 0; i < beta.size(); ++i) os << (i ? "," : "") << beta[i].get_str();
  return os.str();
}

int HypergeometricData::weight() const {
  // Z(x) = #{alpha <= x} - #{beta <= x} over the merged sorted list.
  std::vector<std::pair<mpq_class, int>> events;
  for (auto& a : alpha) events.emplace_back(a, 1);
  for (auto& b : beta) events.emplace_back(b, -1);
  std::sort(events.begin(), events.end(), [](auto& x, auto& y) { return x.first < y.first; });
  int z = 0, lo = 0, hi = 0;
  for (size_t i = 0; i < events.size(); ++i) {
    z += events[i].second;
    if (i + 1 < events.size() && events[i + 1].first == events[i].first) continue;
    lo = std::min(lo, z);
    hi = std::max(hi, z);
  }
  return hi - lo - 1;
}

HypergeometricData parse_hypergeometric(const std::vector<mpq_class>& alphaIn, const std::vector<mpq_class>& betaIn) {
  if (alphaIn.empty() || betaIn.empty()) throw Error(ErrorCode::LengthMismatch, "parameter lists must be non-empty");
  if (alphaIn.size() != betaIn.size())
    throw Error(ErrorCode::LengthMismatch, "alpha has " + std::to_string(alphaIn.size()) + " entries, beta has " +
                                               std::to_string(betaIn.size()));
  HypergeometricData d;
  d.alpha = alphaIn;
  d.beta = betaIn;
  for (auto* v : {&d.alpha, &d.beta}) {
    for (auto& x : *v) {
      x.canonicalize();
      if (x <= 0 || x > 1) throw Error(ErrorCode::InvalidArgument, "parameter " + x.get_str() + " not in (0,1]");
    }
    std::sort(v->begin(), v->end());
  }
  for (auto& a : d.alpha)
    if (std::binary_search(d.beta.begin(), d.beta.end(), a))
      throw Error(ErrorCode::Overlap, "parameter " + a.get_str() + " occurs in both alpha and beta");
  d.degree = static_cast<int>(d.alpha.size());
  cyclotomic_indices(d.alpha, "alpha");
  cyclotomic_indices(d.beta, "beta");
  d.lcmDen = 1;
  for (auto* v : {&d.alpha, &d.beta})
    for (auto& x : *v) d.lcmDen = std::lcm(d.lcmDen, x.get_den().get_si());
  auto [P, Q] = gamma_vectors(d);
  d.gammaP = P;
  d.gammaQ = Q;
  mpz_class num = 1, den = 1;
  for (long p : P) num *= ipow(mpz_class(p), p);
  for (long q : Q) den *= ipow(mpz_class(q), q);
  d.M = mpq_class(num, den);
  d.M.canonicalize();
  return d;
}

HypergeometricData parse_hypergeometric(const std::string& alpha, const std::string& beta) {
  return parse_hypergeometric(parse_rational_list(alpha), parse_rational_list(beta));
}

std::pair<std::vector<long>, std::vector<long>> gamma_vectors(const HypergeometricData& data) {
  auto A = cyclotomic_indices(data.alpha, "alpha");
  auto B = cyclotomic_indices(data.beta, "beta");
  long top = 1;
  for (auto& [n, m] : A) top = std::max(top, n);
  for (auto& [n, m] : B) top = std::max(top, n);
  // e(n) = sum_{n | k} gamma_k, solved from the largest level down.
  std::vector<long> e(top + 1, 0), g(top + 1, 0);
  for (auto& [n, m] : A) e[n] += m;
  for (auto& [n, m] : B) e[n] -= m;
  for (long n = top; n >= 1; --n) {
    long s = 0;
    for (long k = 2 * n; k <= top; k += n) s += g[k];
    g[n] = e[n] - s;
  }
  std::vector<long> P, Q;
  for (long n = top; n >= 1; --n) {
    for (long i = 0; i < g[n]; ++i) P.push_back(n);
    for (long i = 0; i < -g[n]; ++i) Q.push_back(n);
  }
  return {P, Q};
}

SeriesTruncation hypergeometric_coefficients(const HypergeometricData& data, int N) {
  if (N < 0) throw Error(ErrorCode::InvalidArgument, "N must be non-negative");
  SeriesTruncation s{data, {}};
  s.coeffs.reserve(N + 1);
  mpq_class a = 1;
  s.coeffs.push_back(a);
  for (int n = 0; n < N; ++n) {
    mpq_class num = 1, den = 1;
    for (auto& x : data.alpha) num *= x + n;
    for (auto& x : data.beta) den *= x + n;
    a *= num / den;
    s.coeffs.push_back(a);
  }
  return s;
}

bool ode_annihilates(const HypergeometricData& data, const std::vector<mpq_class>& A) {
  int N = static_cast<int>(A.size()) - 1;
  // [z^n] (prod(theta + beta_j - 1) - z prod(theta + alpha_j)) F
  for (int n = 0; n <= N - data.degree; ++n) {
    mpq_class lhs = A[n];
    for (auto& b : data.beta) lhs *= b + (n - 1);
    mpq_class rhs = 0;
    if (n > 0) {
      rhs = A[n - 1];
      for (auto& a : data.alpha) rhs *= a + (n - 1);
    }
    if (lhs != rhs) return false;
  }
  return true;
}

bool ode_residual(const HypergeometricData& data, int N) {
  if (N < data.degree) throw Error(ErrorCode::InvalidArgument, "N must be at least the degree");
  return ode_annihilates(data, hypergeometric_coefficients(data, N).coeffs);
}

SpecializationPoint classify_primes(const HypergeometricData& data, const mpq_class& t) {
  if (t == 0) throw Error(ErrorCode::ZeroArgument, "specialization point must be nonzero");
  SpecializationPoint sp;
  sp.t = t;
  for (auto [p, e] : factor(static_cast<u64>(data.lcmDen))) sp.excludedPrimes.insert(p);
  mpq_class tm1 = t - 1;
  const mpz_class parts[] = {data.M.get_num(), data.M.get_den(), t.get_num(), t.get_den(), tm1.get_num(),
                            tm1.get_den()};
  for (const mpz_class* n = parts; n != parts + 6; ++n) {
    if (*n == 0) continue;
    for (u64 p : prime_divisors(*n)) sp.excludedPrimes.insert(p);
  }
  if (tm1 != 0) {
    for (u64 p : prime_divisors(tm1.get_num()))
      if (valuation(tm1.get_num(), p) >= 2) sp.degeneratePrimes.insert(p);
  }
  return sp;
}

}  // namespace mforge
