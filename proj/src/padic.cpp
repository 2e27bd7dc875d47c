#include "motiveforge/padic.hpp"

#include <sstream>

#include "motiveforge/error.hpp"

namespace mforge {

PAdicElement PAdicElement::make(u64 p, int N, const mpz_class& v) {
  PAdicElement e;
  e.p = p;
  e.N = N;
  mpz_class mod = ipow(p, N);
  e.value = v % mod;
  if (e.value < 0) e.value += mod;
  e.valuation = e.value == 0 ? N : mforge::valuation(e.value, p);
  return e;
}

std::vector<mpq_class> SlopeProfile::expanded() const {
  std::vector<mpq_class> out;
  for (auto& [s, m] : slopes)
    for (int i = 0; i < m; ++i) out.push_back(s);
  return out;
}

std::string SlopeProfile::to_string() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (auto& s : expanded()) {
    os << (first ? "" : ",") << mforge::to_string(s);
    first = false;
  }
  os << "}";
  return os.str();
}

SlopeProfile newton_slopes(const Poly& f, u64 p) {
  std::vector<std::pair<int, int>> pts;
  for (size_t i = 0; i < f.size(); ++i)
    if (f[i] != 0) pts.emplace_back(static_cast<int>(i), valuation(f[i], p));
  SlopeProfile prof;
  if (pts.size() < 2) return prof;
  // lower hull by gift wrapping from the left
  size_t cur = 0;
  while (cur + 1 < pts.size()) {
    size_t best = cur + 1;
    mpq_class bestSlope(pts[best].second - pts[cur].second, pts[best].first - pts[cur].first);
    for (size_t j = cur + 2; j < pts.size(); ++j) {
      mpq_class s(pts[j].second - pts[cur].second, pts[j].first - pts[cur].first);
      s.canonicalize();
      if (s <= bestSlope) {
        bestSlope = s;
        best = j;
      }
    }
    bestSlope.canonicalize();
    int len = pts[best].first - pts[cur].first;
    if (!prof.slopes.empty() && prof.slopes.back().first == bestSlope)
      prof.slopes.back().second += len;
    else
      prof.slopes.emplace_back(bestSlope, len);
    cur = best;
  }
  return prof;
}

bool is_ordinary(const Poly& quartic, u64 p) {
  if (degree(quartic) != 4) return false;
  std::vector<mpq_class> want{0, 1, 3, 4};
  return newton_slopes(quartic, p).expanded() == want;
}

namespace {

mpz_class eval_mod(const Poly& g, const mpz_class& x, const mpz_class& mod) {
  mpz_class acc = 0;
  for (size_t i = g.size(); i-- > 0;) acc = (acc * x + g[i]) % mod;
  return acc;
}

Poly derivative(const Poly& g) {
  Poly d;
  for (size_t i = 1; i < g.size(); ++i) d.push_back(g[i] * static_cast<unsigned long>(i));
  return d;
}

mpz_class inverse_mod(const mpz_class& a, const mpz_class& mod) {
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw Error(ErrorCode::PrecisionLoss, "non-invertible element in Hensel step");
  return r;
}

// The unique nonzero simple root of g mod p, lifted to p^M.
mpz_class lift_unit_root(const Poly& g, u64 p, int M) {
  mpz_class pm = p;
  std::vector<u64> roots;
  for (u64 x = 1; x < p; ++x)
    if (eval_mod(g, x, pm) == 0) roots.push_back(x);
  if (roots.size() != 1) throw Error(ErrorCode::NotOrdinary, "expected one unit root mod p, found " + std::to_string(roots.size()));
  Poly dg = derivative(g);
  mpz_class mod = ipow(p, M);
  mpz_class r = roots[0];
  if (eval_mod(dg, r, pm) == 0) throw Error(ErrorCode::PrecisionLoss, "repeated root mod p");
  for (int iter = 0; iter < 64; ++iter) {
    mpz_class v = eval_mod(g, r, mod);
    if (v == 0) return r;
    r = (r - v * inverse_mod(eval_mod(dg, r, mod), mod)) % mod;
    if (r < 0) r += mod;
  }
  throw Error(ErrorCode::PrecisionLoss, "Hensel iteration did not converge");
}

}  // namespace

SlopeFactorization slope_factorization(const Poly& quartic, u64 p, int N) {
  if (!is_ordinary(quartic, p))
    throw Error(ErrorCode::NotOrdinary, "slopes " + newton_slopes(quartic, p).to_string() + " at p = " + std::to_string(p));
  if (N < 2) throw Error(ErrorCode::InvalidArgument, "precision N must be at least 2");
  const int M = N + 4;
  const mpz_class mod = ipow(p, M);
  // Reciprocal roots are the roots of R(X) = X^4 Q(1/X).
  Poly R(quartic.rbegin(), quartic.rend());
  mpz_class d0 = lift_unit_root(R, p, M);
  // Slope-one root: X = pY, R(pY)/p^3 has a unique unit root.
  Poly S(R.size());
  const mpz_class p3 = ipow(p, 3);
  for (size_t i = 0; i < R.size(); ++i) {
    mpz_class c = R[i] * ipow(p, i);
    if (c % p3 != 0) throw Error(ErrorCode::NotOrdinary, "slope-one rescaling not integral");
    S[i] = c / p3;
  }
  mpz_class y = lift_unit_root(S, p, M);
  mpz_class d1 = (y * p) % mod;

  SlopeFactorization out;
  out.p = p;
  out.N = N;
  const mpz_class modN = ipow(p, N);
  auto red = [&](const mpz_class& v) {
    mpz_class r = v % modN;
    return r < 0 ? mpz_class(r + modN) : r;
  };
  out.low = Poly{1, red(-(d0 + d1)), red(d0 * d1)};
  // high = quartic / low as power series to degree 2 (exact factor, so the remainder vanishes)
  Poly lowM{1, -(d0 + d1), d0 * d1};
  Poly inv{1, 0, 0};
  inv[1] = -lowM[1];
  inv[2] = lowM[1] * lowM[1] - lowM[2];
  Poly high(3);
  for (int k = 0; k < 3; ++k) {
    mpz_class acc = 0;
    for (int i = 0; i <= k; ++i) acc += quartic[i] * inv[k - i];
    high[k] = red(acc);
  }
  out.high = high;
  out.delta0 = PAdicElement::make(p, N, d0);
  out.delta1 = PAdicElement::make(p, N, d1);
  out.product = PAdicElement::make(p, N, d0 * d1);
  if (out.product.valuation != 1) throw Error(ErrorCode::PrecisionLoss, "delta0*delta1 does not have valuation 1");
  return out;
}

PAdicElement slope_split(const Poly& quartic, u64 p, int N) { return slope_factorization(quartic, p, N).product; }

ApCandidates recover_ap(const Poly& quartic, u64 p, int N, int w0) {
  if (p == 2) throw Error(ErrorCode::InvalidArgument, "recover_ap needs an odd prime");
  PAdicElement prod = slope_split(quartic, p, N);
  const int Np = N - 1;
  const mpz_class mod = ipow(p, Np);
  mpz_class v = prod.value / p;
  mpz_class alpha;
  if (!sqrt_mod_prime_power(v, p, Np, alpha))
    throw Error(ErrorCode::NotSquare, "delta0*delta1/p is not a square mod " + std::to_string(p));
  ApCandidates out;
  out.p = p;
  out.N = Np;
  out.alpha = PAdicElement::make(p, Np, alpha);
  mpz_class a = (alpha + ipow(p, w0) * inverse_mod(alpha, mod)) % mod;
  out.plus = a;
  out.minus = (mod - a) % mod;
  return out;
}

std::vector<mpz_class> embed_quadratic(const QuadElement& x, u64 p, int N) {
  const mpz_class mod = ipow(p, N);
  auto rat = [&](const mpq_class& q) {
    mpz_class r = (q.get_num() * inverse_mod(q.get_den(), mod)) % mod;
    return r < 0 ? mpz_class(r + mod) : r;
  };
  if (x.b == 0) return {rat(x.a)};
  mpz_class D = x.D;
  D %= mod;
  if (D < 0) D += mod;
  mpz_class r;
  if (D % p == 0 || !sqrt_mod_prime_power(D, p, N, r)) return {};
  std::vector<mpz_class> out;
  for (int s : {1, -1}) {
    mpz_class v = (rat(x.a) + rat(x.b) * r * s) % mod;
    if (v < 0) v += mod;
    out.push_back(v);
  }
  return out;
}

}  // namespace mforge
