#include "motiveforge/hgm_trace.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "motiveforge/error.hpp"

namespace mforge {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::direct: return "direct";
    case Provenance::selfdual_completed: return "selfdual-completed";
    case Provenance::fixture: return "fixture";
    case Provenance::asai: return "asai";
  }
  return "unknown";
}

WeilReport weil_integrality_check(const LocalEulerFactor& factor) {
  WeilReport rep;
  if (factor.provenance == Provenance::fixture || factor.degenerate) {
    rep.skipped = true;
    rep.pass = true;
    rep.detail = factor.degenerate ? "skipped: degenerate prime" : "skipped: bad-prime fixture";
    return rep;
  }
  const Poly& c = factor.coeffs;
  int d = factor.degree();
  if (c.empty() || c[0] != 1) {
    rep.detail = "constant coefficient is not 1";
    return rep;
  }
  double p = static_cast<double>(factor.p);
  for (int i = 1; i <= d; ++i) {
    // |c_i| <= C(d,i) p^{wi/2}
    double bound = std::exp(std::lgamma(d + 1.0) - std::lgamma(i + 1.0) - std::lgamma(d - i + 1.0) +
                            factor.weight * i / 2.0 * std::log(p));
    if (std::fabs(c[i].get_d()) > bound * (1 + 1e-9)) {
      rep.detail = "coefficient c_" + std::to_string(i) + " exceeds the binomial bound";
      return rep;
    }
  }
  long double target = std::pow(static_cast<long double>(p), factor.weight / 2.0L);
  // repeated roots lose half their digits in floating point; test the simple ones
  for (auto& r : reciprocal_roots(squarefree_factor(c))) {
    long double rel = std::fabs(std::abs(r) / target - 1.0L);
    if (rel > 1e-6L) {
      rep.detail = "reciprocal root of modulus " + std::to_string(static_cast<double>(std::abs(r))) +
                   " where " + std::to_string(static_cast<double>(target)) + " was expected";
      return rep;
    }
  }
  rep.pass = true;
  rep.detail = "integral, bounded, all root moduli p^{w/2}";
  return rep;
}

namespace {

// t reduced into the prime field, as a field element code.
std::uint32_t reduce_rational(const mpq_class& t, const FieldContext& ctx) {
  mpz_class p = static_cast<unsigned long>(ctx.p);
  if (mpz_divisible_p(t.get_den().get_mpz_t(), p.get_mpz_t()))
    throw Error(ErrorCode::BadPrime, "denominator of " + t.get_str() + " vanishes mod " + p.get_str());
  mpz_class num = t.get_num() % p, inv;
  if (num < 0) num += p;
  mpz_class den = t.get_den() % p;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
  mpz_class r = num * inv % p;
  if (r == 0) throw Error(ErrorCode::ZeroArgument, t.get_str() + " vanishes mod " + p.get_str());
  return static_cast<std::uint32_t>(r.get_ui());
}

void require_coprime(const HypergeometricData& data, const FieldContext& ctx) {
  if (data.lcmDen % static_cast<long>(ctx.p) == 0)
    throw Error(ErrorCode::BadPrime, "p = " + std::to_string(ctx.p) + " divides the parameter denominators");
}

void add_into(mp::Complex& acc, const mp::Complex& x) {
  mpfr_add(acc.re.get(), acc.re.get(), x.re.get(), MPFR_RNDN);
  mpfr_add(acc.im.get(), acc.im.get(), x.im.get(), MPFR_RNDN);
}

// Integer candidate (or candidate with denominator `den`) for a real value.
bool nearest(const mp::Complex& z, const mpz_class& den, mpq_class& out, double& gap) {
  mp::Real scaled = z.re * mp::Real(den, z.precision());
  mpz_class r = scaled.round();
  mp::Real diff = mp::abs(scaled - mp::Real(r, z.precision()));
  double im = std::fabs(z.im.to_double()) * den.get_d();
  gap = std::max(diff.to_double(), im);
  out = mpq_class(r, den);
  out.canonicalize();
  return gap < 0.01;
}

template <typename Raw>
HqResult round_ladder(const HypergeometricData& data, const FieldContext& ctx, mp::Precision prec, int s0,
                      Raw raw) {
  if (prec == 0) prec = default_precision(data, ctx.q);
  HqResult res;
  mp::Complex value(prec);
  for (int attempt = 0; attempt <= 3; ++attempt) {
    auto table = cached_gauss_table(ctx, prec);
    value = raw(*table);
    res.precisionBits = prec;
    res.retries = attempt;
    if (nearest(value, 1, res.value, res.gap)) return res;
    if (attempt < 3) prec *= 2;
  }
  mpz_class den = ipow(ctx.q, static_cast<unsigned long>(s0));
  if (s0 > 0 && nearest(value, den, res.value, res.gap)) return res;
  throw Error(s0 > 0 ? ErrorCode::DenominatorUnresolved : ErrorCode::RoundingGap,
              "H_" + std::to_string(ctx.q) + " for " + data.to_string() + " not resolved; gap " +
                  std::to_string(res.gap) + " at " + std::to_string(prec) + " bits");
}

int s_of(long m, long n, const std::vector<long>& P, const std::vector<long>& Q) {
  long ord = n / std::gcd(m, n);
  int a = 0, b = 0;
  for (long x : P)
    if (x % ord == 0) ++a;
  for (long x : Q)
    if (x % ord == 0) ++b;
  return std::min(a, b);
}

}  // namespace

mp::Precision default_precision(const HypergeometricData& data, u64 q) {
  double lq = std::log2(static_cast<double>(q));
  double dw = data.degree * data.weight() / 2.0;
  double rs = (data.gammaP.size() + data.gammaQ.size()) / 2.0;
  double bits = std::max(dw, rs) * lq + 64;
  mp::Precision prec = std::max<mp::Precision>(192, static_cast<mp::Precision>(std::ceil(bits)));
  return (prec + 63) / 64 * 64;
}

mp::Complex hq_basic_raw(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx,
                         const GaussTable& table) {
  require_coprime(data, ctx);
  const long n = static_cast<long>(ctx.q - 1);
  std::vector<long> a, b;
  for (auto& x : data.alpha) {
    if (n % x.get_den().get_si()) throw Error(ErrorCode::DivisibilityFails, "alpha(q-1) not integral");
    a.push_back(mpq_class(x * n).get_num().get_si() % n);
  }
  for (auto& x : data.beta) {
    if (n % x.get_den().get_si()) throw Error(ErrorCode::DivisibilityFails, "beta(q-1) not integral");
    b.push_back(mpq_class(x * n).get_num().get_si() % n);
  }
  const mp::Precision prec = table.precisionBits + 16;
  mpq_class arg = t;
  if (data.degree % 2) arg = -arg;
  long L = static_cast<long>(ctx.log(reduce_rational(arg, ctx)));

  // Normalizer prod g(a_j) g(-b_j).
  mp::Complex norm(mp::Real(1, prec), mp::Real(0, prec));
  for (int j = 0; j < data.degree; ++j) norm = norm * table.at(a[j]) * table.at(-b[j]);

  mp::Complex acc(prec), term(prec);
  mp::Real t1(prec), t2(prec);
  for (long m = 0; m < n; ++m) {
    mp::Complex z = mp::unit_root((L * m) % n, n, prec);
    mpfr_set(term.re.get(), z.re.get(), MPFR_RNDN);
    mpfr_set(term.im.get(), z.im.get(), MPFR_RNDN);
    for (int j = 0; j < data.degree; ++j) {
      mp::mul_into(term, term, table.at(m + a[j]), t1, t2);
      mp::mul_into(term, term, table.at(-m - b[j]), t1, t2);
    }
    add_into(acc, term);
  }
  acc = acc / norm;
  mp::Real scale(static_cast<long>(1 - static_cast<long>(ctx.q)), prec);
  return {acc.re / scale, acc.im / scale};
}

mp::Complex hq_general_raw(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx,
                           const GaussTable& table) {
  require_coprime(data, ctx);
  const long n = static_cast<long>(ctx.q - 1);
  const auto& P = data.gammaP;
  const auto& Q = data.gammaQ;
  const mp::Precision prec = table.precisionBits + 16;

  long sumQ = std::accumulate(Q.begin(), Q.end(), 0L);
  mpq_class arg = t / data.M;
  if (sumQ % 2) arg = -arg;
  const long L = static_cast<long>(ctx.log(reduce_rational(arg, ctx)));

  // Distinct gamma entries with multiplicity; Q entries enter with a minus sign.
  std::map<long, int> groups;
  for (long x : P) ++groups[x % n];
  for (long x : Q) ++groups[(n - x % n) % n];
  // groups keyed by the multiplier of m; P and Q collide only if x = -y mod n, which is harmless.
  std::vector<std::pair<long, int>> mults(groups.begin(), groups.end());

  const int s0 = std::min(P.size(), Q.size());
  std::vector<mpz_class> qpow(s0 + 1);
  qpow[0] = 1;
  for (int i = 1; i <= s0; ++i) qpow[i] = qpow[i - 1] * static_cast<unsigned long>(ctx.q);

  mp::Complex acc(prec), term(prec), zeta(prec);
  mp::Complex step = mp::unit_root(L % n, n, prec + 32);
  mp::Complex run(mp::Real(1, prec + 32), mp::Real(0, prec + 32));
  mp::Real t1(prec), t2(prec), u1(prec + 32), u2(prec + 32);
  for (long m = 0; m < n; ++m) {
    if (m % 256 == 0 && m) run = mp::unit_root((L * m) % n, n, prec + 32);
    mpfr_set(term.re.get(), run.re.get(), MPFR_RNDN);
    mpfr_set(term.im.get(), run.im.get(), MPFR_RNDN);
    for (auto& [k, c] : mults) {
      const mp::Complex& g = table.at((k * m) % n);
      for (int i = 0; i < c; ++i) mp::mul_into(term, term, g, t1, t2);
    }
    int s = s_of(m, n, P, Q);
    if (s > 0) {
      mpfr_mul_z(term.re.get(), term.re.get(), qpow[s].get_mpz_t(), MPFR_RNDN);
      mpfr_mul_z(term.im.get(), term.im.get(), qpow[s].get_mpz_t(), MPFR_RNDN);
    }
    add_into(acc, term);
    mp::mul_into(run, run, step, u1, u2);
  }
  // (-1)^{r+s} / ((1-q) q^{s(0)})
  mpz_class denom = mpz_class(1 - static_cast<long>(ctx.q)) * qpow[s0];
  if ((P.size() + Q.size()) % 2) denom = -denom;
  mp::Real d(denom, prec);
  return {acc.re / d, acc.im / d};
}

HqResult hq_basic_detail(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx,
                         mp::Precision prec) {
  return round_ladder(data, ctx, prec, 0, [&](const GaussTable& tab) { return hq_basic_raw(data, t, ctx, tab); });
}

HqResult hq_general_detail(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx,
                           mp::Precision prec) {
  int s0 = static_cast<int>(std::min(data.gammaP.size(), data.gammaQ.size()));
  return round_ladder(data, ctx, prec, s0, [&](const GaussTable& tab) { return hq_general_raw(data, t, ctx, tab); });
}

mpq_class hq_basic(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx) {
  return hq_basic_detail(data, t, ctx).value;
}

mpq_class hq_general(const HypergeometricData& data, const mpq_class& t, const FieldContext& ctx) {
  return hq_general_detail(data, t, ctx).value;
}

namespace {

void check_prime(const HypergeometricData& data, const mpq_class& t, u64 p, const TraceOptions& opts,
                 bool& degenerate) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  auto sp = classify_primes(data, t);
  degenerate = sp.is_degenerate(p);
  if (sp.is_good(p)) return;
  if (degenerate && opts.allowDegenerate) return;
  throw Error(ErrorCode::BadPrime, std::to_string(p) + (degenerate ? " is degenerate (pass allow-degenerate)"
                                                                   : " is not a good prime for t = " + t.get_str()));
}

}  // namespace

TraceSequence trace_sequence(const HypergeometricData& data, const mpq_class& t, u64 p, int rmax,
                             const TraceOptions& opts) {
  bool degenerate = false;
  check_prime(data, t, p, opts, degenerate);
  if (rmax < 1) throw Error(ErrorCode::InvalidArgument, "rmax must be positive");
  TraceSequence seq{data, t, p, {}};
  for (int r = 1; r <= rmax; ++r) {
    auto ctx = cached_field(p, r, opts.seed);
    seq.values.push_back(hq_general_detail(data, t, *ctx, opts.precisionBits).value);
  }
  return seq;
}

Poly factor_from_traces(const std::vector<mpq_class>& traces, int degree) {
  std::vector<mpq_class> sums(traces.begin(), traces.begin() + std::min<size_t>(degree, traces.size()));
  QPoly c = from_power_sums(sums);
  Poly out;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i].get_den() != 1)
      throw Error(ErrorCode::NonIntegral, "coefficient c_" + std::to_string(i) + " = " + c[i].get_str() +
                                              " is not an integer");
    out.push_back(c[i].get_num());
  }
  return out;
}

LocalEulerFactor local_factor_direct(const HypergeometricData& data, const mpq_class& t, u64 p,
                                     const TraceOptions& opts) {
  auto seq = trace_sequence(data, t, p, data.degree, opts);
  LocalEulerFactor lf;
  lf.p = p;
  lf.weight = data.weight();
  lf.provenance = Provenance::direct;
  lf.degenerate = classify_primes(data, t).is_degenerate(p);
  lf.coeffs = factor_from_traces(seq.values, data.degree);
  // exp(-sum H T^r / r) round trip: power sums of the result must reproduce the traces.
  auto back = power_sums(lf.coeffs, data.degree);
  for (int r = 0; r < data.degree; ++r)
    if (mpq_class(back[r]) != seq.values[r])
      throw Error(ErrorCode::NonIntegral, "Newton round trip failed at r = " + std::to_string(r + 1));
  trim(lf.coeffs);
  if (lf.degenerate) {
    // The sums see only d-1 roots; the last one is fixed by the determinant character.
    int k = lf.degree();
    if (k == data.degree - 1 && (data.weight() * data.degree) % 2 == 0) {
      long D = opts.detCharacter ? opts.detCharacter : fit_det_character(data, t, 10, opts.seed);
      int chi = kronecker(D, static_cast<long>(p));
      mpz_class detPart = (k % 2 ? -1 : 1) * lf.coeffs[k];
      mpz_class full = chi * ipow(p, static_cast<unsigned long>(data.weight() * data.degree / 2));
      if (chi != 0 && detPart != 0 && mpz_divisible_p(full.get_mpz_t(), detPart.get_mpz_t())) {
        mpz_class root = full / detPart;
        lf.coeffs = lf.coeffs * poly_linear(1, -root);
      }
    }
    return lf;
  }
  auto rep = weil_integrality_check(lf);
  if (!rep.pass) throw Error(ErrorCode::WeilFail, "p = " + std::to_string(p) + ": " + rep.detail);
  return lf;
}

long fit_det_character(const HypergeometricData& data, const mpq_class& t, int nprimes, u64 seed) {
  // The fit needs several full factors; remember it per (data, t).
  static std::mutex mu;
  static std::map<std::string, long> cache;
  const std::string key = data.to_string() + "@" + to_string(t) + "#" + std::to_string(nprimes) + ":" + std::to_string(seed);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const int d = data.degree;
  auto sp = classify_primes(data, t);
  // det Frob_p = (-1)^d c_d; its sign relative to p^{wd/2} is the character value.
  std::vector<std::pair<u64, int>> signs;
  TraceOptions opts;
  opts.seed = seed;
  for (u64 p = 3; static_cast<int>(signs.size()) < nprimes && p < 2000; p += 2) {
    if (!is_prime(p) || !sp.is_good(p)) continue;
    LocalEulerFactor lf = ipow(p, d) <= mpz_class(static_cast<unsigned long>(1u << 16))
                              ? local_factor_direct(data, t, p, opts)
                              : local_factor_selfdual(data, t, p, d / 2 + 1, opts);
    if (lf.provisional || lf.degree() != d) continue;
    mpz_class det = (d % 2 ? -1 : 1) * lf.coeffs[d];
    signs.emplace_back(p, sgn(det));
  }
  // Candidates: fundamental discriminants supported on -1 and the excluded primes.
  std::vector<long> base{-1};
  for (u64 q : sp.excludedPrimes) base.push_back(static_cast<long>(q));
  std::vector<long> hits;
  for (unsigned mask = 0; mask < (1u << base.size()); ++mask) {
    mpz_class n = 1;
    for (size_t i = 0; i < base.size(); ++i)
      if (mask & (1u << i)) n *= base[i];
    long D = fundamental_discriminant(n);
    bool ok = true;
    for (auto [p, s] : signs)
      if (kronecker(D, static_cast<long>(p)) != s) ok = false;
    if (ok) hits.push_back(D);
  }
  std::sort(hits.begin(), hits.end(), [](long a, long b) { return std::labs(a) < std::labs(b); });
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
  if (hits.empty()) throw Error(ErrorCode::NoConsistentCharacter, "no determinant character fits " + data.to_string());
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = hits.front();
  return hits.front();
}

LocalEulerFactor local_factor_selfdual(const HypergeometricData& data, const mpq_class& t, u64 p, int rmax,
                                       const TraceOptions& opts) {
  const int d = data.degree, w = data.weight();
  if (rmax < (d + 1) / 2) throw Error(ErrorCode::InvalidArgument, "rmax below ceil(degree/2)");
  if (d % 2 && w % 2) throw Error(ErrorCode::InvalidArgument, "odd degree with odd weight has no self-dual form");
  rmax = std::min(rmax, d);
  auto seq = trace_sequence(data, t, p, rmax, opts);
  Poly known = factor_from_traces(seq.values, rmax);
  known.resize(rmax + 1);

  std::vector<LocalEulerFactor> survivors;
  for (int eta : {1, -1}) {
    Poly c(d + 1);
    bool ok = true;
    for (int i = 0; i <= d; ++i) {
      if (2 * i <= d) {
        c[i] = i <= rmax ? known[i] : mpz_class(0);
      } else {
        // c_i = eta p^{w(i - d/2)} c_{d-i}
        int twice = w * (2 * i - d);
        c[i] = eta * ipow(p, static_cast<unsigned long>(twice / 2)) * c[d - i];
      }
    }
    if (d % 2 == 0 && eta == -1 && c[d / 2] != 0) ok = false;
    for (int i = d / 2 + 1; i <= rmax && ok; ++i)
      if (c[i] != known[i]) ok = false;
    if (!ok) continue;
    LocalEulerFactor lf;
    lf.p = p;
    lf.weight = w;
    lf.coeffs = c;
    trim(lf.coeffs);
    lf.provenance = Provenance::selfdual_completed;
    lf.degenerate = classify_primes(data, t).is_degenerate(p);
    if (!lf.degenerate && !weil_integrality_check(lf).pass) continue;
    survivors.push_back(lf);
  }
  if (survivors.empty())
    throw Error(ErrorCode::WeilFail, "no self-dual completion is consistent at p = " + std::to_string(p));
  if (survivors.size() > 1) {
    if (equal(survivors[0].coeffs, survivors[1].coeffs)) return survivors[0];
    survivors[0].provisional = true;
  }
  return survivors[0];
}

LocalEulerFactor local_factor_det(const HypergeometricData& data, const mpq_class& t, u64 p,
                                  const TraceOptions& opts) {
  const int d = data.degree, w = data.weight();
  if (d % 2 == 0 || w % 2) throw Error(ErrorCode::InvalidArgument, "needs odd degree and even weight");
  const int rmax = (d - 1) / 2;
  long D = opts.detCharacter ? opts.detCharacter : fit_det_character(data, t, 10, opts.seed);
  if (classify_primes(data, t).is_degenerate(p)) {
    // one root is missing from the sums; the direct route restores it
    TraceOptions o = opts;
    o.allowDegenerate = true;
    o.detCharacter = D;
    return local_factor_direct(data, t, p, o);
  }
  auto seq = trace_sequence(data, t, p, rmax, opts);
  Poly known = factor_from_traces(seq.values, rmax);
  known.resize(rmax + 1);
  int chi = kronecker(D, static_cast<long>(p));
  if (chi == 0) throw Error(ErrorCode::BadPrime, "determinant character ramifies at p = " + std::to_string(p));
  LocalEulerFactor lf;
  lf.p = p;
  lf.weight = w;
  lf.provenance = Provenance::selfdual_completed;
  Poly c(d + 1);
  for (int i = 0; i <= d; ++i) {
    if (i <= rmax)
      c[i] = known[i];
    else
      c[i] = -chi * ipow(p, static_cast<unsigned long>(w * (2 * i - d) / 2)) * c[d - i];
  }
  lf.coeffs = c;
  trim(lf.coeffs);
  auto rep = weil_integrality_check(lf);
  if (!rep.pass) throw Error(ErrorCode::WeilFail, "p = " + std::to_string(p) + ": " + rep.detail);
  return lf;
}

}  // namespace mforge
