#include "motiveforge/ffield.hpp"

#include <map>
#include <mutex>
#include <random>
#include <tuple>

#include "motiveforge/error.hpp"

namespace mforge {

namespace {

using PolyP = std::vector<u64>;  // coefficients mod p, low degree first

void trim_p(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// a*b mod (monic m) over F_p
PolyP mulmod_p(const PolyP& a, const PolyP& b, const PolyP& m, u64 p) {
  size_t f = m.size() - 1;
  if (a.empty() || b.empty()) return {};
  std::vector<u64> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  for (size_t k = r.size(); k-- > f;) {
    u64 c = r[k];
    if (!c) continue;
    for (size_t i = 0; i <= f; ++i) r[k - f + i] = (r[k - f + i] + p - mulmod(c, m[i], p)) % p;
  }
  if (r.size() > f) r.resize(f);
  trim_p(r);
  return r;
}

PolyP powmod_p(PolyP base, u64 e, const PolyP& m, u64 p) {
  PolyP r{1};
  while (e) {
    if (e & 1) r = mulmod_p(r, base, m, p);
    e >>= 1;
    if (e) base = mulmod_p(base, base, m, p);
  }
  return r;
}

PolyP mod_p(PolyP a, const PolyP& b, u64 p) {
  trim_p(a);
  size_t db = b.size() - 1;
  u64 inv = invmod(b.back(), p);
  while (!a.empty() && a.size() - 1 >= db) {
    u64 c = mulmod(a.back(), inv, p);
    size_t shift = a.size() - 1 - db;
    for (size_t i = 0; i <= db; ++i) a[shift + i] = (a[shift + i] + p - mulmod(c, b[i], p)) % p;
    trim_p(a);
  }
  return a;
}

PolyP gcd_p(PolyP a, PolyP b, u64 p) {
  trim_p(a);
  trim_p(b);
  while (!b.empty()) {
    PolyP r = mod_p(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// X^{p^k} mod m
PolyP frobenius_power(const PolyP& m, u64 p, int k) {
  PolyP h{0, 1};
  for (int i = 0; i < k; ++i) h = powmod_p(h, p, m, p);
  return h;
}

bool rabin_irreducible(const PolyP& m, u64 p) {
  int f = static_cast<int>(m.size()) - 1;
  PolyP x{0, 1};
  PolyP hf = frobenius_power(m, p, f);
  PolyP diff = hf;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = (diff[1] + p - 1) % p;
  trim_p(diff);
  if (!diff.empty()) return false;
  for (auto [l, e] : factor(static_cast<u64>(f))) {
    PolyP h = frobenius_power(m, p, f / static_cast<int>(l));
    h.resize(std::max<size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim_p(h);
    PolyP g = gcd_p(m, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

mp::Complex rounded(const mp::Complex& z, mp::Precision prec) {
  mp::Complex r(prec);
  mpfr_set(r.re.get(), z.re.get(), MPFR_RNDN);
  mpfr_set(r.im.get(), z.im.get(), MPFR_RNDN);
  return r;
}

std::vector<mp::Complex> roots_of_unity(u64 n, u64 count, mp::Precision prec) {
  const mp::Precision work = prec + 32;
  std::vector<mp::Complex> out;
  out.reserve(count);
  mp::Complex step = mp::unit_root(1, static_cast<long>(n), work);
  mp::Complex cur(mp::Real(1, work), mp::Real(0, work));
  mp::Real t1(work), t2(work);
  for (u64 j = 0; j < count; ++j) {
    if (j % 128 == 0 && j) cur = mp::unit_root(static_cast<long>(j), static_cast<long>(n), work);
    out.push_back(rounded(cur, prec));
    mp::mul_into(cur, cur, step, t1, t2);
  }
  return out;
}

}  // namespace

std::uint32_t FieldContext::mul(std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  return expTable[(static_cast<u64>(logTable[a]) + logTable[b]) % (q - 1)];
}

std::uint32_t FieldContext::from_integer(const mpz_class& n) const {
  mpz_class r = n % static_cast<unsigned long>(p);
  if (r < 0) r += static_cast<unsigned long>(p);
  return static_cast<std::uint32_t>(r.get_ui());
}

FieldContext build_field(u64 p, int f, u64 seed, u64 cap) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  if (f < 1) throw Error(ErrorCode::InvalidArgument, "extension degree must be positive");
  u64 q = 1;
  for (int i = 0; i < f; ++i) {
    if (q > cap / p) throw Error(ErrorCode::TooLarge, "field size exceeds cap " + std::to_string(cap));
    q *= p;
  }
  FieldContext ctx;
  ctx.p = p;
  ctx.f = f;
  ctx.q = q;
  ctx.seed = seed;
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + p * 1315423911ULL + static_cast<u64>(f));
  auto qfactors = factor(q - 1);

  if (f == 1) {
    std::vector<u64> roots;
    for (u64 g = 1; g < p; ++g) {
      bool ok = true;
      for (auto [l, e] : qfactors)
        if (powmod(g, (q - 1) / l, p) == 1) ok = false;
      if (ok) roots.push_back(g);
      if (ok && seed == 0) break;
    }
    ctx.generator = static_cast<std::uint32_t>(seed == 0 ? roots.front() : roots[rng() % roots.size()]);
  } else {
    // Seeded search for an irreducible modulus in which X is primitive.
    std::uniform_int_distribution<u64> digit(0, p - 1);
    for (;;) {
      PolyP m(f + 1);
      for (int i = 0; i < f; ++i) m[i] = digit(rng);
      m[f] = 1;
      if (m[0] == 0) continue;
      if (!rabin_irreducible(m, p)) continue;
      bool primitive = true;
      for (auto [l, e] : qfactors) {
        PolyP h = powmod_p(PolyP{0, 1}, (q - 1) / l, m, p);
        if (h.size() == 1 && h[0] == 1) {
          primitive = false;
          break;
        }
      }
      if (!primitive) continue;
      ctx.modulus = m;
      break;
    }
    ctx.generator = static_cast<std::uint32_t>(p);  // the class of X
  }

  ctx.logTable.assign(q, 0);
  ctx.expTable.assign(q - 1, 0);
  if (f == 1) {
    u64 cur = 1;
    for (u64 k = 0; k + 1 < q; ++k) {
      ctx.expTable[k] = static_cast<std::uint32_t>(cur);
      ctx.logTable[cur] = static_cast<std::uint32_t>(k);
      cur = cur * ctx.generator % p;
    }
    ctx.traceTable.resize(q);
    for (u64 x = 0; x < q; ++x) ctx.traceTable[x] = static_cast<std::uint32_t>(x);
    return ctx;
  }

  const auto& m = ctx.modulus;
  std::vector<u64> cur(f, 0);
  cur[0] = 1;
  std::vector<u64> pw(f);
  pw[0] = 1;
  for (int i = 1; i < f; ++i) pw[i] = pw[i - 1] * p;
  for (u64 k = 0; k + 1 < q; ++k) {
    u64 code = 0;
    for (int i = 0; i < f; ++i) code += cur[i] * pw[i];
    ctx.expTable[k] = static_cast<std::uint32_t>(code);
    ctx.logTable[code] = static_cast<std::uint32_t>(k);
    // multiply by X
    u64 top = cur[f - 1];
    for (int i = f - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top)
      for (int i = 0; i < f; ++i) cur[i] = (cur[i] + p - top * m[i] % p) % p;
  }

  // Tr(X^i) is the trace of multiplication by X^i: sum_j [X^j] X^{i+j}.
  std::vector<PolyP> powers(2 * f - 1);
  powers[0] = PolyP{1};
  for (int k = 1; k < 2 * f - 1; ++k) powers[k] = mulmod_p(powers[k - 1], PolyP{0, 1}, m, p);
  std::vector<u64> basisTrace(f, 0);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j) {
      const PolyP& h = powers[i + j];
      if (static_cast<size_t>(j) < h.size()) basisTrace[i] = (basisTrace[i] + h[j]) % p;
    }
  ctx.traceTable.resize(q);
  for (u64 x = 0; x < q; ++x) {
    u64 t = 0, c = x;
    for (int i = 0; i < f; ++i) {
      t += (c % p) * basisTrace[i];
      c /= p;
    }
    ctx.traceTable[x] = static_cast<std::uint32_t>(t % p);
  }
  return ctx;
}

std::vector<mp::Complex> unit_root_table(u64 n, mp::Precision prec) { return roots_of_unity(n, n, prec); }

void fft_inplace(std::vector<mp::Complex>& a, int sign, mp::Precision prec) {
  const size_t L = a.size();
  if (L <= 1) return;
  for (size_t i = 1, j = 0; i < L; ++i) {
    size_t bit = L >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      mpfr_swap(a[i].re.get(), a[j].re.get());
      mpfr_swap(a[i].im.get(), a[j].im.get());
    }
  }
  std::vector<mp::Complex> tw = roots_of_unity(L, L / 2, prec);
  if (sign < 0)
    for (auto& w : tw) mpfr_neg(w.im.get(), w.im.get(), MPFR_RNDN);
  mp::Complex tmp(prec);
  mp::Real t1(prec), t2(prec);
  for (size_t len = 2; len <= L; len <<= 1) {
    size_t half = len / 2, step = L / len;
    for (size_t start = 0; start < L; start += len) {
      for (size_t j = 0; j < half; ++j) {
        mp::Complex& x = a[start + j];
        mp::Complex& y = a[start + j + half];
        mp::mul_into(tmp, y, tw[j * step], t1, t2);
        mpfr_sub(y.re.get(), x.re.get(), tmp.re.get(), MPFR_RNDN);
        mpfr_sub(y.im.get(), x.im.get(), tmp.im.get(), MPFR_RNDN);
        mpfr_add(x.re.get(), x.re.get(), tmp.re.get(), MPFR_RNDN);
        mpfr_add(x.im.get(), x.im.get(), tmp.im.get(), MPFR_RNDN);
      }
    }
  }
}

GaussTable gauss_table(const FieldContext& ctx, mp::Precision prec, GaussMethod method) {
  if (prec < 64) throw Error(ErrorCode::PrecisionTooLow, "Gauss tables need at least 64 bits");
  GaussTable tab;
  tab.q = ctx.q;
  tab.p = ctx.p;
  tab.f = ctx.f;
  tab.seed = ctx.seed;
  tab.precisionBits = prec;
  const u64 n = ctx.q - 1;
  const mp::Precision work = prec + 16;
  std::vector<mp::Complex> psi = roots_of_unity(ctx.p, ctx.p, work);
  auto psi_of_power = [&](u64 k) -> const mp::Complex& { return psi[ctx.traceTable[ctx.expTable[k]]]; };
  std::vector<mp::Complex> out;
  out.reserve(n);

  if (method == GaussMethod::naive) {
    std::vector<mp::Complex> zeta = roots_of_unity(n, n, work);
    mp::Complex acc(work), tmp(work);
    mp::Real t1(work), t2(work);
    for (u64 m = 0; m < n; ++m) {
      mpfr_set_zero(acc.re.get(), 1);
      mpfr_set_zero(acc.im.get(), 1);
      for (u64 k = 0; k < n; ++k) {
        mp::mul_into(tmp, psi_of_power(k), zeta[(k * m) % n], t1, t2);
        mpfr_add(acc.re.get(), acc.re.get(), tmp.re.get(), MPFR_RNDN);
        mpfr_add(acc.im.get(), acc.im.get(), tmp.im.get(), MPFR_RNDN);
      }
      out.push_back(rounded(acc, prec));
    }
  } else {
    // Chirp transform: km = (k^2 + m^2 - (m-k)^2)/2 with w = e^{pi i/n}.
    std::vector<mp::Complex> w = roots_of_unity(2 * n, 2 * n, work);
    auto chirp = [&](u64 k) -> const mp::Complex& { return w[(k * k) % (2 * n)]; };
    size_t L = 1;
    while (L < 2 * n - 1) L <<= 1;
    std::vector<mp::Complex> u, v;
    u.reserve(L);
    v.reserve(L);
    for (size_t i = 0; i < L; ++i) {
      u.emplace_back(work);
      v.emplace_back(work);
    }
    mp::Real t1(work), t2(work);
    for (u64 k = 0; k < n; ++k) mp::mul_into(u[k], psi_of_power(k), chirp(k), t1, t2);
    for (u64 j = 0; j < n; ++j) {
      const mp::Complex& c = chirp(j);
      mpfr_set(v[j].re.get(), c.re.get(), MPFR_RNDN);
      mpfr_neg(v[j].im.get(), c.im.get(), MPFR_RNDN);
      if (j) {
        mpfr_set(v[L - j].re.get(), v[j].re.get(), MPFR_RNDN);
        mpfr_set(v[L - j].im.get(), v[j].im.get(), MPFR_RNDN);
      }
    }
    fft_inplace(u, -1, work);
    fft_inplace(v, -1, work);
    for (size_t i = 0; i < L; ++i) mp::mul_into(u[i], u[i], v[i], t1, t2);
    v.clear();
    v.shrink_to_fit();
    fft_inplace(u, +1, work);
    mp::Complex tmp(work);
    for (u64 m = 0; m < n; ++m) {
      mpfr_div_ui(u[m].re.get(), u[m].re.get(), L, MPFR_RNDN);
      mpfr_div_ui(u[m].im.get(), u[m].im.get(), L, MPFR_RNDN);
      mp::mul_into(tmp, u[m], chirp(m), t1, t2);
      out.push_back(rounded(tmp, prec));
    }
  }
  tab.values = std::move(out);
  return tab;
}

namespace {
std::mutex g_cache_mutex;
std::map<std::tuple<u64, int, u64>, std::shared_ptr<const FieldContext>> g_fields;
std::map<std::tuple<u64, int, u64, long>, std::shared_ptr<const GaussTable>> g_tables;
std::vector<std::tuple<u64, int, u64, long>> g_table_order;
constexpr size_t kMaxCachedTables = 8;
}  // namespace

std::shared_ptr<const FieldContext> cached_field(u64 p, int f, u64 seed) {
  auto key = std::make_tuple(p, f, seed);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_fields.find(key);
    if (it != g_fields.end()) return it->second;
  }
  auto ctx = std::make_shared<const FieldContext>(build_field(p, f, seed));
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  // Large fields are rebuilt on demand instead of pinned in memory.
  if (ctx->q <= (u64{1} << 20)) g_fields.emplace(key, ctx);
  return ctx;
}

std::shared_ptr<const GaussTable> cached_gauss_table(const FieldContext& ctx, mp::Precision prec) {
  auto key = std::make_tuple(ctx.p, ctx.f, ctx.seed, static_cast<long>(prec));
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_tables.find(key);
    if (it != g_tables.end()) return it->second;
  }
  auto tab = std::make_shared<const GaussTable>(gauss_table(ctx, prec, GaussMethod::dft));
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  if (!g_tables.count(key)) {
    g_tables.emplace(key, tab);
    g_table_order.push_back(key);
    while (g_table_order.size() > kMaxCachedTables) {
      g_tables.erase(g_table_order.front());
      g_table_order.erase(g_table_order.begin());
    }
  }
  return tab;
}

void clear_field_caches() {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_fields.clear();
  g_tables.clear();
  g_table_order.clear();
}

}  // namespace mforge
