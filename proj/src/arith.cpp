#include "motiveforge/arith.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "motiveforge/error.hpp"

namespace mforge {

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }
u64 lcm_u64(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

u64 invmod(u64 a, u64 m) {
  mpz_class r, aa = static_cast<unsigned long>(a), mm = static_cast<unsigned long>(m);
  if (mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), mm.get_mpz_t()) == 0)
    throw Error(ErrorCode::InvalidArgument, "element not invertible");
  return r.get_ui();
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for 64-bit inputs.
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  std::vector<bool> sieve(n + 1, true);
  sieve[0] = sieve[1] = false;
  for (u64 i = 2; i * i <= n; ++i)
    if (sieve[i])
      for (u64 j = i * i; j <= n; j += i) sieve[j] = false;
  for (u64 i = 2; i <= n; ++i)
    if (sieve[i]) out.push_back(i);
  return out;
}

std::vector<std::pair<u64, int>> factor(u64 n) {
  std::vector<std::pair<u64, int>> out;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::pair<mpz_class, int>> factor(const mpz_class& value) {
  std::vector<std::pair<mpz_class, int>> out;
  mpz_class n = abs(value);
  if (n == 0) throw Error(ErrorCode::ZeroArgument, "cannot factor zero");
  for (unsigned long p = 2; mpz_class(p) * p <= n; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) == 0) continue;
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    out.emplace_back(mpz_class(p), e);
    if (p > 100000000UL) throw Error(ErrorCode::TooLarge, "integer too large to factor by trial division");
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<u64> prime_divisors(const mpz_class& n) {
  std::vector<u64> out;
  if (n == 0) return out;
  for (auto& [p, e] : factor(n)) out.push_back(p.get_ui());
  return out;
}

int valuation(const mpz_class& n, u64 p) {
  if (n == 0) throw Error(ErrorCode::ZeroArgument, "valuation of zero");
  mpz_class m = n;
  int v = 0;
  while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
    mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    ++v;
  }
  return v;
}

int valuation(const mpq_class& x, u64 p) {
  return valuation(x.get_num(), p) - valuation(x.get_den(), p);
}

int kronecker(long D, long n) {
  mpz_class d = D;
  return mpz_kronecker_si(d.get_mpz_t(), n);
}

mpz_class squarefree_part(const mpz_class& n) {
  if (n == 0) return 0;
  mpz_class out = n < 0 ? -1 : 1;
  for (auto& [p, e] : factor(n))
    if (e % 2) out *= p;
  return out;
}

long fundamental_discriminant(const mpz_class& n) {
  mpz_class s = squarefree_part(n);
  if (s == 1) return 1;
  long d = s.get_si();
  long m = ((d % 4) + 4) % 4;
  return m == 1 ? d : 4 * d;
}

bool is_fundamental_discriminant(long D) {
  if (D == 1) return true;
  if (D == 0) return false;
  long m = ((D % 4) + 4) % 4;
  if (m == 1) return squarefree_part(D) == D;
  if (m != 0) return false;
  long e = D / 4;
  long em = ((e % 4) + 4) % 4;
  return (em == 2 || em == 3) && squarefree_part(e) == e;
}

bool sqrt_mod_prime(u64 a, u64 p, u64& root) {
  a %= p;
  if (a == 0) {
    root = 0;
    return true;
  }
  if (p == 2) {
    root = a;
    return true;
  }
  if (powmod(a, (p - 1) / 2, p) != 1) return false;
  // Tonelli-Shanks
  u64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  root = std::min(r, p - r);
  return true;
}

bool sqrt_mod_prime_power(const mpz_class& a, u64 p, int k, mpz_class& root) {
  if (p == 2) throw Error(ErrorCode::InvalidArgument, "2-adic square roots unsupported");
  mpz_class modulus = ipow(p, k);
  mpz_class aa = a % modulus;
  if (aa < 0) aa += modulus;
  mpz_class ap = aa % static_cast<unsigned long>(p);
  if (ap == 0) throw Error(ErrorCode::NotSquare, "square root of a non-unit");
  u64 r0;
  if (!sqrt_mod_prime(ap.get_ui(), p, r0)) return false;
  // Newton: r <- r - (r^2 - a)/(2r), doubling the precision each step.
  mpz_class r = static_cast<unsigned long>(r0);
  int prec = 1;
  while (prec < k) {
    prec = std::min(2 * prec, k);
    mpz_class mod = ipow(p, prec);
    mpz_class inv, two_r = 2 * r;
    mpz_invert(inv.get_mpz_t(), two_r.get_mpz_t(), mod.get_mpz_t());
    r = (r - (r * r - aa) * inv) % mod;
    if (r < 0) r += mod;
  }
  root = r;
  return true;
}

mpq_class parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational");
  auto valid = [](const std::string& part) {
    size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i >= part.size()) return false;
    for (; i < part.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num) || !valid(den) || den[0] == '-' || den[0] == '+')
    throw Error(ErrorCode::ParseError, "malformed rational '" + text + "'");
  if (num[0] == '+') num.erase(0, 1);
  mpq_class q{mpz_class(num), mpz_class(den)};
  if (q.get_den() == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::vector<mpq_class> parse_rational_list(const std::string& text) {
  std::vector<mpq_class> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_rational(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string to_string(const mpq_class& x) { return x.get_str(); }

mpz_class ipow(const mpz_class& base, unsigned long exp) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

mpz_class ipow(u64 base, unsigned long exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

}  // namespace mforge
