#include "motiveforge/poly.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "motiveforge/arith.hpp"
#include "motiveforge/error.hpp"

namespace mforge {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (f[i] != 0) return i;
  return -1;
}

Poly poly_one() { return Poly{1}; }
Poly poly_linear(const mpz_class& c0, const mpz_class& c1) {
  Poly f{c0, c1};
  trim(f);
  return f;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

Poly operator*(const Poly& a, const mpz_class& c) {
  Poly r = a;
  for (auto& x : r) x *= c;
  trim(r);
  return r;
}

Poly pow(const Poly& f, unsigned n) {
  Poly r = poly_one();
  for (unsigned i = 0; i < n; ++i) r = r * f;
  return r;
}

bool exact_divide(const Poly& a, const Poly& b, Poly& quotient) {
  int db = degree(b);
  if (db < 0) throw Error(ErrorCode::ZeroArgument, "division by the zero polynomial");
  int da = degree(a);
  if (da < 0) {
    quotient.clear();
    return true;
  }
  if (da < db) return false;
  // Long division from the top; the leading coefficient of b must divide.
  Poly rem(a.begin(), a.begin() + da + 1);
  Poly q(da - db + 1);
  for (int i = da - db; i >= 0; --i) {
    const mpz_class& top = rem[i + db];
    if (top == 0) continue;
    if (!mpz_divisible_p(top.get_mpz_t(), b[db].get_mpz_t())) return false;
    q[i] = top / b[db];
    for (int j = 0; j <= db; ++j) rem[i + j] -= q[i] * b[j];
  }
  for (auto& x : rem)
    if (x != 0) return false;
  trim(q);
  quotient = q;
  return true;
}

namespace {

void trim_q(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Primitive integer multiple of a rational polynomial.
Poly primitive(const QPoly& f) {
  mpz_class den = 1, g = 0;
  for (auto& x : f) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
  Poly r;
  for (auto& x : f) r.push_back(mpz_class(x * den));
  for (auto& x : r) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g != 0)
    for (auto& x : r) x /= g;
  return r;
}

}  // namespace

Poly squarefree_factor(const Poly& f) {
  QPoly a(f.begin(), f.end()), b;
  trim_q(a);
  for (size_t i = 1; i < a.size(); ++i) b.push_back(a[i] * static_cast<long>(i));
  trim_q(b);
  if (b.empty()) return f;
  // Euclid over Q for gcd(f, f')
  while (!b.empty()) {
    QPoly r = a;
    while (r.size() >= b.size() && !r.empty()) {
      mpq_class c = r.back() / b.back();
      size_t shift = r.size() - b.size();
      for (size_t j = 0; j < b.size(); ++j) r[shift + j] -= c * b[j];
      trim_q(r);
    }
    a = b;
    b = r;
  }
  Poly g = primitive(a), q;
  if (degree(g) == 0) return f;
  if (!exact_divide(f, g, q)) throw Error(ErrorCode::NonIntegral, "square-free part is not integral");
  if (!q.empty() && q[0] < 0)
    for (auto& x : q) x = -x;
  return q;
}

Poly scale_var(const Poly& f, const mpz_class& c) {
  Poly r = f;
  mpz_class m = 1;
  for (auto& x : r) {
    x *= m;
    m *= c;
  }
  trim(r);
  return r;
}

bool scale_var_down(const Poly& f, const mpz_class& p, int k, Poly& out) {
  Poly r = f;
  mpz_class pk = ipow(p, static_cast<unsigned long>(k)), m = 1;
  for (auto& x : r) {
    if (!mpz_divisible_p(x.get_mpz_t(), m.get_mpz_t())) return false;
    x /= m;
    m *= pk;
  }
  out = r;
  return true;
}

bool equal(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  trim(x);
  trim(y);
  return x == y;
}

std::string to_string(const Poly& f) {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    mpz_class c = f[i];
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    mpz_class a = abs(c);
    if (i == 0 || a != 1) os << a.get_str();
    if (i > 0) {
      if (a != 1) os << "*";
      os << "T";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return first ? "0" : os.str();
}

namespace {

// expr   := term (('+'|'-') term)*
// term   := factor (['*'] factor)*      implicit product allowed
// factor := ['-'|'+'] atom ['^' integer]
// atom   := integer | 'p' | 'T' | '(' expr ')'
class PolyParser {
 public:
  PolyParser(const std::string& text, long p) : p_(p) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
  }

  Poly parse() {
    Poly r = expr();
    if (pos_ != s_.size()) fail("trailing input");
    return r;
  }

 private:
  std::string s_;
  size_t pos_ = 0;
  long p_;

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::ParseError, "polynomial '" + s_ + "': " + why + " at offset " + std::to_string(pos_));
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  Poly expr() {
    Poly r = term();
    while (peek() == '+' || peek() == '-') {
      char op = s_[pos_++];
      Poly t = term();
      r = op == '+' ? r + t : r - t;
    }
    return r;
  }

  Poly term() {
    Poly r = factor();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        r = r * factor();
      } else if (c == '(' || c == 'p' || c == 'T' || std::isdigit(static_cast<unsigned char>(c))) {
        r = r * factor();
      } else {
        break;
      }
    }
    return r;
  }

  Poly factor() {
    if (peek() == '-') {
      ++pos_;
      return factor() * mpz_class(-1);
    }
    if (peek() == '+') {
      ++pos_;
      return factor();
    }
    Poly base = atom();
    if (peek() == '^') {
      ++pos_;
      size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = pow(base, static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start))));
    }
    return base;
  }

  Poly atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Poly r = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return r;
    }
    if (c == 'p') {
      ++pos_;
      return Poly{mpz_class(p_)};
    }
    if (c == 'T') {
      ++pos_;
      return Poly{0, 1};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      Poly r{mpz_class(s_.substr(start, pos_ - start))};
      trim(r);
      return r;
    }
    fail("unexpected character");
  }
};

}  // namespace

Poly parse_poly_expr(const std::string& text, long p) { return PolyParser(text, p).parse(); }

std::vector<mpz_class> power_sums(const Poly& f, int n) {
  // Newton: s_k = -k c_k - sum_{i=1}^{k-1} c_i s_{k-i}
  std::vector<mpz_class> s(n + 1);
  auto c = [&](int i) -> mpz_class { return i < static_cast<int>(f.size()) ? f[i] : mpz_class(0); };
  for (int k = 1; k <= n; ++k) {
    mpz_class v = -k * c(k);
    for (int i = 1; i < k; ++i) v -= c(i) * s[k - i];
    s[k] = v;
  }
  return {s.begin() + 1, s.end()};
}

QPoly from_power_sums(const std::vector<mpq_class>& sums) {
  size_t n = sums.size();
  QPoly c(n + 1);
  c[0] = 1;
  for (size_t k = 1; k <= n; ++k) {
    mpq_class acc = 0;
    for (size_t i = 1; i <= k; ++i) acc += sums[i - 1] * c[k - i];
    c[k] = -acc / mpq_class(static_cast<long>(k));
  }
  return c;
}

std::vector<std::complex<long double>> reciprocal_roots(const Poly& f) {
  using C = std::complex<long double>;
  int d = degree(f);
  if (d <= 0) return {};
  // Monic x^d + (c1/c0) x^{d-1} + ... whose roots are the reciprocal roots.
  long double scale = std::pow(std::fabs(f[d].get_d() / f[0].get_d()), 1.0L / d);
  std::vector<C> a(d + 1);  // a[i] coefficient of y^{d-i}, x = scale*y
  for (int i = 0; i <= d; ++i) a[i] = C(f[i].get_d() / f[0].get_d() / std::pow(scale, static_cast<long double>(i)), 0);
  std::vector<C> z(d);
  for (int i = 0; i < d; ++i) z[i] = std::polar(1.0L, 0.4L + 2.0L * M_PIl * i / d) * 0.9L;
  auto eval = [&](C x, C& deriv) {
    C v = a[0], dv = 0;
    for (int i = 1; i <= d; ++i) {
      dv = dv * x + v;
      v = v * x + a[i];
    }
    deriv = dv;
    return v;
  };
  // Aberth iteration
  for (int iter = 0; iter < 500; ++iter) {
    long double worst = 0;
    for (int i = 0; i < d; ++i) {
      C dp;
      C v = eval(z[i], dp);
      C ratio = v / dp;
      C sum = 0;
      for (int j = 0; j < d; ++j)
        if (j != i) sum += 1.0L / (z[i] - z[j]);
      C step = ratio / (1.0L - ratio * sum);
      z[i] -= step;
      worst = std::max(worst, std::abs(step));
    }
    if (worst < 1e-17L) break;
  }
  for (auto& x : z) x *= scale;
  return z;
}

}  // namespace mforge
