#include "motiveforge/series_lab.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "motiveforge/error.hpp"

namespace mforge {

using json = nlohmann::json;
using mp::Complex;
using mp::Precision;
using mp::Real;

// ---- closed forms -----------------------------------------------------------

struct ClosedForm::Node {
  enum Kind { Num, Pi, Add, Sub, Mul, Div, Neg, Pow, Sqrt, Gamma } kind;
  mpq_class value;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const ClosedForm::Node>;
using Node = ClosedForm::Node;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (i_ != s_.size()) fail("trailing input");
    return n;
  }

 private:
  const std::string& s_;
  size_t i_ = 0;

  [[noreturn]] void fail(const std::string& why) {
    throw Error(ErrorCode::ParseError, "closed form '" + s_ + "': " + why + " at offset " + std::to_string(i_));
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  bool word(const char* w) {
    skip();
    size_t n = std::strlen(w);
    if (s_.compare(i_, n, w) == 0) {
      i_ += n;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (eat('+'))
        n = make(Node::Add, n, term());
      else if (eat('-'))
        n = make(Node::Sub, n, term());
      else
        return n;
    }
  }
  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (eat('*'))
        n = make(Node::Mul, n, unary());
      else if (eat('/'))
        n = make(Node::Div, n, unary());
      else
        return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Node::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (eat('^')) return make(Node::Pow, base, unary());
    return base;
  }
  NodePtr atom() {
    skip();
    if (eat('(')) {
      NodePtr n = expr();
      if (!eat(')')) fail("expected ')'");
      return n;
    }
    if (word("pi")) return make(Node::Pi);
    for (auto [name, kind] : {std::pair{"sqrt", Node::Sqrt}, std::pair{"gamma", Node::Gamma}}) {
      if (word(name)) {
        if (!eat('(')) fail("expected '('");
        NodePtr n = expr();
        if (!eat(')')) fail("expected ')'");
        return make(kind, n);
      }
    }
    size_t start = i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    if (start == i_) fail("unexpected character");
    auto n = std::make_shared<Node>();
    n->kind = Node::Num;
    n->value = mpq_class(mpz_class(s_.substr(start, i_ - start)));
    return n;
  }
};

std::optional<mpq_class> exact_of(const Node& n) {
  switch (n.kind) {
    case Node::Num: return n.value;
    case Node::Neg: {
      auto a = exact_of(*n.a);
      if (!a) return std::nullopt;
      return mpq_class(-*a);
    }
    case Node::Add:
    case Node::Sub:
    case Node::Mul:
    case Node::Div: {
      auto a = exact_of(*n.a), b = exact_of(*n.b);
      if (!a || !b) return std::nullopt;
      if (n.kind == Node::Add) return mpq_class(*a + *b);
      if (n.kind == Node::Sub) return mpq_class(*a - *b);
      if (n.kind == Node::Mul) return mpq_class(*a * *b);
      if (*b == 0) throw Error(ErrorCode::InvalidArgument, "division by zero in closed form");
      return mpq_class(*a / *b);
    }
    case Node::Pow: {
      auto a = exact_of(*n.a), e = exact_of(*n.b);
      if (!a || !e || e->get_den() != 1 || !e->get_num().fits_slong_p()) return std::nullopt;
      long k = e->get_num().get_si();
      mpq_class r = 1;
      mpq_class base = k < 0 ? mpq_class(1 / *a) : *a;
      for (long j = 0; j < std::labs(k); ++j) r *= base;
      return r;
    }
    default: return std::nullopt;
  }
}

Real eval(const Node& n, Precision prec) {
  switch (n.kind) {
    case Node::Num: return Real(n.value, prec);
    case Node::Pi: return mp::pi(prec);
    case Node::Add: return eval(*n.a, prec) + eval(*n.b, prec);
    case Node::Sub: return eval(*n.a, prec) - eval(*n.b, prec);
    case Node::Mul: return eval(*n.a, prec) * eval(*n.b, prec);
    case Node::Div: return eval(*n.a, prec) / eval(*n.b, prec);
    case Node::Neg: return -eval(*n.a, prec);
    case Node::Sqrt: {
      Real x = eval(*n.a, prec);
      if (x.sign() < 0) throw Error(ErrorCode::InvalidArgument, "square root of a negative number");
      return mp::sqrt(x);
    }
    case Node::Gamma: return mp::gamma(eval(*n.a, prec));
    case Node::Pow: {
      Real base = eval(*n.a, prec);
      auto e = exact_of(*n.b);
      if (e && e->get_den() == 1 && e->get_num().fits_slong_p()) return mp::pow(base, e->get_num().get_si());
      if (base.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "non-integer power of a non-positive number");
      return mp::pow(base, eval(*n.b, prec));
    }
  }
  return Real(prec);
}

bool has_gamma(const Node& n) {
  if (n.kind == Node::Gamma) return true;
  return (n.a && has_gamma(*n.a)) || (n.b && has_gamma(*n.b));
}

}  // namespace

ClosedForm ClosedForm::parse(const std::string& text) {
  ClosedForm f;
  f.text_ = text;
  f.root_ = Parser(text).parse();
  return f;
}

Real ClosedForm::evaluate(Precision prec) const { return eval(*root_, prec); }
std::optional<mpq_class> ClosedForm::exact() const { return exact_of(*root_); }
bool ClosedForm::uses_gamma() const { return has_gamma(*root_); }

// ---- registry ---------------------------------------------------------------

std::vector<RamanujanSeries> load_series_registry(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path);
  std::vector<RamanujanSeries> out;
  try {
    json j = json::parse(in);
    for (auto& e : j.at("series")) {
      RamanujanSeries s;
      s.id = e.at("id").get<std::string>();
      s.numParams = parse_rational_list(e.at("num").get<std::string>());
      s.denParams = parse_rational_list(e.at("den").get<std::string>());
      s.poly = e.at("poly").get<std::vector<long>>();
      s.zText = e.at("z").get<std::string>();
      s.z = ClosedForm::parse(s.zText);
      s.target = ClosedForm::parse(e.at("target").get<std::string>());
      s.proven = e.value("proven", true);
      s.source = e.value("source", "");
      out.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return out;
}

const RamanujanSeries& find_series(const std::vector<RamanujanSeries>& reg, const std::string& id) {
  for (auto& s : reg)
    if (s.id == id) return s;
  throw Error(ErrorCode::NotFound, "no series '" + id + "' in the registry");
}

// ---- series -----------------------------------------------------------------

namespace {

Precision working_precision(int digits) { return mp::bits_for_digits(digits + 20) + 32; }

Real ten_pow(long e, Precision prec) { return mp::pow(Real(10, prec), e); }

Real at_prec(const Real& x, Precision prec) {
  Real r(prec);
  mpfr_set(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace

SeriesValue evaluate_series(const RamanujanSeries& s, int digits) {
  if (digits < 1 || digits > 1000) throw Error(ErrorCode::InvalidArgument, "digits must lie in [1, 1000]");
  const Precision prec = working_precision(digits);
  Real z = s.z.evaluate(prec);
  Real absz = mp::abs(z);
  std::vector<mpq_class> num = s.numParams, den = s.denParams;
  if (num.size() > den.size()) throw Error(ErrorCode::Divergent, s.id + ": more numerator than denominator parameters");
  if (num.size() == den.size() && !(absz < Real(1, prec))) throw Error(ErrorCode::Divergent, s.id + ": |z| >= 1");
  std::sort(num.begin(), num.end());
  std::sort(den.begin(), den.end());
  for (long c : s.poly)
    if (c < 0) throw Error(ErrorCode::InvalidArgument, s.id + ": tail bound assumes nonnegative polynomial coefficients");
  const int deg = static_cast<int>(s.poly.size()) - 1;

  auto poly_at = [&](long n) {
    mpz_class acc = 0;
    for (size_t i = s.poly.size(); i-- > 0;) acc = acc * n + s.poly[i];
    return Real(acc, prec);
  };
  const Real eps = ten_pow(-(digits + 5), prec);
  Real h(1, prec), sum(0, prec), tail(prec);
  for (long n = 0;; ++n) {
    Real term = h * poly_at(n);
    // Bound on sup_{k >= n} |t_{k+1}/t_k|.
    if (n >= 1) {
      Real rho = absz;
      for (size_t i = 0; i < num.size(); ++i) {
        mpq_class r = (num[i] + n) / (den[i] + n);
        if (r > 1) rho *= Real(r, prec);
      }
      rho *= mp::pow(Real(mpq_class(n + 1, n), prec), deg);
      if (rho < Real(1, prec)) {
        tail = mp::abs(term) / (Real(1, prec) - rho);
        if (tail < eps) {
          SeriesValue out{sum, n, tail};
          return out;
        }
      }
    }
    sum += term;
    Real ratio(1, prec);
    for (auto& a : num) ratio *= Real(mpq_class(a + n), prec);
    for (auto& b : den) ratio /= Real(mpq_class(b + n), prec);
    h *= ratio * z;
    if (n > 2000000) throw Error(ErrorCode::Divergent, s.id + ": no convergence after 2e6 terms");
  }
}

Real evaluate_target(const RamanujanSeries& s, int digits) { return s.target.evaluate(working_precision(digits)); }

IdentityCheck check_identity(const RamanujanSeries& s, int digits) {
  IdentityCheck out;
  out.id = s.id;
  out.digits = digits;
  out.proven = s.proven;
  SeriesValue v = evaluate_series(s, digits);
  Real t = evaluate_target(s, digits);
  Real diff = mp::abs(v.value - t);
  Real scale = mp::abs(t);
  if (scale < Real(1, scale.precision())) scale = Real(1, scale.precision());
  out.pass = diff < scale * ten_pow(-digits, diff.precision());
  out.log10Residual = diff.is_zero() ? -static_cast<double>(digits + 20) : std::log10(diff.to_double());
  if (!std::isfinite(out.log10Residual)) out.log10Residual = mp::log(diff).to_double() / std::log(10.0);
  out.series = v.value.to_string(digits + 2);
  out.target = t.to_string(digits + 2);
  out.terms = v.terms;
  out.label = s.proven ? "proven identity" : "numerical confirmation (identity conjectural)";
  out.method = s.target.uses_gamma() ? "MPFR gamma" : "MPFR constants";
  return out;
}

// ---- eta quotients ----------------------------------------------------------

Complex eta(const Complex& tau, int digits) {
  if (tau.im.sign() <= 0) throw Error(ErrorCode::NotUpperHalfPlane, "Im(tau) must be positive");
  const Precision prec = working_precision(digits);
  Complex t(at_prec(tau.re, prec), at_prec(tau.im, prec));
  Real twoPi = mp::pi(prec) * 2;
  Complex iTwoPiTau(-(t.im * twoPi), t.re * twoPi);  // 2 pi i tau
  Complex q = mp::exp(iTwoPiTau);
  Real absq = mp::abs(q);
  const Real eps = ten_pow(-(digits + 10), prec);
  Complex sum(Real(1, prec), Real(0, prec));
  for (long k = 1;; ++k) {
    long e1 = k * (3 * k - 1) / 2, e2 = k * (3 * k + 1) / 2;
    if (mp::pow(absq, e1) < eps) break;
    Complex pair = mp::pow(q, e1) + mp::pow(q, e2);
    sum = (k % 2) ? sum - pair : sum + pair;
  }
  Complex pref = mp::exp(Complex(iTwoPiTau.re / 24, iTwoPiTau.im / 24));
  return pref * sum;
}

namespace {
Complex scaled(const Complex& z, long k) { return Complex(z.re * k, z.im * k); }
}  // namespace

Complex rho_modular(const Complex& tau, int digits) {
  Complex e1 = mp::pow(eta(tau, digits), 24);
  Complex e2 = mp::pow(eta(scaled(tau, 2), digits), 24);
  Complex den = e1 + scaled(e2, 64);
  return scaled(e1 * e2, 256) / (den * den);
}

Can0TauCheck check_can0tau(const Complex& tau, int digits) {
  const Precision prec = working_precision(digits);
  Complex r = rho_modular(tau, digits);
  Real absr = mp::abs(r);
  if (!(absr < Real(1, prec))) throw Error(ErrorCode::NonConvergent, "|rho(tau)| >= 1");
  // left side: term ratio (1/2+n)(1/4+n)(3/4+n)/(n+1)^3 < 1, so the tail is below |t_N|/(1-|rho|)
  Complex h(Real(1, prec), Real(0, prec)), sum(Real(0, prec), Real(0, prec));
  const Real eps = ten_pow(-(digits + 10), prec);
  Real oneMinus = Real(1, prec) - absr;
  for (long n = 0;; ++n) {
    if (mp::abs(h) / oneMinus < eps) break;
    sum = sum + h;
    Real f = Real(mpq_class(2 * n + 1, 2), prec) * Real(mpq_class(4 * n + 1, 4), prec) * Real(mpq_class(4 * n + 3, 4), prec);
    f /= mp::pow(Real(n + 1, prec), 3);
    h = h * r * f;
  }
  Complex a = eta(tau, digits), b = eta(scaled(tau, 2), digits);
  Complex rhs = mp::sqrt(mp::pow(a, 16) / mp::pow(b, 8) + scaled(mp::pow(b, 16) / mp::pow(a, 8), 64));
  Real diff = mp::abs(sum - rhs);
  Can0TauCheck out;
  out.pass = diff < ten_pow(-digits, prec);
  out.log10Residual = diff.is_zero() ? -static_cast<double>(digits + 20) : mp::log(diff).to_double() / std::log(10.0);
  auto show = [&](const Complex& z) { return z.re.to_string(digits) + (z.im.sign() < 0 ? " - " : " + ") + mp::abs(z.im).to_string(6) + "i"; };
  out.rho = show(r);
  out.lhs = show(sum);
  out.rhs = show(rhs);
  return out;
}

// ---- CM coefficients and congruences ----------------------------------------

long bp_cm(long p) {
  if (p < 5 || !is_prime(static_cast<u64>(p))) throw Error(ErrorCode::InvalidArgument, "b_p needs a prime p >= 5");
  if (p % 4 == 3) return 0;
  const long target = p % 12 == 1 ? p : 2 * p;
  for (long y = 0; y * y <= target; y += 3) {
    long x2 = target - y * y;
    long x = static_cast<long>(std::llround(std::sqrt(static_cast<double>(x2))));
    while (x * x > x2) --x;
    while ((x + 1) * (x + 1) <= x2) ++x;
    if (x * x == x2) {
      long d = x * x - y * y;
      return p % 12 == 1 ? 2 * d : -d;
    }
  }
  throw Error(ErrorCode::NoRepresentation, "no representation for p = " + std::to_string(p));
}

TruncatedSum truncated_hyp_mod(const HypergeometricData& data, const mpq_class& z, u64 p, int e) {
  if (p < 5 || !is_prime(p)) throw Error(ErrorCode::InvalidArgument, "truncated sums need a prime p >= 5");
  TruncatedSum out;
  out.p = p;
  out.e = e;
  mpq_class term = 1;
  for (u64 n = 0; n < p; ++n) {
    if (valuation(term, p) < 0 && term != 0)
      throw Error(ErrorCode::NotPIntegral, "term " + std::to_string(n) + " is not p-integral");
    out.exact += term;
    for (auto& a : data.alpha) term *= a + n;
    for (auto& b : data.beta) term /= b + n;
    term *= z;
  }
  const mpz_class mod = ipow(p, e);
  mpz_class inv;
  mpz_class den = out.exact.get_den();
  if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw Error(ErrorCode::NotPIntegral, "partial sum is not p-integral");
  out.residue = (out.exact.get_num() * inv) % mod;
  if (out.residue < 0) out.residue += mod;
  return out;
}

namespace {

// Same partial sum by recursion in Z/p^e, never forming the exact rational.
std::optional<mpz_class> truncated_sum_modular(const HypergeometricData& data, const mpq_class& z, u64 p, int e) {
  const mpz_class mod = ipow(p, e);
  auto rat = [&](const mpq_class& q) -> std::optional<mpz_class> {
    mpz_class inv, den = q.get_den();
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t()) == 0) return std::nullopt;
    mpz_class r = (q.get_num() * inv) % mod;
    return r < 0 ? mpz_class(r + mod) : r;
  };
  mpz_class term = 1, sum = 0;
  auto zr = rat(z);
  if (!zr) return std::nullopt;
  for (u64 n = 0; n < p; ++n) {
    sum = (sum + term) % mod;
    for (auto& a : data.alpha) {
      auto v = rat(mpq_class(a + n));
      if (!v) return std::nullopt;
      term = term * *v % mod;
    }
    for (auto& b : data.beta) {
      mpq_class inv = 1 / mpq_class(b + n);
      auto v = rat(inv);
      if (!v) {
        if (n + 1 == p) break;  // last ratio is never used
        return std::nullopt;
      }
      term = term * *v % mod;
    }
    term = term * *zr % mod;
  }
  return sum;
}

}  // namespace

bool CongruenceReport::allHold() const {
  return std::all_of(rows.begin(), rows.end(), [](auto& r) { return r.holds && r.pathsAgree; });
}
bool CongruenceReport::arithmeticError() const {
  return std::any_of(rows.begin(), rows.end(), [](auto& r) { return !r.pathsAgree; });
}

CongruenceReport supercongruence_scan(u64 pmax) {
  HypergeometricData k3 = parse_hypergeometric("1/2,1/4,3/4", "1,1,1");
  const mpq_class z(-1, 48);
  CongruenceReport rep;
  for (u64 p : primes_up_to(pmax)) {
    if (p < 5) continue;
    CongruenceRow row;
    row.p = p;
    TruncatedSum t = truncated_hyp_mod(k3, z, p, 2);
    row.residue = t.residue;
    auto alt = truncated_sum_modular(k3, z, p, 2);
    row.pathsAgree = alt && *alt == t.residue;
    row.bp = bp_cm(static_cast<long>(p));
    mpz_class mod = ipow(p, 2);
    mpz_class b = mpz_class(row.bp) % mod;
    if (b < 0) b += mod;
    row.holds = b == t.residue;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace mforge
