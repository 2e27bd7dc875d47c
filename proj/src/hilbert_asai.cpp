#include "motiveforge/hilbert_asai.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "motiveforge/error.hpp"

namespace mforge {

using json = nlohmann::json;

const char* to_string(Splitting s) {
  switch (s) {
    case Splitting::split: return "split";
    case Splitting::inert: return "inert";
    case Splitting::ramified: return "ramified";
  }
  return "?";
}

Splitting splitting_type(const QuadField& field, u64 p) {
  if (!is_prime(p)) throw Error(ErrorCode::NotPrime, std::to_string(p) + " is not prime");
  int k = kronecker(field.disc, static_cast<long>(p));
  return k > 0 ? Splitting::split : (k < 0 ? Splitting::inert : Splitting::ramified);
}

QuadCharacter character_from_label(const std::string& label) {
  QuadCharacter chi;
  std::string s = label;
  if (!s.empty() && s.back() == '?') {
    chi.provisional = true;
    s.pop_back();
  }
  long n;
  try {
    size_t used = 0;
    n = std::stol(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad character label '" + label + "'");
  }
  if (n == 1) return chi;
  if (is_fundamental_discriminant(n)) {
    chi.disc = n;
  } else if (is_fundamental_discriminant(-n)) {
    chi.disc = -n;  // conductor label, e.g. "3" for the character of conductor 3
  } else {
    throw Error(ErrorCode::ParseError, "label '" + label + "' is not a quadratic conductor");
  }
  return chi;
}

std::string character_label(const QuadCharacter& chi) {
  return std::to_string(chi.disc) + (chi.provisional ? "?" : "");
}

std::string QuadElement::to_string() const {
  std::ostringstream os;
  os << a.get_str();
  if (b != 0) os << (b < 0 ? " - " : " + ") << mpq_class(abs(b)).get_str() << "*sqrt(" << D << ")";
  return os.str();
}

namespace {
long common_d(const QuadElement& x, const QuadElement& y) {
  if (x.b == 0) return y.D;
  if (y.b == 0) return x.D;
  if (x.D != y.D) throw Error(ErrorCode::InvalidArgument, "mixed quadratic fields");
  return x.D;
}
}  // namespace

QuadElement operator+(const QuadElement& x, const QuadElement& y) { return {x.a + y.a, x.b + y.b, common_d(x, y)}; }
QuadElement operator-(const QuadElement& x, const QuadElement& y) { return {x.a - y.a, x.b - y.b, common_d(x, y)}; }
QuadElement operator*(const QuadElement& x, const QuadElement& y) {
  long D = common_d(x, y);
  return {x.a * y.a + x.b * y.b * D, x.a * y.b + x.b * y.a, D};
}
bool operator==(const QuadElement& x, const QuadElement& y) {
  return x.a == y.a && x.b == y.b && (x.b == 0 || x.D == y.D);
}

QuadElement parse_quad_expr(const std::string& text, long fieldDisc) {
  // w = (1 + sqrt d)/2 when d = 1 mod 4, else sqrt(d/4); returned in terms of sqrt(fieldDisc).
  QuadElement w;
  w.D = fieldDisc;
  if (((fieldDisc % 4) + 4) % 4 == 1) {
    w.a = mpq_class(1, 2);
    w.b = mpq_class(1, 2);
  } else {
    w.a = 0;
    w.b = mpq_class(1, 2);
  }
  QuadElement acc{0, 0, fieldDisc};
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty eigenvalue expression");
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    size_t start = i;
    while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
    mpq_class coef = start == i ? mpq_class(1) : parse_rational(s.substr(start, i - start));
    if (i < s.size() && s[i] == '*') ++i;
    bool hasW = i < s.size() && s[i] == 'w';
    if (hasW) ++i;
    if (start == i) throw Error(ErrorCode::ParseError, "malformed eigenvalue '" + text + "'");
    coef *= sign;
    if (hasW) {
      acc.a += coef * w.a;
      acc.b += coef * w.b;
    } else {
      acc.a += coef;
    }
    if (i < s.size() && s[i] != '+' && s[i] != '-') throw Error(ErrorCode::ParseError, "malformed eigenvalue '" + text + "'");
  }
  return acc;
}

bool HilbertEigenform::has(u64 p) const { return eigenvalues.count(PrimeLabel{p, 0}) != 0; }

const QuadElement& HilbertEigenform::eigenvalue(u64 p, int conj) const {
  auto it = eigenvalues.find(PrimeLabel{p, conj});
  if (it == eigenvalues.end())
    throw Error(ErrorCode::MissingEigenvalue, "no eigenvalue at p = " + std::to_string(p) + (conj ? "'" : "") +
                                                  " for form " + id);
  return it->second;
}

namespace {

mpz_class as_integer(const QuadElement& x, const std::string& what) {
  if (x.b != 0 || x.a.get_den() != 1)
    throw Error(ErrorCode::NonIntegralCoefficient, what + " = " + x.to_string() + " is not a rational integer");
  return x.a.get_num();
}

}  // namespace

LocalEulerFactor asai_factor(const HilbertEigenform& form, u64 p, int sigma) {
  if (std::gcd(static_cast<long>(p), form.levelNorm) != 1)
    throw Error(ErrorCode::BadPrime, std::to_string(p) + " divides the level norm");
  const mpz_class P = ipow(p, form.w0);  // Nm(p)^{w0} for a degree-one prime
  const long psi = form.centralChar(p);
  LocalEulerFactor lf;
  lf.p = p;
  lf.weight = 2 * form.w0;
  lf.provenance = Provenance::asai;
  switch (splitting_type(form.field, p)) {
    case Splitting::split: {
      const QuadElement& a = form.eigenvalue(p, 0);
      const QuadElement& b = form.eigenvalue(p, 1);
      mpz_class u = psi;  // psi(p) = psi(p') for a character induced from Q
      mpz_class e1 = as_integer(a * b, "a_p a_p'");
      mpz_class sq = as_integer(a * a + b * b, "a_p^2 + a_p'^2");
      // roots aa', ab', ba', bb' with a+b = a_p, ab = u P
      mpz_class e2 = u * P * sq - 2 * u * u * P * P;
      mpz_class e3 = u * u * P * P * e1;
      mpz_class e4 = P * P * P * P;
      lf.coeffs = Poly{1, -e1, e2, -e3, e4};
      break;
    }
    case Splitting::inert: {
      mpz_class a = as_integer(form.eigenvalue(p, 0), "a_p");
      mpz_class P2 = P * P;  // Nm(p)^{w0} = p^{2 w0}
      lf.coeffs = Poly{1, -sigma * a, P2} * Poly{1, 0, -psi * P2};
      break;
    }
    case Splitting::ramified: {
      const QuadElement& a = form.eigenvalue(p, 0);
      mpz_class a2 = as_integer(a * a, "a_p^2");
      mpz_class u = psi == 0 ? 1 : psi;
      lf.coeffs = Poly{1, -(a2 - 2 * u * P), P * P} * Poly{1, -psi * P};
      break;
    }
  }
  trim(lf.coeffs);
  return lf;
}

mpz_class asai_trace(const HilbertEigenform& form, u64 p, int sigma) {
  return -asai_factor(form, p, sigma).coeffs[1];
}

LocalEulerFactor twist_char(const LocalEulerFactor& factor, const QuadCharacter& eps) {
  int e = eps(factor.p);
  if (e == 0) throw Error(ErrorCode::RamifiedTwist, "twist character ramifies at " + std::to_string(factor.p));
  LocalEulerFactor out = factor;
  out.coeffs = scale_var(factor.coeffs, e);
  return out;
}

LocalEulerFactor tate_twist(const LocalEulerFactor& factor, int k) {
  LocalEulerFactor out = factor;
  if (!scale_var_down(factor.coeffs, static_cast<unsigned long>(factor.p), k, out.coeffs))
    throw Error(ErrorCode::NotDivisible, "coefficients not divisible for a Tate twist by " + std::to_string(k) +
                                             " at p = " + std::to_string(factor.p));
  out.weight = factor.weight - 2 * k;
  return out;
}

HilbertEigenform eigenform_from_json(const std::string& text) {
  HilbertEigenform f;
  try {
    json j = json::parse(text);
    f.id = j.value("id", "");
    f.field.disc = j.at("field_disc").get<long>();
    f.levelNorm = j.at("level_norm").get<long>();
    f.levelLabel = j.value("level_label", "");
    auto wt = j.at("weight");
    f.k1 = wt.at(0).get<int>();
    f.k2 = wt.at(1).get<int>();
    f.w0 = std::max(f.k1, f.k2) - 1;
    f.centralChar.disc = j.value("central_char_disc", 1L);
    f.coeffDisc = j.value("coeff_field_disc", f.field.disc);
    f.source = j.value("source", "manual");
    f.twistDisc = j.value("twist_char_disc", 0L);
    if (j.contains("rows")) f.rows = j["rows"].get<std::vector<int>>();
    for (auto& e : j.at("eigenvalues")) {
      PrimeLabel lab{e.at("label").at("p").get<u64>(), e.at("label").value("conj", 0)};
      QuadElement x{parse_rational(e.at("a").at(0).get<std::string>()),
                    parse_rational(e.at("a").at(1).get<std::string>()), f.coeffDisc};
      if (e.contains("expr")) {
        QuadElement y = parse_quad_expr(e.at("expr").get<std::string>(), f.coeffDisc);
        if (!(x == y))
          throw Error(ErrorCode::ParseError, "eigenvalue at " + std::to_string(lab.p) + " disagrees with its expression");
      }
      f.eigenvalues[lab] = x;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("eigenform fixture: ") + e.what());
  }
  return f;
}

HilbertEigenform load_eigenform(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return eigenform_from_json(ss.str());
}

std::string eigenform_to_json(const HilbertEigenform& f) {
  json j;
  j["id"] = f.id;
  j["field_disc"] = f.field.disc;
  j["level_norm"] = f.levelNorm;
  j["level_label"] = f.levelLabel;
  j["weight"] = {f.k1, f.k2};
  j["central_char_disc"] = f.centralChar.disc;
  j["coeff_field_disc"] = f.coeffDisc;
  j["source"] = f.source;
  if (f.twistDisc) j["twist_char_disc"] = f.twistDisc;
  if (!f.rows.empty()) j["rows"] = f.rows;
  j["eigenvalues"] = json::array();
  for (auto& [lab, x] : f.eigenvalues)
    j["eigenvalues"].push_back({{"label", {{"p", lab.p}, {"conj", lab.conj}}}, {"a", {x.a.get_str(), x.b.get_str()}}});
  return j.dump(2);
}

}  // namespace mforge
