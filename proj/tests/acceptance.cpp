// Acceptance run: one PASS/FAIL line per criterion, followed by indented detail.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "motiveforge/error.hpp"
#include "motiveforge/ffield.hpp"
#include "motiveforge/fixtures.hpp"
#include "motiveforge/hgm_core.hpp"
#include "motiveforge/hgm_trace.hpp"
#include "motiveforge/lfunc.hpp"
#include "motiveforge/matcher.hpp"
#include "motiveforge/padic.hpp"
#include "motiveforge/series_lab.hpp"

using namespace mforge;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::vector<std::string> notes;
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. Displayed degree-5 factors of the sextic example.
Outcome displayed_factors() {
  Outcome o;
  std::ifstream in(data_dir() + "/example_factors.json");
  json j = json::parse(in);
  const json& ex = j["examples"][0];
  HypergeometricData data = parse_hypergeometric(ex["alpha"].get<std::string>(), ex["beta"].get<std::string>());
  mpq_class z = parse_rational(ex["z"].get<std::string>());
  o.pass = true;
  for (auto& f : ex["factors"]) {
    u64 p = f["p"];
    Poly expected = parse_poly_expr(f["factor"].get<std::string>(), static_cast<long>(p));
    TraceOptions opts;
    opts.allowDegenerate = true;  // 7 divides the numerator of 1-z twice
    LocalEulerFactor lf = local_factor_direct(data, z, p, opts);
    bool ok = equal(lf.coeffs, expected);
    o.pass = o.pass && ok;
    std::string line = "p=" + std::to_string(p) + (ok ? " exact match" : " MISMATCH") + "  displayed " +
                       f["factor"].get<std::string>();
    if (!ok) {
      line += "  computed " + to_string(lf.coeffs);
      // peel off (1 - p^2T) and (1 - p^4T^2) to expose the remaining quadratic
      const mpz_class p2 = ipow(p, 2), p4 = ipow(p, 4);
      Poly rest = lf.coeffs, q;
      std::string peeled;
      if (exact_divide(rest, poly_linear(1, -p2), q)) rest = q, peeled += "(1-p^2T)";
      if (exact_divide(rest, Poly{1, 0, -p4}, q)) rest = q, peeled += "(1-p^4T^2)";
      if (!peeled.empty()) line += " = " + peeled + "(" + to_string(rest) + ")";
    }
    o.note(line);
  }
  return o;
}

// ---------------------------------------------------------------------------
// 2. The CM closed form for the K3 point.

// b_p by direct search over representations, written independently of the library.
long bp_oracle(long p) {
  if (p % 4 == 3) return 0;
  for (long x = 0; x * x <= 2 * p; ++x)
    for (long y = 0; y * y <= 2 * p; y += 3) {
      if (p % 12 == 1 && x * x + y * y == p) return 2 * (x * x - y * y);
      if (p % 12 == 5 && x * x + y * y == 2 * p) return -(x * x - y * y);
    }
  throw std::runtime_error("no representation");
}

Outcome cm_closed_form() {
  Outcome o;
  Table1Row row = table1_row("k3");
  HypergeometricData data = parse_hypergeometric(row.alpha, row.beta);
  auto sp = classify_primes(data, *row.z);
  int good = 0, ok = 0;
  std::vector<u64> bad, altOk;
  for (u64 p : primes_up_to(100)) {
    if (p < 5 || !sp.is_good(p)) continue;
    ++good;
    LocalEulerFactor lf = local_factor_det(data, *row.z, p);
    const mpz_class P = p;
    Poly stated = poly_linear(1, -kronecker(12, p) * P) * Poly{1, -bp_oracle(p), P * P};
    if (equal(lf.coeffs, stated)) {
      ++ok;
      continue;
    }
    bad.push_back(p);
    // (1 - chi_{-3}(p) pT)(1 - b_p T + chi_{-4}(p) p^2 T^2)
    Poly alt = poly_linear(1, -kronecker(-3, p) * P) * Poly{1, -bp_oracle(p), kronecker(-4, p) * P * P};
    if (equal(lf.coeffs, alt)) altOk.push_back(p);
  }
  o.pass = ok == good;
  o.note(std::to_string(ok) + "/" + std::to_string(good) + " good primes 5 <= p <= 100 match (1-chi_12(p)pT)(1-b_pT+p^2T^2)");
  if (!bad.empty()) {
    std::string s = "mismatch at";
    for (u64 p : bad) s += " " + std::to_string(p);
    o.note(s + " (all p = 3 mod 4)");
    o.note(std::to_string(altOk.size()) + "/" + std::to_string(bad.size()) +
           " of these match (1-chi_{-3}(p)pT)(1-b_pT+chi_{-4}(p)p^2T^2) instead; at p = 3 mod 4 the true quadratic is 1-p^2T^2");
  }
  return o;
}

// ---------------------------------------------------------------------------
// 3. Full-mode verification, rows 1 and 9.
Outcome full_mode() {
  Outcome o;
  o.pass = true;
  for (auto [row, primes] : {std::pair<int, std::vector<u64>>{1, {3, 7, 11, 13}}, {9, {5, 7, 11, 13}}}) {
    MatchRow r = load_match_row(row);
    auto form = load_row_form(row);
    VerifyOptions opts;
    opts.mode = VerifyMode::full;
    opts.primes = primes;
    MatchReport rep = verify_row(r, *form, opts);
    o.pass = o.pass && rep.pass();
    o.note("row " + std::to_string(row) + ": sigma " + std::to_string(rep.sigma) + " (" + rep.sigmaNote + ")");
    for (auto& v : rep.verdicts)
      o.note("  p=" + std::to_string(v.p) + " [" + v.splitting + "] " + (v.pass ? "PASS" : "FAIL") +
             (v.detail.empty() ? "" : "  " + v.detail));
  }
  return o;
}

// ---------------------------------------------------------------------------
// 4. Trace-mode verification over rows 1-6, 8-12.
Outcome trace_mode() {
  Outcome o;
  bool fixturesPass = true;
  for (int row : {1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12}) {
    auto form = load_row_form(row);
    if (!form) {
      o.note("row " + std::to_string(row) + ": no eigenform fixture, nothing to check");
      continue;
    }
    VerifyOptions opts;
    opts.pmax = 200;
    MatchReport rep = verify_row(load_match_row(row), *form, opts);
    int n = 0, ok = 0;
    std::string fails;
    for (auto& v : rep.verdicts) {
      ++n;
      if (v.pass) ++ok;
      else fails += " " + std::to_string(v.p);
    }
    fixturesPass = fixturesPass && rep.pass();
    o.note("row " + std::to_string(row) + ": " + std::to_string(ok) + "/" + std::to_string(n) + " primes pass" +
           (fails.empty() ? "" : ", failing at" + fails));
  }
  // The bundled cache is the directory of verbatim LMFDB responses.
  namespace fs = std::filesystem;
  const fs::path cache = fs::path(data_dir()) / "lmfdb_cache";
  bool haveCache = fs::is_directory(cache) && !fs::is_empty(cache);
  o.note(std::string("fixture-backed primes: ") + (fixturesPass ? "all pass" : "FAILURES"));
  o.note(haveCache ? "bundled LMFDB cache present"
                   : "no bundled LMFDB cache: the LMFDB was unreachable when the fixtures were built, so rows 1 and 9 "
                     "are covered by paper eigenvalues only");
  o.pass = fixturesPass && haveCache;
  return o;
}

// ---------------------------------------------------------------------------
// 5. Eigenvalue recovery, row 1, p = 11.
Outcome recovery() {
  Outcome o;
  const u64 p = 11;
  MatchRow row = load_match_row(1);
  LocalEulerFactor quartic = strip_linear(hgm_factor(row, p), row.chi, 2);
  SlopeProfile slopes = newton_slopes(quartic.coeffs, p);
  ApCandidates c = recover_ap(quartic.coeffs, p, 21);
  o.note("quartic " + to_string(quartic.coeffs) + ", slopes " + slopes.to_string());
  const mpz_class mod = ipow(p, 20);
  std::vector<mpz_class> expected;
  for (int s : {1, -1})
    for (auto& e : embed_quadratic(QuadElement{12, 8 * s, 5}, p, 20)) {
      expected.push_back(e);
      expected.push_back((mod - e) % mod);
    }
  auto hit = [&](const mpz_class& x) { return std::find(expected.begin(), expected.end(), x % mod) != expected.end(); };
  bool slopesOk = slopes.to_string() == "{0,1,3,4}";
  o.pass = slopesOk && c.N >= 20 && hit(c.plus) && hit(c.minus);
  o.note("candidates mod 11^" + std::to_string(c.N) + ": " + c.plus.get_str() + ", " + c.minus.get_str() + " " +
         (o.pass ? "are +-(12 +- 8 sqrt 5)" : "do NOT match +-(12 +- 8 sqrt 5)"));
  return o;
}

// ---------------------------------------------------------------------------
// 6. Character and field inference.
Outcome inference() {
  Outcome o;
  o.pass = true;
  for (int id : {1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12}) {
    MatchRow row = load_match_row(id);
    auto sp = classify_primes(row.data, row.z);
    std::string line = "row " + std::to_string(id) + ": ";
    try {
      std::vector<LocalEulerFactor> factors;
      for (u64 p = 5; factors.size() < 15; p += 2) {
        if (!is_prime(p) || !sp.is_good(p) || sp.is_degenerate(p)) continue;
        factors.push_back(hgm_factor(row, p));
      }
      QuadCharacter chi = infer_chi(factors, 2);
      std::vector<LocalEulerFactor> quartics;
      for (auto& f : factors) quartics.push_back(strip_linear(f, chi, 2));
      auto ranked = infer_disc(row.z, quartics);
      long disc = ranked.empty() ? 0 : ranked.front().disc;
      bool ok = chi == row.chi && disc == row.fieldDisc;
      o.pass = o.pass && ok;
      line += "chi " + character_label(chi) + " (table " + character_label(row.chi) + "), d_F " + std::to_string(disc) +
              " (table " + std::to_string(row.fieldDisc) + ")" + (ok ? "" : "  MISMATCH");
    } catch (const Error& e) {
      o.pass = false;
      line += std::string("error: ") + e.what();
    }
    o.note(line);
  }
  return o;
}

// ---------------------------------------------------------------------------
// 7. Series identities.
Outcome series() {
  Outcome o;
  o.pass = true;
  auto reg = load_series_registry(data_dir() + "/series_registry.json");
  const std::vector<std::pair<std::string, bool>> ids = {
      {"rama1", true},      {"rama2c", true},       {"eq:7^4-i", true}, {"eq:7^4-ii", true},
      {"rama1b", true},     {"rama2", false},       {"rama2b", false},  {"eq:7^4-iii", false},
      {"rama5", false},     {"cullen", false},      {"rama2d", false},  {"CSF", true}};
  for (auto& [id, proven] : ids) {
    IdentityCheck c = check_identity(find_series(reg, id), 40);
    bool ok = c.pass && c.proven == proven;
    o.pass = o.pass && ok;
    o.note(id + ": " + (ok ? "ok" : "FAIL") + "  log10|diff| " + fmt(c.log10Residual) + "  " + c.label);
  }
  const mp::Precision prec = mp::bits_for_digits(60);
  mp::Complex cm(mp::Real(mpq_class(1, 2), prec), mp::Real(mpq_class(3, 2), prec));
  mp::Complex rho = rho_modular(cm, 30);
  mp::Real err = mp::abs(rho - mp::Complex(mp::Real(mpq_class(-1, 48), prec), mp::Real(0L, prec)));
  bool rhoOk = err < mp::Real(std::string("1e-30"), prec);
  o.pass = o.pass && rhoOk;
  o.note(std::string("rho((1+3i)/2) = -1/48: ") + (rhoOk ? "ok" : "FAIL") + "  |diff| " + err.to_string(3));
  for (auto [re, im, label] : {std::tuple{mpq_class(1, 2), mpq_class(3, 2), "(1+3i)/2"},
                               std::tuple{mpq_class(0), mpq_class(2), "2i"}}) {
    Can0TauCheck c = check_can0tau(mp::Complex(mp::Real(re, prec), mp::Real(im, prec)), 30);
    o.pass = o.pass && c.pass;
    o.note(std::string("eta-quotient identity at ") + label + ": " + (c.pass ? "ok" : "FAIL") + "  log10|diff| " +
           fmt(c.log10Residual));
  }
  return o;
}

// ---------------------------------------------------------------------------
// 8. Supercongruence.
Outcome supercongruence() {
  Outcome o;
  CongruenceReport rep = supercongruence_scan(97);
  o.pass = rep.allHold() && !rep.arithmeticError();
  std::string fails;
  for (auto& r : rep.rows)
    if (!r.holds) fails += " " + std::to_string(r.p);
  o.note(std::to_string(rep.rows.size()) + " primes 5 <= p <= 97" + (fails.empty() ? ", all hold" : ", fails at" + fails) +
         (rep.arithmeticError() ? ", the two computation paths DISAGREE" : ", both computation paths agree"));
  return o;
}

// ---------------------------------------------------------------------------
// 9. Functional equations.
Outcome functional_equation() {
  Outcome o;
  const long B = 150;
  std::map<u64, Poly> f;
  for (u64 p : primes_up_to(B)) f[p] = poly_linear(1, -1);
  FeReport z = fe_residual(zeta_config(B), dirichlet_series(f, B), critical_points(1, {0.9, 2.3, 3.7}));
  bool zetaOk = z.residual < 1e-10;
  o.note("zeta: residual " + fmt(z.residual) + (zetaOk ? " < 1e-10" : " NOT below 1e-10"));
  LFuncCheck c = lfunc_check_row(3, 5, B, data_dir());
  o.note("rows 3/4: N = " + std::to_string(c.conductor) + ", cutoff " + std::to_string(B) + ", best " + c.best.gamma +
         ", w = " + fmt(c.best.reflection) + ", sign " + std::to_string(c.best.report.sign) + " (fitted)");
  for (auto& p : c.best.report.points)
    o.note("  s = " + fmt(p.s.real()) + "+" + fmt(p.s.imag()) + "i  residual " + fmt(p.residual) + "  tail bound " +
           fmt(p.tailBound));
  for (auto& x : c.candidates)
    if (&x != &c.best)
      o.note("  alternative " + x.gamma + " w = " + fmt(x.reflection) + ": residual " + fmt(x.report.residual));
  o.note("  quartic part alone: residual " + fmt(c.quartic.report.residual));
  o.pass = zetaOk && c.pass && c.best.report.points.size() == 3;
  return o;
}

// ---------------------------------------------------------------------------
// 10. Oracles and properties.
std::string ones_like(const std::string& alpha) {
  std::string out = "1";
  for (char ch : alpha)
    if (ch == ',') out += ",1";
  return out;
}

Outcome oracles() {
  Outcome o;
  bool all = true;

  // naive and DFT Gauss tables
  int tables = 0;
  double worst = 0;
  for (u64 q = 2; q <= 49; ++q) {
    auto fac = factor(q);
    if (fac.size() != 1) continue;
    auto [p, f] = fac.front();
    FieldContext ctx = build_field(p, f);
    GaussTable a = gauss_table(ctx, 128, GaussMethod::naive);
    GaussTable b = gauss_table(ctx, 128, GaussMethod::dft);
    for (size_t m = 0; m < a.values.size(); ++m)
      worst = std::max(worst, mp::abs(a.values[m] - b.values[m]).to_double());
    ++tables;
  }
  bool gaussOk = worst < 1e-30;
  all = all && gaussOk;
  o.note("naive vs DFT Gauss tables, " + std::to_string(tables) + " fields q <= 49: max |diff| " + fmt(worst));

  // basic and general trace formulas where both apply
  struct Case {
    std::string alpha;
    mpq_class t;
  };
  const std::vector<Case> sets = {{"1/2,1/2,1/2,1/2,1/2", mpq_class(-1, 4)},
                                  {"1/2,1/2,1/2,1/3,2/3", mpq_class(27, 64)},
                                  {"1/2,1/4,3/4", mpq_class(-1, 48)},
                                  {"1/2,1/2", mpq_class(3, 7)}};
  int overlap = 0, overlapOk = 0;
  for (auto& c : sets) {
    auto data = parse_hypergeometric(c.alpha, ones_like(c.alpha));
    auto sp = classify_primes(data, c.t);
    for (u64 q : {13ul, 25ul, 37ul, 49ul, 61ul, 73ul, 97ul}) {
      if (overlap >= 20) break;
      auto [p, f] = factor(q).front();
      if ((q - 1) % data.lcmDen || !sp.is_good(p)) continue;
      auto ctx = cached_field(p, f);
      ++overlap;
      if (hq_basic(data, c.t, *ctx) == hq_general(data, c.t, *ctx)) ++overlapOk;
    }
  }
  all = all && overlap == 20 && overlapOk == overlap;
  o.note("basic vs general trace formula: " + std::to_string(overlapOk) + "/" + std::to_string(overlap) + " agree");

  // generator and modulus choice
  int inv = 0, invOk = 0;
  for (auto& c : sets) {
    auto data = parse_hypergeometric(c.alpha, ones_like(c.alpha));
    auto sp = classify_primes(data, c.t);
    for (u64 p : {5ul, 7ul, 11ul, 13ul}) {
      if (inv >= 10 || !sp.is_good(p)) continue;
      mpq_class ref = hq_general(data, c.t, build_field(p, 2, 0));
      bool same = true;
      for (u64 seed : {1ul, 2ul, 3ul}) same = same && hq_general(data, c.t, build_field(p, 2, seed)) == ref;
      ++inv;
      if (same) ++invOk;
    }
  }
  all = all && inv == 10 && invOk == inv;
  o.note("H_q under 4 field presentations: " + std::to_string(invOk) + "/" + std::to_string(inv) + " cases invariant");

  // ODE annihilation
  int odeOk = 0, odeN = 0;
  for (auto& row : load_table1()) {
    ++odeN;
    if (ode_residual(parse_hypergeometric(row.alpha, row.beta), 30)) ++odeOk;
  }
  all = all && odeOk == odeN;
  o.note("ODE kills the series to order 30: " + std::to_string(odeOk) + "/" + std::to_string(odeN) + " parameter sets");

  // synthetic recovery round trips: split Asai quartic of eigenvalues a (slopes 0,3) and a' = p b (slopes 1,2)
  std::mt19937_64 rng(20260101);
  const std::vector<u64> ps = {5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  int rt = 0, rtOk = 0;
  while (rt < 50) {
    u64 p = ps[rng() % ps.size()];
    long a = static_cast<long>(rng() % 2000) - 1000, b = static_cast<long>(rng() % 200) - 100;
    if (a % static_cast<long>(p) == 0 || b % static_cast<long>(p) == 0) continue;
    const mpz_class P = ipow(p, 3), A = a, A2 = mpz_class(b) * p;
    Poly asai{1, -A * A2, P * (A * A + A2 * A2) - 2 * P * P, -P * P * A * A2, P * P * P * P};
    Poly quartic;
    if (!scale_var_down(asai, p, 1, quartic)) continue;
    ++rt;
    try {
      ApCandidates c = recover_ap(quartic, p, 20);
      mpz_class mod = ipow(p, c.N), x = A % mod;
      if (x < 0) x += mod;
      if (c.plus == x || c.minus == x) ++rtOk;
    } catch (const Error&) {
    }
  }
  all = all && rtOk == 50;
  o.note("synthetic eigenvalue recovery: " + std::to_string(rtOk) + "/50 round trips");

  o.pass = all;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"displayed degree-5 L-factors of the sextic example", displayed_factors},
      {"CM closed form of the K3 factors, p <= 100", cm_closed_form},
      {"full-mode verification, rows 1 and 9", full_mode},
      {"trace-mode verification, rows 1-6 and 8-12, p <= 200", trace_mode},
      {"eigenvalue recovery at row 1, p = 11", recovery},
      {"character and field inference", inference},
      {"series identities and the eta-quotient identity", series},
      {"supercongruence mod p^2, 5 <= p <= 97", supercongruence},
      {"functional equations: zeta and rows 3/4", functional_equation},
      {"oracles and properties", oracles},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << "  ("
              << fmt(secs) << " s)\n";
    for (auto& n : o.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria pass\n";
  return failed ? 1 : 0;
}
