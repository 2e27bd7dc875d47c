#include "motiveforge/matcher.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "motiveforge/error.hpp"

namespace mforge {

using json = nlohmann::json;

bool MatchRow::conductor_consistent() const {
  if (!levelKnown || levelNorm <= 0 || conductor == 0) return true;
  if (std::gcd(fieldDisc, levelNorm) != 1) return true;
  return conductor == fieldDisc * levelNorm;
}

namespace {

int multiplicity(Poly f, const Poly& lin) {
  int m = 0;
  Poly q;
  while (degree(f) > 0 && exact_divide(f, lin, q)) {
    f = q;
    ++m;
  }
  return m;
}

std::vector<long> discriminants_up_to(long bound) {
  std::vector<long> out;
  for (long a = 3; a <= bound; ++a)
    for (long D : {a, -a})
      if (is_fundamental_discriminant(D)) out.push_back(D);
  return out;
}

}  // namespace

// The sign s_p is the one whose linear factor (1 - s p^k T) occurs with the larger
// multiplicity. At inert primes the quartic contributes (1 - p^{2k} T^2), so a bare
// divisibility test would accept either sign there.
QuadCharacter infer_chi(const std::vector<LocalEulerFactor>& factors, int k) {
  if (factors.size() < 10) throw Error(ErrorCode::InvalidArgument, "infer_chi needs at least 10 factors");
  std::vector<std::pair<u64, int>> signs;
  for (auto& f : factors) {
    mpz_class pk = ipow(f.p, k);
    int plus = multiplicity(f.coeffs, poly_linear(1, -pk));
    int minus = multiplicity(f.coeffs, poly_linear(1, pk));
    if (plus != minus) signs.emplace_back(f.p, plus > minus ? 1 : -1);
  }
  if (signs.empty()) throw Error(ErrorCode::NoConsistentCharacter, "no linear factor of the expected shape");
  std::vector<long> candidates{1};
  for (long D : discriminants_up_to(500)) candidates.push_back(D);
  std::vector<long> hits;
  for (long D : candidates) {
    bool ok = std::all_of(signs.begin(), signs.end(),
                          [&](auto& ps) { return kronecker(D, static_cast<long>(ps.first)) == ps.second; });
    if (ok) hits.push_back(D);
  }
  if (hits.empty()) throw Error(ErrorCode::NoConsistentCharacter, "no character of discriminant |D| <= 500 fits");
  QuadCharacter chi;
  chi.disc = hits.front();
  chi.provisional = hits.size() > 1;
  return chi;
}

std::vector<DiscCandidate> infer_disc(const mpq_class& z, const std::vector<LocalEulerFactor>& quartics) {
  if (quartics.size() < 10) throw Error(ErrorCode::InvalidArgument, "infer_disc needs at least 10 quartics");
  mpq_class oneMinus = 1 - z;
  // Prime pool from z and 1 - z; every product of pool primes is a candidate.
  struct Part {
    mpz_class n;
    std::string origin;
  };
  std::vector<Part> parts{{abs(oneMinus.get_num()), "numerator of 1-z"},
                          {oneMinus.get_den(), "denominator of 1-z"},
                          {abs(z.get_num()), "numerator of z"},
                          {z.get_den(), "denominator of z"}};
  std::vector<u64> pool;
  for (auto& part : parts)
    for (u64 q : prime_divisors(part.n))
      if (std::find(pool.begin(), pool.end(), q) == pool.end()) pool.push_back(q);
  std::sort(pool.begin(), pool.end());
  if (pool.size() > 16) throw Error(ErrorCode::NoCandidate, "too many primes in z and 1-z");

  std::map<long, std::pair<int, std::string>> cands;  // disc -> (priority, origin)
  for (size_t i = 0; i < parts.size(); ++i) {
    long D = fundamental_discriminant(squarefree_part(parts[i].n));
    if (D > 1 && !cands.count(D)) cands[D] = {static_cast<int>(i), parts[i].origin};
  }
  for (unsigned mask = 1; mask < (1u << pool.size()); ++mask) {
    mpz_class n = 1;
    for (size_t i = 0; i < pool.size(); ++i)
      if (mask & (1u << i)) n *= static_cast<unsigned long>(pool[i]);
    long D = fundamental_discriminant(n);
    if (D > 1 && !cands.count(D)) cands[D] = {static_cast<int>(parts.size()), "product of primes of z(1-z)"};
  }
  if (cands.empty()) throw Error(ErrorCode::NoCandidate, "no real quadratic discriminant from z");

  std::vector<std::pair<DiscCandidate, int>> ranked;
  for (auto& [D, info] : cands) {
    DiscCandidate c;
    c.disc = D;
    c.origin = info.second;
    for (auto& q : quartics) {
      int kr = kronecker(D, static_cast<long>(q.p));
      if (kr == 0) continue;
      mpz_class p4 = ipow(q.p, 4);
      Poly quot;
      bool inertShape = exact_divide(q.coeffs, Poly{1, 0, -p4}, quot);
      ++c.total;
      if (inertShape == (kr == -1)) ++c.agree;
    }
    ranked.emplace_back(c, info.first);
  }
  std::sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) {
    // agreement rate, then origin priority, then size
    long lhs = static_cast<long>(a.first.agree) * std::max(b.first.total, 1);
    long rhs = static_cast<long>(b.first.agree) * std::max(a.first.total, 1);
    if (lhs != rhs) return lhs > rhs;
    if (a.second != b.second) return a.second < b.second;
    return a.first.disc < b.first.disc;
  });
  std::vector<DiscCandidate> out;
  for (auto& r : ranked) out.push_back(r.first);
  return out;
}

LocalEulerFactor strip_linear(const LocalEulerFactor& factor, const QuadCharacter& chi, int k) {
  LocalEulerFactor out = factor;
  Poly lin = poly_linear(1, -chi(factor.p) * ipow(factor.p, k));
  if (!exact_divide(factor.coeffs, lin, out.coeffs))
    throw Error(ErrorCode::NotDivisible, to_string(lin) + " does not divide the factor at p = " + std::to_string(factor.p));
  return out;
}

const char* to_string(VerifyMode m) { return m == VerifyMode::trace ? "trace" : "full"; }

LocalEulerFactor hgm_factor(const MatchRow& row, u64 p, const TraceOptions& opts) {
  TraceOptions o = opts;
  o.allowDegenerate = true;
  const int d = row.data.degree;
  if (ipow(p, d) <= mpz_class(1UL << 16) || d % 2 == 0 || row.data.weight() % 2)
    return local_factor_direct(row.data, row.z, p, o);
  // Large p: half the traces plus the determinant character.
  try {
    return local_factor_det(row.data, row.z, p, o);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BadPrime) throw;
    return local_factor_selfdual(row.data, row.z, p, d / 2 + 1, o);
  }
}

bool MatchReport::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](auto& v) { return v.pass; });
}

std::string MatchReport::to_json() const {
  json j;
  j["schema"] = 1;
  j["row"] = rowId;
  j["form"] = formId;
  j["mode"] = to_string(mode);
  j["chi"] = chi.disc;
  j["field_disc"] = fieldDisc;
  j["eps"] = epsDisc;
  j["sigma"] = sigma;
  j["sigma_note"] = sigmaNote;
  j["pass"] = pass();
  j["primes"] = json::array();
  for (auto& v : verdicts)
    j["primes"].push_back({{"p", v.p},
                           {"splitting", v.splitting},
                           {"pass", v.pass},
                           {"degenerate", v.degenerate},
                           {"expected", v.expected},
                           {"computed", v.computed},
                           {"detail", v.detail}});
  j["skipped"] = skipped;
  return j.dump(2);
}

std::string MatchReport::to_table() const {
  std::ostringstream os;
  os << "row " << rowId << "  form " << formId << "  mode " << to_string(mode) << "  chi " << chi.disc << "  d_F "
     << fieldDisc << "  eps " << epsDisc << "  sigma " << sigma << " (" << sigmaNote << ")\n";
  for (auto& v : verdicts) {
    os << "  p=" << v.p << " [" << v.splitting << (v.degenerate ? ", degenerate" : "") << "] "
       << (v.pass ? "PASS" : "FAIL") << "  expected " << v.expected << "  computed " << v.computed;
    if (!v.detail.empty()) os << "  (" << v.detail << ")";
    os << "\n";
  }
  for (auto& s : skipped) os << "  skipped " << s << "\n";
  os << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

namespace {

struct RowContext {
  const MatchRow& row;
  const HilbertEigenform& form;
  QuadCharacter eps;
  VerifyMode mode;
  TraceOptions trace;
  SpecializationPoint sp;
  std::map<u64, LocalEulerFactor> factors;
  std::map<u64, mpz_class> traces;

  bool degenerate(u64 p) const { return sp.is_degenerate(p); }

  const LocalEulerFactor& factor(u64 p) {
    auto it = factors.find(p);
    if (it == factors.end()) it = factors.emplace(p, hgm_factor(row, p, trace)).first;
    return it->second;
  }

  mpz_class hgm_trace(u64 p) {
    auto it = traces.find(p);
    if (it != traces.end()) return it->second;
    mpz_class tr;
    if (mode == VerifyMode::full || degenerate(p)) {
      tr = -factor(p).coeffs[1];
    } else {
      mpq_class h = trace_sequence(row.data, row.z, p, 1, trace).values[0];
      if (h.get_den() != 1) throw Error(ErrorCode::NonIntegral, "H_p is not an integer at p = " + std::to_string(p));
      tr = h.get_num();
    }
    traces[p] = tr;
    return tr;
  }

  // chi(p) p^2 + eps(p) A_p / p, or nullopt when A_p is not divisible by p.
  std::optional<mpz_class> expected_trace(u64 p, int sigma) const {
    mpz_class A = asai_trace(form, p, sigma) * eps(p);
    if (A % p != 0) return std::nullopt;
    return row.chi(p) * ipow(p, 2) + A / p;
  }

  Poly expected_factor(u64 p, int sigma) const {
    LocalEulerFactor asai = twist_char(asai_factor(form, p, sigma), eps);
    return poly_linear(1, -row.chi(p) * ipow(p, 2)) * tate_twist(asai, 1).coeffs;
  }
};

bool has_eigenvalues(const HilbertEigenform& form, u64 p, Splitting s) {
  if (!form.eigenvalues.count(PrimeLabel{p, 0})) return false;
  return s != Splitting::split || form.eigenvalues.count(PrimeLabel{p, 1});
}

}  // namespace

MatchReport verify_row(const MatchRow& row, const HilbertEigenform& form, const VerifyOptions& opts) {
  RowContext ctx{row, form, QuadCharacter{}, opts.mode, opts.trace, classify_primes(row.data, row.z), {}, {}};
  if (opts.epsDisc)
    ctx.eps.disc = *opts.epsDisc;
  else if (form.twistDisc)
    ctx.eps.disc = form.twistDisc;
  else
    ctx.eps = row.eps;

  MatchReport rep;
  rep.rowId = row.id;
  rep.formId = form.id;
  rep.mode = opts.mode;
  rep.chi = row.chi;
  rep.fieldDisc = form.field.disc;
  rep.epsDisc = ctx.eps.disc;

  std::vector<u64> primes = opts.primes;
  const bool explicitList = !primes.empty();
  if (!explicitList) primes = primes_up_to(opts.pmax);

  // Eligible primes, in order; failures for explicit primes are verdicts rather than skips.
  std::vector<std::pair<u64, Splitting>> todo;
  std::map<std::string, std::vector<u64>> skippedBy;
  for (u64 p : primes) {
    std::string why;
    Splitting s = splitting_type(form.field, p);
    if (!ctx.sp.is_good(p) && !ctx.degenerate(p))
      why = "bad prime for the hypergeometric data";
    else if (form.levelNorm % static_cast<long>(p) == 0)
      why = "divides the level";
    else if (ctx.eps(p) == 0)
      why = "epsilon ramified";
    else if (!has_eigenvalues(form, p, s))
      why = "no eigenvalue";
    if (why.empty()) {
      todo.emplace_back(p, s);
    } else if (explicitList) {
      PrimeVerdict v;
      v.p = p;
      v.mode = opts.mode;
      v.splitting = to_string(s);
      v.pass = false;
      v.detail = why;
      rep.verdicts.push_back(v);
    } else {
      skippedBy[why].push_back(p);
    }
  }
  for (auto& [why, ps] : skippedBy) {
    std::string line = why + ":";
    for (u64 p : ps) line += " " + std::to_string(p);
    rep.skipped.push_back(line);
  }

  // Inert sign: the first inert prime that separates the two hypotheses decides.
  for (auto& [p, s] : todo) {
    if (s != Splitting::inert || form.eigenvalue(p).a == 0) continue;
    mpz_class h = ctx.hgm_trace(p);
    auto ep = ctx.expected_trace(p, 1), em = ctx.expected_trace(p, -1);
    bool okp = ep && *ep == h, okm = em && *em == h;
    if (okp != okm) {
      rep.sigma = okp ? 1 : -1;
      rep.sigmaNote = "fitted at p=" + std::to_string(p);
      break;
    }
    if (!okp && !okm) rep.sigmaNote = "neither sign fits at p=" + std::to_string(p);
  }
  if (rep.sigma == 0 && rep.sigmaNote.empty()) rep.sigmaNote = "no separating inert prime";
  const int sigma = rep.sigma ? rep.sigma : -1;
  if (rep.sigma == 0) rep.sigmaNote += "; default -1";

  std::sort(rep.verdicts.begin(), rep.verdicts.end(), [](auto& a, auto& b) { return a.p < b.p; });
  for (auto& [p, s] : todo) {
    PrimeVerdict v;
    v.p = p;
    v.mode = opts.mode;
    v.splitting = to_string(s);
    v.degenerate = ctx.degenerate(p);
    try {
      if (opts.mode == VerifyMode::trace) {
        mpz_class h = ctx.hgm_trace(p);
        auto e = ctx.expected_trace(p, sigma);
        v.computed = h.get_str();
        v.expected = e ? e->get_str() : "non-integral";
        v.pass = e && *e == h;
      } else {
        const LocalEulerFactor& lf = ctx.factor(p);
        Poly e = ctx.expected_factor(p, sigma);
        v.computed = to_string(lf.coeffs);
        v.expected = to_string(e);
        v.pass = equal(lf.coeffs, e);
        if (lf.provisional) v.detail = "computed factor provisional";
      }
      if (v.degenerate) v.detail += std::string(v.detail.empty() ? "" : "; ") + "completed at a degenerate prime";
    } catch (const Error& err) {
      v.pass = false;
      v.detail = err.what();
    }
    rep.verdicts.push_back(v);
  }
  std::stable_sort(rep.verdicts.begin(), rep.verdicts.end(), [](auto& a, auto& b) { return a.p < b.p; });
  return rep;
}

std::string ConductorPrediction::to_string() const {
  std::ostringstream os;
  os << "N1 primes {";
  for (size_t i = 0; i < n1Primes.size(); ++i) os << (i ? "," : "") << n1Primes[i];
  os << "}  N2 " << n2.get_str();
  if (observed) os << "  observed N " << observed << (consistent ? "  consistent" : "  inconsistent");
  for (auto& n : notes) os << "\n  " << n;
  return os.str();
}

ConductorPrediction conductor_heuristic(const MatchRow& row) {
  ConductorPrediction out;
  std::set<u64> n1;
  for (auto& [q, e] : factor(static_cast<u64>(row.data.lcmDen))) n1.insert(q);
  for (u64 q : prime_divisors(abs(row.z.get_num()))) n1.insert(q);
  for (u64 q : prime_divisors(row.z.get_den())) n1.insert(q);
  out.n1Primes.assign(n1.begin(), n1.end());
  mpq_class oneMinus = 1 - row.z;
  mpz_class num = abs(oneMinus.get_num());
  out.n2 = squarefree_part(num);
  // primes of numer(1-z) that also lie in N1 are not part of N2
  for (u64 q : out.n1Primes)
    if (out.n2 % q == 0) out.n2 /= q;
  if (num / out.n2 != 1) {
    for (auto& [q, e] : factor(num))
      if (e >= 2) out.notes.push_back("numerator of 1-z divisible by " + q.get_str() + "^" + std::to_string(e));
  }
  for (u64 q : out.n1Primes) {
    std::ostringstream os;
    os << "p=" << q << ": ord_p(z)=" << valuation(row.z, q) << ", ord_p(1-z)=" << valuation(oneMinus, q)
       << (row.data.lcmDen % static_cast<long>(q) == 0 ? ", divides lcm of denominators" : "");
    out.notes.push_back(os.str());
  }
  out.observed = row.conductor;
  if (out.observed) {
    mpz_class N = out.observed;
    out.consistent = N % out.n2 == 0;
    if (out.consistent) {
      mpz_class rest = N / out.n2;
      for (u64 q : prime_divisors(rest))
        if (!n1.count(q)) out.consistent = false;
    }
    for (auto& [q, e] : factor(N))
      out.notes.push_back("ord_" + q.get_str() + "(N)=" + std::to_string(e) +
                          (n1.count(q.get_ui()) ? " (N1)" : (out.n2 % q == 0 ? " (N2)" : " (unexplained)")));
  }
  return out;
}

}  // namespace mforge
