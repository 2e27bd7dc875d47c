#include <doctest.h>

#include <cmath>

#include "motiveforge/error.hpp"
#include "motiveforge/fixtures.hpp"
#include "motiveforge/hgm_core.hpp"
#include "motiveforge/lfunc.hpp"
#include "motiveforge/series_lab.hpp"

using namespace mforge;

namespace {

RamanujanSeries make_series(const std::string& num, const std::string& den, std::vector<long> poly,
                            const std::string& z, const std::string& target) {
  RamanujanSeries s;
  s.id = "test";
  s.numParams = parse_rational_list(num);
  s.denParams = parse_rational_list(den);
  s.poly = std::move(poly);
  s.zText = z;
  s.z = ClosedForm::parse(z);
  s.target = ClosedForm::parse(target);
  return s;
}

// a_p of y^2 + y = x^3 - x^2 - 10x - 20 (conductor 11) by point counting.
long ap_11a(long p) {
  long affine = 0;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y) {
      long lhs = (y * y + y) % p;
      long rhs = ((x * x % p * x - x * x - 10 * x - 20) % p + 2 * p * p) % p;
      if (lhs == rhs) ++affine;
    }
  return p - affine;
}

std::map<u64, Poly> curve_factors(long B) {
  std::map<u64, Poly> f;
  for (u64 p : primes_up_to(B)) f[p] = p == 11 ? poly_linear(1, -1) : Poly{1, -ap_11a(static_cast<long>(p)), p};
  return f;
}

LFunctionConfig curve_config(long B) {
  LFunctionConfig c;
  c.degree = 2;
  c.conductor = 11;
  c.gammaShifts = {0, 1};
  c.reflection = 2;
  c.cutoff = B;
  return c;
}

}  // namespace

TEST_SUITE("series_lab") {
  TEST_CASE("closed forms") {
    CHECK(ClosedForm::parse("48/pi^2").uses_gamma() == false);
    CHECK(ClosedForm::parse("(gamma(1/4)/gamma(3/4))^2").uses_gamma());
    CHECK(*ClosedForm::parse("-27/256").exact() == mpq_class(-27, 256));
    CHECK(*ClosedForm::parse("(3/4)^3").exact() == mpq_class(27, 64));
    CHECK_FALSE(ClosedForm::parse("sqrt(2)").exact());
    CHECK_THROWS_AS(ClosedForm::parse("1/(2"), Error);
  }

  TEST_CASE("binomial series (1/2)_n / n! z^n = (1 - z)^(-1/2)") {
    auto s = make_series("1/2", "1", {1}, "1/2", "sqrt(2)");
    IdentityCheck c = check_identity(s, 50);
    CHECK(c.pass);
    CHECK(c.log10Residual < -50);
  }

  TEST_CASE("a wrong target fails") {
    auto s = make_series("1/2", "1", {1}, "1/2", "sqrt(2)+1/10^45");
    CHECK_FALSE(check_identity(s, 50).pass);
  }

  TEST_CASE("divergent parameters are rejected") {
    CHECK_THROWS_AS(evaluate_series(make_series("1/2", "1", {1}, "2", "1"), 20), Error);
    CHECK_THROWS_AS(evaluate_series(make_series("1/2,1/2", "1", {1}, "1/2", "1"), 20), Error);
  }

  TEST_CASE("rama2 times pi^2 is 48 to 40 digits") {
    auto reg = load_series_registry(data_dir() + "/series_registry.json");
    SeriesValue v = evaluate_series(find_series(reg, "rama2"), 40);
    const mp::Precision prec = v.value.precision();
    mp::Real lhs = v.value * mp::pi(prec) * mp::pi(prec);
    CHECK(mp::abs(lhs - mp::Real(48L, prec)) < mp::Real(std::string("1e-40"), prec));
  }

  TEST_CASE("eta at i is Gamma(1/4) / (2 pi^(3/4))") {
    const mp::Precision prec = mp::bits_for_digits(40);
    mp::Complex e = eta(mp::Complex(mp::Real(0L, prec), mp::Real(1L, prec)), 30);
    mp::Real expect =
        mp::gamma(mp::Real(mpq_class(1, 4), prec)) / (mp::pow(mp::pi(prec), mp::Real(mpq_class(3, 4), prec)) * 2L);
    CHECK(mp::abs(e.re - expect).to_double() < 1e-30);
    CHECK(std::abs(e.im.to_double()) < 1e-30);
  }

  TEST_CASE("b_p values") {
    CHECK(bp_cm(13) == -10);  // 13 = 2^2 + 3^2
    CHECK(bp_cm(5) == 8);     // 10 = 1^2 + 3^2
    CHECK(bp_cm(7) == 0);
    CHECK_THROWS_AS(bp_cm(3), Error);
  }

  TEST_CASE("truncated sums: exact path against an explicit small case") {
    auto d = parse_hypergeometric("1/2,1/4,3/4", "1,1,1");
    TruncatedSum t = truncated_hyp_mod(d, mpq_class(-1, 48), 5, 2);
    // terms n = 0..4 of the 3F2 at -1/48
    mpq_class term = 1, sum = 0;
    for (int n = 0; n < 5; ++n) {
      sum += term;
      term *= mpq_class(2 * n + 1, 2) * mpq_class(4 * n + 1, 4) * mpq_class(4 * n + 3, 4) / (n + 1) / (n + 1) / (n + 1);
      term *= mpq_class(-1, 48);
    }
    CHECK(t.exact == sum);
    CHECK(t.residue == 8);
  }

  TEST_CASE("supercongruence scan to 41") {
    CongruenceReport r = supercongruence_scan(41);
    CHECK(r.allHold());
    CHECK_FALSE(r.arithmeticError());
    CHECK(r.rows.size() == 11);
  }
}

TEST_SUITE("lfunc") {
  TEST_CASE("Dirichlet coefficients are multiplicative") {
    auto a = dirichlet_series(curve_factors(130), 130).a;
    CHECK(a[1] == 1);
    CHECK(a[2] == -2);
    CHECK(a[3] == -1);
    CHECK(a[6] == a[2] * a[3]);
    CHECK(a[4] == a[2] * a[2] - 2);  // a_{p^2} = a_p^2 - p
    CHECK(a[11] == 1);
    CHECK(a[121] == 1);  // split multiplicative reduction: a_{11^k} = 1
  }

  TEST_CASE("missing factor") {
    std::map<u64, Poly> f{{2, poly_linear(1, -1)}};
    CHECK_THROWS_AS(dirichlet_series(f, 10), Error);
  }

  TEST_CASE("zeta: functional equation and Lambda(1/2)") {
    FeReport r = fe_residual(zeta_config(60), dirichlet_series([] {
                               std::map<u64, Poly> f;
                               for (u64 p : primes_up_to(60)) f[p] = poly_linear(1, -1);
                               return f;
                             }(),
                                                                60),
                             critical_points(1, {0.9, 2.3, 3.7}));
    CHECK(r.residual < 1e-12);
    // Lambda(1/2) = pi^{-1/4} Gamma(1/4) zeta(1/2)
    const double zetaHalf = -1.4603545088095868;
    const double expect = std::pow(M_PI, -0.25) * std::tgamma(0.25) * zetaHalf;
    std::vector<double> ones(61, 1.0);
    CHECK(std::abs(lambda_value(zeta_config(60), ones, cplx(0.5, 0)).real() - expect) < 1e-12);
  }

  TEST_CASE("elliptic curve of conductor 11") {
    const long B = 80;
    auto coeffs = dirichlet_series(curve_factors(B), B);
    FeReport good = fe_residual(curve_config(B), coeffs, critical_points(2, {0.7, 1.9}));
    CHECK(good.sign == 1);
    CHECK(good.residual < 1e-10);

    LFunctionConfig wrongWeight = curve_config(B);
    wrongWeight.reflection = 3;
    CHECK(fe_residual(wrongWeight, coeffs, critical_points(3, {0.7, 1.9})).residual > 1e-3);

    auto corrupted = coeffs;
    corrupted.a[2] += 1;
    CHECK(fe_residual(curve_config(B), corrupted, critical_points(2, {0.7, 1.9})).residual > 1e-3);
  }

  TEST_CASE("truncation bound shrinks with the cutoff") {
    CHECK(truncation_bound(curve_config(200), cplx(1, 2)) < truncation_bound(curve_config(50), cplx(1, 2)));
  }

  TEST_CASE("row config fixture") {
    RowLConfig c = load_row_lconfig(4, data_dir());
    CHECK(c.conductor == 41);
    CHECK(c.degree == 5);
    CHECK(c.gammas.size() >= 1);
  }
}
