#include <doctest.h>

#include "motiveforge/error.hpp"
#include "motiveforge/ffield.hpp"
#include "motiveforge/fixtures.hpp"
#include "motiveforge/hgm_core.hpp"
#include "motiveforge/hgm_trace.hpp"

using namespace mforge;

namespace {

// Legendre family y^2 = x(x-1)(x-t): sum of the quadratic character over x.
long legendre_sum(long t, long p) {
  long s = 0;
  for (long x = 0; x < p; ++x) s += kronecker(x * (x - 1) % p * (((x - t) % p + p) % p) % p, p);
  return s;
}

mpz_class binom(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace

TEST_SUITE("hgm_core") {
  TEST_CASE("gamma vectors and weight") {
    auto d = parse_hypergeometric("1/2,1/2,1/2,1/2,1/2", "1,1,1,1,1");
    CHECK(d.degree == 5);
    CHECK(d.weight() == 4);
    CHECK(d.lcmDen == 2);
    auto k3 = parse_hypergeometric("1/2,1/4,3/4", "1,1,1");
    CHECK(k3.weight() == 2);
    CHECK(k3.gammaP == std::vector<long>{4});
    CHECK(k3.gammaQ == std::vector<long>{1, 1, 1, 1});  // (x^4 - 1) / (x - 1)^4
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(parse_hypergeometric("1/2,1/3", "1,1"), Error);  // not closed under Galois
    CHECK_THROWS_AS(parse_hypergeometric("1/2,1/2", "1"), Error);
    CHECK_THROWS_AS(parse_hypergeometric("1/2,1", "1,1"), Error);
  }

  TEST_CASE("coefficients of 2F1(1/2,1/2;1) are binomial(2n,n)^2 / 16^n") {
    auto s = hypergeometric_coefficients(parse_hypergeometric("1/2,1/2", "1,1"), 20);
    for (unsigned n = 0; n <= 20; ++n) {
      mpz_class b = binom(2 * n, n);
      mpq_class expect(b * b, ipow(u64{16}, n));
      expect.canonicalize();
      CHECK(s.coeffs[n] == expect);
    }
  }

  TEST_CASE("the operator annihilates every table parameter set") {
    for (auto& row : load_table1()) CHECK(ode_residual(parse_hypergeometric(row.alpha, row.beta), 30));
  }

  TEST_CASE("a perturbed coefficient is not annihilated") {
    auto d = parse_hypergeometric("1/2,1/4,3/4", "1,1,1");
    auto s = hypergeometric_coefficients(d, 20);
    s.coeffs[7] += mpq_class(1, 1000);
    CHECK_FALSE(ode_annihilates(d, s.coeffs));
  }

  TEST_CASE("bad and degenerate primes") {
    auto d = parse_hypergeometric("1/2,1/2,1/2,1/2,1/2", "1,1,1,1,1");
    auto sp = classify_primes(d, mpq_class(-1, 1024));
    CHECK_FALSE(sp.is_good(2));
    CHECK(sp.is_degenerate(5));  // 1 + 1/1024 = 1025/1024 = 5^2 41 / 2^10
    CHECK_FALSE(sp.is_good(41));  // divides 1 - z once
    CHECK(sp.is_good(7));
  }

  TEST_CASE("cyclotomic polynomials") {
    CHECK(cyclotomic_poly(4) == std::vector<mpz_class>{1, 0, 1});
    CHECK(cyclotomic_poly(6) == std::vector<mpz_class>{1, -1, 1});
  }
}

TEST_SUITE("ffield") {
  TEST_CASE("Gauss sums: g(0) = -1 and |g(m)|^2 = q otherwise") {
    for (auto [p, f] : {std::pair<u64, int>{7, 1}, {3, 3}, {5, 2}}) {
      FieldContext ctx = build_field(p, f);
      GaussTable t = gauss_table(ctx, 128);
      CHECK(std::abs(t.at(0).re.to_double() + 1) < 1e-30);
      for (long m = 1; m < static_cast<long>(ctx.q - 1); ++m)
        CHECK(std::abs(mp::norm(t.at(m)).to_double() - static_cast<double>(ctx.q)) < 1e-25);
    }
  }

  TEST_CASE("naive and DFT tables agree") {
    FieldContext ctx = build_field(3, 2);
    GaussTable a = gauss_table(ctx, 128, GaussMethod::naive), b = gauss_table(ctx, 128, GaussMethod::dft);
    for (size_t m = 0; m < a.values.size(); ++m) CHECK(mp::abs(a.values[m] - b.values[m]).to_double() < 1e-30);
  }

  TEST_CASE("field arithmetic: the generator has full order") {
    FieldContext ctx = build_field(5, 3);
    std::uint32_t x = 1;
    for (u64 i = 1; i < ctx.q - 1; ++i) {
      x = ctx.mul(x, ctx.generator);
      CHECK(x != 1);
    }
    CHECK(ctx.mul(x, ctx.generator) == 1);
  }

  TEST_CASE("non-prime characteristic is rejected") { CHECK_THROWS_AS(build_field(9, 1), Error); }
}

TEST_SUITE("hgm_trace") {
  TEST_CASE("2F1(1/2,1/2;1,1) traces are Legendre sums") {
    auto d = parse_hypergeometric("1/2,1/2", "1,1");
    for (u64 p : {5, 7, 11, 13, 17, 19, 23}) {
      for (long t : {2L, 3L, -1L, 5L}) {
        auto sp = classify_primes(d, t);
        if (!sp.is_good(p) || t % static_cast<long>(p) == 0) continue;
        mpq_class H = hq_general(d, t, build_field(p, 1));
        CHECK(H == -kronecker(-4, static_cast<long>(p)) * legendre_sum(t, static_cast<long>(p)));
      }
    }
  }

  TEST_CASE("basic and general formulas agree when both apply") {
    auto d = parse_hypergeometric("1/2,1/4,3/4", "1,1,1");
    for (u64 q : {13, 17, 29, 37, 41}) {
      auto ctx = build_field(q, 1);
      CHECK(hq_basic(d, mpq_class(-1, 48), ctx) == hq_general(d, mpq_class(-1, 48), ctx));
    }
    CHECK_THROWS_AS(hq_basic(d, mpq_class(-1, 48), build_field(7, 1)), Error);
  }

  TEST_CASE("traces do not depend on the field presentation") {
    auto d = parse_hypergeometric("1/2,1/2,1/2,1/2,1/2", "1,1,1,1,1");
    mpq_class ref = hq_general(d, mpq_class(-1, 4), build_field(7, 2, 0));
    for (u64 seed : {1, 2, 5}) CHECK(hq_general(d, mpq_class(-1, 4), build_field(7, 2, seed)) == ref);
  }

  TEST_CASE("K3 factor is (1 - chi pT)(1 - b T + p^2 T^2) at p = 1 mod 4") {
    auto d = parse_hypergeometric("1/2,1/4,3/4", "1,1,1");
    // p = 13 = 2^2 + 3^2, b = 2(4 - 9); chi_12(13) = 1
    LocalEulerFactor lf = local_factor_direct(d, mpq_class(-1, 48), 13);
    CHECK(equal(lf.coeffs, poly_linear(1, -13) * Poly{1, 10, 169}));
    CHECK(weil_integrality_check(lf).pass);
  }

  TEST_CASE("the three factor routes agree") {
    auto d = parse_hypergeometric("1/2,1/2,1/2,1/2,1/2", "1,1,1,1,1");
    mpq_class z(-1, 1024);
    for (u64 p : {3, 7}) {
      Poly direct = local_factor_direct(d, z, p).coeffs;
      CHECK(equal(local_factor_selfdual(d, z, p, 3).coeffs, direct));
      CHECK(equal(local_factor_det(d, z, p).coeffs, direct));
    }
  }

  TEST_CASE("degenerate primes need explicit permission") {
    auto d = parse_hypergeometric("1/2,1/2,1/2,1/2,1/2", "1,1,1,1,1");
    CHECK_THROWS_AS(local_factor_direct(d, mpq_class(-1, 1024), 5), Error);
    TraceOptions o;
    o.allowDegenerate = true;
    LocalEulerFactor lf = local_factor_direct(d, mpq_class(-1, 1024), 5, o);
    CHECK(lf.degenerate);
    CHECK(lf.degree() == 5);
  }

  TEST_CASE("Weil check rejects a corrupted factor") {
    LocalEulerFactor lf;
    lf.p = 7;
    lf.weight = 1;
    lf.coeffs = Poly{1, 2, 7};
    CHECK(weil_integrality_check(lf).pass);
    lf.coeffs = Poly{1, 6, 7};
    CHECK_FALSE(weil_integrality_check(lf).pass);
  }

  TEST_CASE("factor_from_traces rejects non-integral output") {
    CHECK(equal(factor_from_traces({mpq_class(3), mpq_class(5)}, 2), Poly{1, -3, 2}));
    CHECK_THROWS_AS(factor_from_traces({mpq_class(1), mpq_class(2)}, 2), Error);
  }
}
