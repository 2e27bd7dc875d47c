#include <doctest.h>

#include <complex>

#include "motiveforge/error.hpp"
#include "motiveforge/fixtures.hpp"
#include "motiveforge/hilbert_asai.hpp"
#include "motiveforge/matcher.hpp"
#include "motiveforge/padic.hpp"

using namespace mforge;

namespace {

using cld = std::complex<long double>;

long double real_value(const QuadElement& x) {
  return x.a.get_d() + x.b.get_d() * std::sqrt(static_cast<long double>(x.D));
}

// prod (1 - r T) over all products of roots of X^2 - a X + P and X^2 - b X + P, rounded.
Poly tensor_oracle(long double a, long double b, long double P) {
  auto roots = [&](long double t) {
    cld d = std::sqrt(cld(t * t - 4 * P, 0));
    return std::pair<cld, cld>{(t + d) / 2.0L, (t - d) / 2.0L};
  };
  auto [r1, r2] = roots(a);
  auto [s1, s2] = roots(b);
  std::vector<cld> c{1};
  for (cld r : {r1 * s1, r1 * s2, r2 * s1, r2 * s2}) {
    std::vector<cld> n(c.size() + 1, 0);
    for (size_t i = 0; i < c.size(); ++i) {
      n[i] += c[i];
      n[i + 1] -= r * c[i];
    }
    c = n;
  }
  Poly out;
  for (auto& x : c) out.push_back(mpz_class(static_cast<double>(std::llround(x.real()))));
  return out;
}

}  // namespace

TEST_SUITE("hilbert_asai") {
  TEST_CASE("splitting types in Q(sqrt 5)") {
    QuadField F{5};
    CHECK(splitting_type(F, 11) == Splitting::split);
    CHECK(splitting_type(F, 3) == Splitting::inert);
    CHECK(splitting_type(F, 5) == Splitting::ramified);
  }

  TEST_CASE("split Asai factor is the tensor product of the two Hecke polynomials") {
    auto form = load_row_form(1);
    REQUIRE(form);
    const u64 p = 11;
    Poly oracle = tensor_oracle(real_value(form->eigenvalue(p, 0)), real_value(form->eigenvalue(p, 1)), 1331.0L);
    CHECK(equal(asai_factor(*form, p).coeffs, oracle));
  }

  TEST_CASE("inert Asai factor") {
    auto form = load_row_form(1);
    REQUIRE(form);
    // a_3 = -30, p^{2 w0} = 3^6
    CHECK(equal(asai_factor(*form, 3, 1).coeffs, Poly{1, 30, 729} * Poly{1, 0, -729}));
    CHECK(equal(asai_factor(*form, 3, -1).coeffs, Poly{1, -30, 729} * Poly{1, 0, -729}));
    CHECK_THROWS_AS(asai_factor(*form, 2), Error);  // divides the level
  }

  TEST_CASE("twists") {
    LocalEulerFactor f;
    f.p = 7;
    f.coeffs = Poly{1, 3, 5, 7};
    LocalEulerFactor t = twist_char(f, QuadCharacter{5, false});  // (5|7) = -1
    CHECK(equal(t.coeffs, Poly{1, -3, 5, -7}));
    CHECK(equal(twist_char(t, QuadCharacter{5, false}).coeffs, f.coeffs));
    f.coeffs = Poly{1, 21, 245, 2401};
    CHECK(equal(tate_twist(f, 1).coeffs, Poly{1, 3, 5, 7}));
    CHECK_THROWS_AS(tate_twist(f, 2), Error);
  }

  TEST_CASE("quadratic expressions") {
    QuadElement x = parse_quad_expr("-16w + 20", 5);  // w = (1 + sqrt 5)/2
    CHECK(x == QuadElement{12, -8, 5});
    CHECK(x * x.conj() == QuadElement{144 - 320, 0, 5});
  }

  TEST_CASE("eigenform JSON round trip") {
    auto form = load_row_form(9);
    REQUIRE(form);
    HilbertEigenform back = eigenform_from_json(eigenform_to_json(*form));
    CHECK(back.id == form->id);
    CHECK(back.field.disc == form->field.disc);
    CHECK(back.eigenvalues.size() == form->eigenvalues.size());
    for (auto& [k, v] : form->eigenvalues) CHECK(back.eigenvalues.at(k) == v);
  }

  TEST_CASE("character labels") {
    CHECK(character_from_label("-4").disc == -4);
    CHECK(character_from_label("3").disc == -3);
    CHECK(character_from_label("12?").provisional);
  }
}

TEST_SUITE("matcher") {
  TEST_CASE("strip_linear removes exactly the linear factor") {
    LocalEulerFactor f;
    f.p = 11;
    f.weight = 4;
    Poly q{1, 16, -19074, 234256, 214358881};
    f.coeffs = poly_linear(1, -121) * q;
    CHECK(equal(strip_linear(f, QuadCharacter{1}, 2).coeffs, q));
    CHECK_THROWS_AS(strip_linear(f, QuadCharacter{-4}, 2), Error);  // (-4|11) = -1
  }

  TEST_CASE("row 1 trace mode passes at fixture primes") {
    VerifyOptions o;
    o.pmax = 13;
    MatchReport rep = verify_row(load_match_row(1), *load_row_form(1), o);
    CHECK(rep.pass());
    CHECK_FALSE(rep.verdicts.empty());
  }

  TEST_CASE("a corrupted eigenvalue is caught") {
    HilbertEigenform form = *load_row_form(1);
    form.eigenvalues[PrimeLabel{7, 0}] = QuadElement{-68, 0, 5};
    VerifyOptions o;
    o.primes = {7};
    CHECK_FALSE(verify_row(load_match_row(1), form, o).pass());
  }

  TEST_CASE("conductor heuristic for rows 3/4") {
    ConductorPrediction c = conductor_heuristic(load_match_row(3));
    CHECK(c.observed == 41);
    CHECK(c.consistent);
  }
}

TEST_SUITE("padic") {
  TEST_CASE("Newton slopes") {
    Poly q{1, 16, -19074, 234256, 214358881};
    CHECK(newton_slopes(q, 11).to_string() == "{0,1,3,4}");
    CHECK(is_ordinary(q, 11));
    CHECK_FALSE(is_ordinary(Poly{1, 11, 121 * 5, 11 * 11 * 11 * 11 * 11 * 3, 214358881}, 11));
  }

  TEST_CASE("embedding sqrt D squares back to D") {
    for (auto& e : embed_quadratic(QuadElement{0, 1, 5}, 11, 10)) CHECK((e * e - 5) % ipow(u64{11}, 10) == 0);
    CHECK(embed_quadratic(QuadElement{0, 1, 5}, 7, 5).empty());  // 5 is not a square mod 7
  }

  TEST_CASE("recover_ap on a synthetic split quartic") {
    // eigenvalues a = 7 (slopes 0, 3) and a' = 5 p (slopes 1, 2) at p = 13
    const u64 p = 13;
    const mpz_class P = ipow(p, 3), A = 7, B = 5 * 13;
    Poly asai{1, -A * B, P * (A * A + B * B) - 2 * P * P, -P * P * A * B, P * P * P * P};
    Poly q;
    REQUIRE(scale_var_down(asai, p, 1, q));
    ApCandidates c = recover_ap(q, p, 12);
    CHECK((c.plus == 7 || c.minus == 7));
    CHECK(c.N == 11);
  }

  TEST_CASE("non-ordinary input is rejected") {
    CHECK_THROWS_AS(recover_ap(Poly{1, 11, 121 * 5, 11 * 11 * 11 * 11 * 11 * 3, 214358881}, 11), Error);
  }
}
