#include <doctest.h>

#include "motiveforge/arith.hpp"
#include "motiveforge/error.hpp"
#include "motiveforge/poly.hpp"

using namespace mforge;

TEST_SUITE("arith") {
  TEST_CASE("primes and factorization") {
    CHECK(primes_up_to(30) == std::vector<u64>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
    CHECK(factor(u64{512000}) == std::vector<std::pair<u64, int>>{{2, 12}, {5, 3}});
    CHECK(is_prime(1000003));
    CHECK_FALSE(is_prime(1));
  }

  TEST_CASE("kronecker symbol against Euler's criterion") {
    for (u64 p : primes_up_to(60)) {
      if (p == 2) continue;
      for (long a = -20; a <= 20; ++a) {
        long r = static_cast<long>(powmod(static_cast<u64>((a % static_cast<long>(p) + p) % p), (p - 1) / 2, p));
        int euler = r == 0 ? 0 : (r == 1 ? 1 : -1);
        CHECK(kronecker(a, static_cast<long>(p)) == euler);
      }
    }
    CHECK(kronecker(5, 2) == -1);
    CHECK(kronecker(-3, 2) == -1);
    CHECK(kronecker(17, 2) == 1);
  }

  TEST_CASE("fundamental discriminants") {
    CHECK(fundamental_discriminant(3) == 12);
    CHECK(fundamental_discriminant(-1) == -4);
    CHECK(fundamental_discriminant(45) == 5);
    CHECK(fundamental_discriminant(-27) == -3);
    CHECK(is_fundamental_discriminant(-4));
    CHECK_FALSE(is_fundamental_discriminant(8 * 3 * 3));
  }

  TEST_CASE("square roots modulo prime powers") {
    mpz_class r;
    REQUIRE(sqrt_mod_prime_power(5, 11, 20, r));
    mpz_class mod = ipow(u64{11}, 20);
    CHECK((r * r - 5) % mod == 0);
    CHECK_FALSE(sqrt_mod_prime_power(2, 5, 3, r));
  }

  TEST_CASE("rational parsing") {
    CHECK(parse_rational("-1/512000") == mpq_class(-1, 512000));
    CHECK(parse_rational(" 27/64 ") == mpq_class(27, 64));
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("x"), Error);
    CHECK(parse_rational_list("1/2,1/3,2/3").size() == 3);
  }
}

TEST_SUITE("poly") {
  TEST_CASE("product expressions with p bound") {
    Poly f = parse_poly_expr("(1-p^2T)(1-18pT+p^4T^2)", 41);
    Poly g = poly_linear(1, -1681) * Poly{1, -738, mpz_class(41 * 41) * (41 * 41)};
    CHECK(equal(f, g));
    CHECK(equal(parse_poly_expr("1-738*T-41^4*T^2", 3), Poly{1, -738, -2825761}));
  }

  TEST_CASE("exact division") {
    Poly a = poly_linear(1, -3) * Poly{1, 5, 7};
    Poly q;
    REQUIRE(exact_divide(a, poly_linear(1, -3), q));
    CHECK(equal(q, Poly{1, 5, 7}));
    CHECK_FALSE(exact_divide(a, poly_linear(1, 2), q));
  }

  TEST_CASE("power sums round trip through Newton's identities") {
    Poly f{1, -4, 46, 17, 1681};
    auto s = power_sums(f, 4);
    std::vector<mpq_class> sq(s.begin(), s.end());
    QPoly back = from_power_sums(sq);
    for (int i = 0; i <= 4; ++i) CHECK(back[i] == mpq_class(f[i]));
  }

  TEST_CASE("reciprocal roots of 1 - a T + p T^2 have modulus sqrt p") {
    for (auto& r : reciprocal_roots(Poly{1, 2, 11})) CHECK(std::abs(std::abs(r) - std::sqrt(11.0L)) < 1e-12L);
  }

  TEST_CASE("square-free part keeps each root once") {
    Poly f = pow(poly_linear(1, -121), 3) * Poly{1, 3, 121};
    CHECK(equal(squarefree_factor(f), poly_linear(1, -121) * Poly{1, 3, 121}));
    CHECK(equal(squarefree_factor(Poly{1, 3, 121}), Poly{1, 3, 121}));
  }

  TEST_CASE("variable scaling") {
    Poly f{1, 22, 605};
    Poly down;
    REQUIRE(scale_var_down(f, 11, 1, down));
    CHECK(equal(down, Poly{1, 2, 5}));
    CHECK(equal(scale_var(down, 11), f));
  }
}
