#include <doctest.h>

#include <random>

#include "stelim/polynomial.hpp"

using namespace stelim;

namespace {

Polynomial random_poly(std::mt19937_64 &rng, std::size_t nvars, std::size_t terms, unsigned max_deg, long max_coeff) {
  std::uniform_int_distribution<unsigned> deg(0, max_deg);
  std::uniform_int_distribution<long> co(-max_coeff, max_coeff);
  std::vector<std::uint32_t> exps;
  std::vector<Integer> cs;
  for (std::size_t t = 0; t < terms; ++t) {
    for (std::size_t v = 0; v < nvars; ++v) exps.push_back(deg(rng));
    cs.emplace_back(co(rng));
  }
  return Polynomial::from_terms(nvars, std::move(exps), std::move(cs));
}

std::vector<Rational> random_point(std::mt19937_64 &rng, std::size_t n) {
  std::uniform_int_distribution<long> d(-20, 20), e(1, 9);
  std::vector<Rational> v;
  for (std::size_t i = 0; i < n; ++i) {
    v.emplace_back(d(rng), e(rng));
    v.back().canonicalize();
  }
  return v;
}

const Polynomial p = Polynomial::variable(0);
const Polynomial q = Polynomial::variable(1);

}  // namespace

TEST_SUITE("polynomial") {
  TEST_CASE("construction trims zeros and combines duplicate monomials") {
    Polynomial a = Polynomial::from_terms(2, {1, 0, 1, 0, 0, 3}, {Integer(2), Integer(-2), Integer(0)});
    CHECK(a.is_zero());
    Polynomial b = Polynomial::from_terms(3, {1, 0, 0, 1, 0, 0}, {Integer(2), Integer(3)});
    CHECK(b.num_vars() == 1);
    CHECK(b == p.scaled(Integer(5)));
    CHECK((p - p).is_zero());
    CHECK((p * Polynomial(0)).is_zero());
  }

  TEST_CASE("printing follows descending graded order") {
    const std::vector<std::string> names{"p", "q"};
    Polynomial f = p * p * q - q + Polynomial(1);
    CHECK(f.to_string(names) == "p^2*q - q + 1");
    CHECK((Polynomial(1) - p).to_string(names) == "-p + 1");
    CHECK(Polynomial().to_string(names) == "0");
    CHECK((p.scaled(Integer(-3)) * q).to_string(names) == "-3*p*q");
  }

  TEST_CASE("grlex comparison") {
    const std::uint32_t a[] = {2, 0}, b[] = {0, 2}, c[] = {1};
    CHECK(compare_grlex(a, b) > 0);
    CHECK(compare_grlex(b, a) < 0);
    CHECK(compare_grlex(c, std::span<const std::uint32_t>(a, 1)) < 0);
    const std::uint32_t c2[] = {1, 0};
    CHECK(compare_grlex(c, c2) == 0);
  }

  TEST_CASE("ring axioms hold structurally and pointwise") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 60; ++i) {
      const Polynomial a = random_poly(rng, 3, 4, 3, 9);
      const Polynomial b = random_poly(rng, 3, 3, 2, 9);
      const Polynomial c = random_poly(rng, 2, 3, 3, 9);
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a - a == Polynomial());
      const auto x = random_point(rng, 3);
      CHECK(((a + b) * c).evaluate(x) == (a.evaluate(x) + b.evaluate(x)) * c.evaluate(x));
    }
  }

  TEST_CASE("exact division") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
      const Polynomial a = random_poly(rng, 2, 3, 3, 5);
      Polynomial b = random_poly(rng, 2, 3, 2, 5);
      if (b.is_zero()) continue;
      auto r = divide_exact(a * b, b);
      REQUIRE(r);
      CHECK(*r == a);
    }
    CHECK_FALSE(divide_exact(p + Polynomial(1), p));
    CHECK_FALSE(divide_exact(p, p.scaled(Integer(2))));
  }

  TEST_CASE("gcd recovers a planted common factor") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 80; ++i) {
      const Polynomial g = random_poly(rng, 3, 3, 2, 7);
      const Polynomial a = random_poly(rng, 3, 3, 2, 7);
      const Polynomial b = random_poly(rng, 3, 3, 2, 7);
      if (g.is_zero() || a.is_zero() || b.is_zero()) continue;
      const Polynomial x = a * g, y = b * g;
      const Polynomial h = gcd(x, y);
      CHECK(divide_exact(x, h));
      CHECK(divide_exact(y, h));
      CHECK(divide_exact(h, g.primitive()));
      CHECK(h.leading_coeff() > 0);
    }
  }

  TEST_CASE("heuristic and primitive PRS gcd routes agree") {
    std::mt19937_64 rng(5);
    int compared = 0;
    for (int i = 0; i < 120; ++i) {
      const Polynomial g = random_poly(rng, 2, 2, 3, 20);
      const Polynomial a = random_poly(rng, 2, 3, 3, 20) * g;
      const Polynomial b = random_poly(rng, 2, 3, 3, 20) * g;
      if (a.is_zero() || b.is_zero()) continue;
      const Polynomial slow = detail::prs_gcd(a, b);
      CHECK(slow == gcd(a, b));
      if (auto fast = detail::heuristic_gcd(a, b)) {
        ++compared;
        // The heuristic route works up to integer content.
        CHECK(*fast == slow.primitive());
      }
    }
    CHECK(compared > 60);
  }

  TEST_CASE("gcd of classic inputs") {
    const Polynomial one(1);
    CHECK(gcd(p * p - one, p - one) == p - one);
    CHECK(gcd(p * p - one, one - p) == p - one);
    CHECK(gcd(p.scaled(Integer(6)) * q, p.scaled(Integer(4))) == p.scaled(Integer(2)));
    CHECK(gcd(p + q, p - q) == one);
    CHECK(gcd(Polynomial(), q) == q);
    CHECK(gcd(Polynomial(), Polynomial()).is_zero());
  }

  TEST_CASE("evaluation, substitution and norms") {
    const Polynomial f = p * p * q.scaled(Integer(3)) - Polynomial(7);
    const std::vector<Rational> at{Rational(1, 2), Rational(2)};
    CHECK(f.evaluate(at) == Rational(3, 2) - 7);
    CHECK(f.substitute(1, Integer(2)) == p * p.scaled(Integer(6)) - Polynomial(7));
    CHECK(f.max_norm() == 7);
    CHECK(f.content() == 1);
    CHECK(f.total_degree() == 3);
    CHECK(f.degree(0) == 2);
  }
}
