#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mpfr.h>

#include <cmath>
#include <string>
#include <vector>

#include "waring/errors.hpp"
#include "waring/pseudopoly.hpp"

using namespace waring;

namespace {

// Independent 512-bit evaluation: every exponent p/q is formed in MPFR and
// the value is snapped to an integer only when it lies within 2^-300 of one.
std::int64_t oracle_floor(const PseudoPolynomial& f, std::int64_t n) {
  mpfr_t acc, term, e, x;
  mpfr_inits2(512, acc, term, e, x, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(acc, 1);
  mpfr_set_si(x, n, MPFR_RNDN);
  for (const auto& t : f.terms()) {
    const auto& ex = t.exponent.exact();
    REQUIRE(ex.has_value());
    mpfr_set_si(e, ex->num, MPFR_RNDN);
    mpfr_div_si(e, e, ex->den, MPFR_RNDN);
    mpfr_pow(term, x, e, MPFR_RNDN);
    const auto& c = t.coefficient.exact();
    REQUIRE(c.has_value());
    mpfr_mul_si(term, term, c->num, MPFR_RNDN);
    mpfr_div_si(term, term, c->den, MPFR_RNDN);
    mpfr_add(acc, acc, term, MPFR_RNDN);
  }
  mpfr_round(term, acc);
  mpfr_sub(e, acc, term, MPFR_RNDN);
  std::int64_t out;
  if (mpfr_zero_p(e) || mpfr_get_exp(e) < -300) {
    out = mpfr_get_si(term, MPFR_RNDN);
  } else {
    mpfr_floor(term, acc);
    out = mpfr_get_si(term, MPFR_RNDN);
  }
  mpfr_clears(acc, term, e, x, static_cast<mpfr_ptr>(nullptr));
  return out;
}

const std::vector<std::string> kFamily = {
    "x^(3/2)",          "2*x^(5/2)",           "x^2 + x^(3/2)",   "2*x^(4/3) - 0.5*x", "x^(7/3)",
    "x^(5/4) + 3*x",    "0.5*x^(9/4) + x^(3/2)", "x^(13/12)",     "3*x^(3/2) - x",     "x^2.5 + x^1.5",
};

}  // namespace

TEST_CASE("parse literals") {
  const auto f = PseudoPolynomial::parse("2*x^2.5 + 1*x^1");
  CHECK(f.term_count() == 2);
  CHECK(f.leading_coefficient() == 2.0);
  CHECK(f.leading_exponent() == 2.5);
  CHECK_FALSE(f.classical_mode());

  const auto g = PseudoPolynomial::parse("x^(3/2) - 0.5*x");
  CHECK(g.leading_exponent() == 1.5);
  CHECK(g.terms().front().coefficient.value() == -0.5);
  REQUIRE(g.terms().back().exponent.exact().has_value());
  CHECK(g.terms().back().exponent.exact()->den == 2);

  CHECK(PseudoPolynomial::parse("x^2 + x").classical_mode());
}

TEST_CASE("parse errors carry a position") {
  try {
    PseudoPolynomial::parse("x^^2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
  CHECK_THROWS_AS(PseudoPolynomial::parse(""), ParseError);
  CHECK_THROWS_AS(PseudoPolynomial::parse("x^(3/0)"), ParseError);
}

TEST_CASE("constructor invariants") {
  CHECK_THROWS(PseudoPolynomial::parse("x^2 + x^2"));
  CHECK_THROWS(PseudoPolynomial::parse("x^0.5"));
  CHECK_THROWS(PseudoPolynomial::parse("-1*x^(3/2)"));
  CHECK_THROWS(PseudoPolynomial::parse("0*x^(3/2)"));
  const auto f = PseudoPolynomial::parse("x + x^(5/2) + x^2");
  CHECK(f.terms()[0].exponent.value() == 1.0);
  CHECK(f.terms()[2].exponent.value() == 2.5);
  REQUIRE(f.largest_non_integer_exponent().has_value());
  CHECK(f.largest_non_integer_exponent()->value() == 2.5);
  CHECK(f.previous_exponent(ThetaZero::kMajorArc) == 2.0);
  const auto single = PseudoPolynomial::parse("x^(3/2)");
  CHECK(single.previous_exponent(ThetaZero::kTheorem) == 0.0);
  CHECK(single.previous_exponent(ThetaZero::kMajorArc) == 1.0);
}

TEST_CASE("certified evaluation") {
  const auto a = eval(PseudoPolynomial::parse("x^(3/2)"), 4.0, 53);
  CHECK(a.value() == 8.0);
  const auto b = eval(PseudoPolynomial::parse("2*x"), 3.0, 53);
  CHECK(b.value() == 6.0);
  const auto c = eval(PseudoPolynomial::parse("x^(3/2) + x"), 2.0, 256);
  CHECK(c.value() == doctest::Approx(4.828427124746190).epsilon(1e-15));
  CHECK(c.radius_upper() < 1e-12);
  for (int prec : {53, 106, 212}) {
    const auto r = eval(PseudoPolynomial::parse("x^2.5 + x^1.5"), 7.3, prec);
    CHECK(r.radius_upper() <= std::ldexp(1.0, -prec / 2) * std::abs(r.value()));
  }
  CHECK_THROWS_AS(eval(PseudoPolynomial::parse("x^2"), 0.0, 53), DomainError);
  CHECK_THROWS_AS(eval(PseudoPolynomial::parse("x^2"), 1.0, 52), DomainError);
}

TEST_CASE("floor_eval examples") {
  const auto f = PseudoPolynomial::parse("x^(3/2)");
  CHECK(floor_eval(f, 4) == 8);
  CHECK(floor_eval(f, 2) == 2);
  CHECK(floor_eval(f, 5) == 11);
  CHECK(floor_eval(PseudoPolynomial::parse("x^(4/3)"), 8) == 16);
  CHECK(floor_eval(PseudoPolynomial::parse("x^(4/3)"), 27) == 81);
}

TEST_CASE("floor_eval agrees with a 512-bit oracle") {
  for (const auto& literal : kFamily) {
    CAPTURE(literal);
    const auto f = PseudoPolynomial::parse(literal);
    int mismatches = 0;
    for (std::int64_t n = 1; n <= 10000; ++n) {
      if (floor_eval(f, n) != oracle_floor(f, n)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("classical floor matches integer arithmetic") {
  const auto f = PseudoPolynomial::parse("0.5*x^2 + 1.5*x");
  const auto g = PseudoPolynomial::parse("x^3 - 2*x^2 + 2*x");
  for (std::int64_t n = 1; n <= 5000; ++n) {
    CHECK(floor_eval(f, n) == (n * n + 3 * n) / 2);
    CHECK(floor_eval(g, n) == n * n * n - 2 * n * n + 2 * n);
  }
}

TEST_CASE("fractional parts") {
  const auto f = PseudoPolynomial::parse("x^(3/2)");
  CHECK(fractional_part(f, 4) == 0.0);
  CHECK(fractional_part(f, 2) == doctest::Approx(2.0 * std::sqrt(2.0) - 2.0));
}

TEST_CASE("largest_preimage") {
  CHECK(largest_preimage(PseudoPolynomial::parse("x^(3/2)"), 8.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(largest_preimage(PseudoPolynomial::parse("x^2"), 16.0) == doctest::Approx(4.0).epsilon(1e-12));
  const auto g = PseudoPolynomial::parse("x^(3/2) + x");
  const double P = largest_preimage(g, 100.0);
  CHECK(P == doctest::Approx(18.758020186386103).epsilon(1e-12));
  CHECK(std::abs(g(P) - 100.0) <= 1e-9);
  CHECK_THROWS_AS(largest_preimage(PseudoPolynomial::parse("x^2 + x"), 1.5), NoSolutionError);

  // A dip below zero before the last crossing.
  const auto h = PseudoPolynomial::parse("x^3 - 6*x^2 + 10*x");
  const double Ph = largest_preimage(h, 6.0);
  CHECK(std::abs(h(Ph) - 6.0) <= 1e-9);
  CHECK(Ph > 3.5);

  for (const auto& literal : kFamily) {
    const auto f = PseudoPolynomial::parse(literal);
    double prev = 0.0;
    for (double N = 10.0; N <= 1e6; N *= 1.7) {
      const double P2 = largest_preimage(f, N);
      CHECK(P2 >= prev);
      CHECK(std::abs(f(P2) - N) <= 1e-9 * std::max(1.0, N));
      prev = P2;
    }
  }
}

TEST_CASE("p_deviation") {
  CHECK(p_deviation(PseudoPolynomial::parse("x^(3/2)"), 8.0) == doctest::Approx(0.0).epsilon(1e-12));
  const double d = p_deviation(PseudoPolynomial::parse("x^(3/2) + x"), 100.0);
  CHECK(d < 0.0);
  CHECK(std::abs(d) < 10.0);
  CHECK(d == doctest::Approx(-2.786326713932734).epsilon(1e-9));
  CHECK(p_deviation(PseudoPolynomial::parse("x^2 + x"), 1e6) == doctest::Approx(-0.499875).epsilon(1e-6));

  for (double N = 1e3; N <= 1e6; N *= 3.0) {
    CHECK(std::abs(p_deviation(PseudoPolynomial::parse("2*x^(5/2)"), N)) < 1e-9 * N);
  }
  // d >= 2: normalized deviation bounded without growth.
  const auto f = PseudoPolynomial::parse("x^2 + x^(3/2)");
  std::vector<double> ratios;
  for (double N = 1e3; N <= 1e6; N *= 10.0) {
    const double P = largest_preimage(f, N);
    ratios.push_back(std::abs(p_deviation(f, N)) / std::sqrt(P));
  }
  for (std::size_t i = 1; i < ratios.size(); ++i) CHECK(ratios[i] <= 1.1 * ratios[0]);
}

TEST_CASE("derivatives") {
  const auto d1 = derivative(PseudoPolynomial::parse("x^(3/2)"), 1);
  REQUIRE(d1.size() == 1);
  CHECK(d1[0].coefficient.value() == 1.5);
  CHECK(d1[0].exponent.value() == 0.5);

  CHECK(derivative(PseudoPolynomial::parse("x^3"), 4).empty());

  const auto d3 = derivative(PseudoPolynomial::parse("2*x^(5/2) + x^2"), 3);
  REQUIRE(d3.size() == 1);
  CHECK(d3[0].coefficient.value() == 3.75);
  CHECK(d3[0].exponent.value() == -0.5);
  REQUIRE(d3[0].coefficient.exact().has_value());
  CHECK(d3[0].coefficient.exact()->num == 15);
  CHECK(d3[0].coefficient.exact()->den == 4);

  for (const auto& literal : kFamily) {
    const auto f = PseudoPolynomial::parse(literal);
    for (int j = 1; j <= 4; ++j) {
      const auto twice = derivative(derivative(f, j), 1);
      const auto direct = derivative(f, j + 1);
      REQUIRE(twice.size() == direct.size());
      for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(twice[i].coefficient.value() == doctest::Approx(direct[i].coefficient.value()));
        CHECK(twice[i].exponent.value() == direct[i].exponent.value());
      }
    }
  }
}

TEST_CASE("theorem constants") {
  const auto a = theorem_constants(PseudoPolynomial::parse("x^(3/2)"));
  CHECK(a.rho == doctest::Approx(1.0 / 6.0));
  CHECK(a.s_bound == doctest::Approx(144.0));
  CHECK(a.s_min == 145);
  const auto b = theorem_constants(PseudoPolynomial::parse("x^(5/2) + x^2"));
  CHECK(b.rho == doctest::Approx(1.0 / 6.0));
  CHECK(b.s_min == 433);
  // rho = 1/6, ceil(13/12) = 2: bound 12 * 4 * 3.
  const auto c = theorem_constants(PseudoPolynomial::parse("x^(13/12)"));
  CHECK(c.rho == doctest::Approx(1.0 / 6.0));
  CHECK(c.s_bound == doctest::Approx(144.0));
  CHECK(c.s_min == 145);
  // A small gap sets rho.
  const auto d = theorem_constants(PseudoPolynomial::parse("x^(3/2) + x^(13/10)"));
  CHECK(d.rho == doctest::Approx(1.0 / 6.0));
  const auto e = theorem_constants(PseudoPolynomial::parse("x^(3/2) + x^(7/5)"));
  CHECK(e.rho == doctest::Approx(0.1));
  CHECK(e.s_min == 241);
}

TEST_CASE("arc setup") {
  const auto f = PseudoPolynomial::parse("x^(3/2)");
  CHECK(ArcSetup::v_cap(f) == doctest::Approx(0.2));
  CHECK(ArcSetup::default_v(f) == doctest::Approx(0.18));
  const ArcSetup arc(f, 10000);
  CHECK(arc.P() == doctest::Approx(464.1588833612779));
  CHECK(arc.tau() == doctest::Approx(std::pow(arc.P(), 1.5 - 0.18)));
  CHECK(arc.tau() > 1.0);
  CHECK(arc.is_major(0.0));
  CHECK(arc.is_major(1.0 - 0.5 / arc.tau()));
  CHECK_FALSE(arc.is_major(0.5));
  CHECK_FALSE(arc.is_major(1.0 / arc.tau()));
  CHECK_THROWS_AS(ArcSetup(f, 10000, 0.2), DomainError);
  CHECK_THROWS_AS(ArcSetup(f, 10000, 0.0), DomainError);
  // x^2 + x^(3/2): theta_d - theta_{d-1} = 1/2 so the cap is 1/5.
  CHECK(ArcSetup::v_cap(PseudoPolynomial::parse("x^2 + x^(3/2)")) == doctest::Approx(0.2));
  CHECK(ArcSetup::v_cap(PseudoPolynomial::parse("x^(3/2) + x^(7/5)")) == doctest::Approx(0.1));
}
