#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "waring/errors.hpp"
#include "waring/ntt.hpp"
#include "waring/repcount.hpp"

using namespace waring;

namespace {

const std::vector<std::string> kOracleFamily = {
    "x^2", "x^(3/2)", "2*x^(4/3) - 0.5*x", "x^(5/2) + x^(3/2)", "3*x^(3/2) - x", "x^(7/5)",
};

std::vector<std::uint64_t> naive_floors_hist(const PseudoPolynomial& f, std::int64_t n_max) {
  std::vector<std::uint64_t> h(static_cast<std::size_t>(n_max + 1), 0);
  for (std::int64_t n = 1;; ++n) {
    const auto v = floor_eval(f, n);
    if (v > n_max) break;
    ++h[static_cast<std::size_t>(v)];
  }
  return h;
}

}  // namespace

TEST_CASE("counts vector examples") {
  const auto a = counts_vector(PseudoPolynomial::parse("x"), 5);
  REQUIRE(a.counts.size() == 6);
  CHECK(a.counts[0] == 0);
  for (int m = 1; m <= 5; ++m) CHECK(a.counts[static_cast<std::size_t>(m)] == 1);

  const auto b = counts_vector(PseudoPolynomial::parse("x^(3/2)"), 12);
  std::vector<int> support;
  for (std::size_t m = 0; m < b.counts.size(); ++m) {
    if (b.counts[m] != 0) {
      CHECK(b.counts[m] == 1);
      support.push_back(static_cast<int>(m));
    }
  }
  CHECK(support == std::vector<int>{1, 2, 5, 8, 11});
  CHECK(b.generator_range == 5);

  const auto c = counts_vector(PseudoPolynomial::parse("2*x^(3/2)"), 16);
  support.clear();
  for (std::size_t m = 0; m < c.counts.size(); ++m) {
    if (c.counts[m] != 0) support.push_back(static_cast<int>(m));
  }
  CHECK(support == std::vector<int>{2, 5, 10, 16});
  CHECK_THROWS_AS(counts_vector(PseudoPolynomial::parse("2*x^(3/2)"), 1), DomainError);
}

TEST_CASE("counts vector re-enumerates") {
  for (const auto& literal : kOracleFamily) {
    CAPTURE(literal);
    const auto f = PseudoPolynomial::parse(literal);
    for (int threads : {1, 4}) {
      const auto c = counts_vector(f, 5000, threads);
      CHECK(c.counts == naive_floors_hist(f, 5000));
      CHECK(c.total() == static_cast<std::uint64_t>(c.generator_range));
    }
  }
  // Several n can share a floor when f' < 1 near n = 1.
  const auto g = PseudoPolynomial::parse("0.5*x^(3/2) + 0.5*x");
  const auto c = counts_vector(g, 50);
  CHECK(c.counts == naive_floors_hist(g, 50));
}

TEST_CASE("rep_count_exact examples") {
  const auto x = counts_vector(PseudoPolynomial::parse("x"), 10);
  CHECK(rep_count_exact(x, 2, 10).values[4] == 3);
  const auto y = counts_vector(PseudoPolynomial::parse("x^(3/2)"), 20);
  CHECK(rep_count_exact(y, 2, 20).values[10] == 3);
  CHECK(rep_count_exact(y, 1, 20).values[8] == 1);
  const auto t = rep_count_exact(x, 3, 10);
  CHECK(t.primes.size() >= 2);
  CHECK(t.values[5] == 6);
}

TEST_CASE("brute force examples and guard") {
  CHECK(rep_count_bruteforce(PseudoPolynomial::parse("x"), 3, 5) == 6);
  CHECK(rep_count_bruteforce(PseudoPolynomial::parse("x^(3/2)"), 2, 10) == 3);
  CHECK(rep_count_bruteforce(PseudoPolynomial::parse("x^2"), 2, 7) == 0);
  CHECK_THROWS_AS(rep_count_bruteforce(PseudoPolynomial::parse("x^2"), 5, 10), BudgetError);
  CHECK_THROWS_AS(rep_count_bruteforce(PseudoPolynomial::parse("x^2"), 2, 10001), BudgetError);
}

TEST_CASE("convolution agrees with brute force") {
  std::vector<std::string> family = kOracleFamily;
  family.push_back("x");
  for (const auto& literal : family) {
    CAPTURE(literal);
    const auto f = PseudoPolynomial::parse(literal);
    const auto c = counts_vector(f, 300);
    for (int s = 1; s <= 3; ++s) {
      const auto table = rep_count_exact(c, s, 300);
      for (std::int64_t N = 0; N <= 300; ++N) {
        CAPTURE(N);
        CHECK(table.values[static_cast<std::size_t>(N)] == rep_count_bruteforce(f, s, N));
      }
    }
  }
}

TEST_CASE("table invariants") {
  for (const auto& literal : kOracleFamily) {
    CAPTURE(literal);
    const auto f = PseudoPolynomial::parse(literal);
    const std::int64_t n_max = 3000;
    const auto c = counts_vector(f, n_max);
    const auto f1 = floor_eval(f, 1);
    std::vector<RepTable> tables;
    for (int s = 1; s <= 4; ++s) tables.push_back(rep_count_exact(c, s, n_max));

    for (int s = 1; s <= 4; ++s) {
      const auto& t = tables[static_cast<std::size_t>(s - 1)];
      for (std::int64_t N = 0; N < s * f1 && N <= n_max; ++N) CHECK(t.values[static_cast<std::size_t>(N)] == 0);
      // Prefix sums against (sum_{m <= K} c_m)^s.
      Count prefix = 0;
      Count mass = 0;
      for (std::int64_t K = 0; K <= n_max; ++K) {
        prefix += t.values[static_cast<std::size_t>(K)];
        mass += c.counts[static_cast<std::size_t>(K)];
        Count bound = 1;
        for (int i = 0; i < s; ++i) bound *= mass;
        if (prefix > bound) {
          FAIL("prefix sum exceeds bound at K=" << K);
          break;
        }
      }
    }
    for (int s = 1; s < 4; ++s) {
      const auto& lo = tables[static_cast<std::size_t>(s - 1)];
      const auto& hi = tables[static_cast<std::size_t>(s)];
      for (std::int64_t N = 0; N + f1 <= n_max; ++N) {
        if (lo.values[static_cast<std::size_t>(N)] > 0) CHECK(hi.values[static_cast<std::size_t>(N + f1)] > 0);
      }
    }
  }
}

TEST_CASE("disjoint prime sets give identical tables") {
  const auto c = counts_vector(PseudoPolynomial::parse("x^(3/2)"), 20000);
  NttOptions first;
  NttOptions second;
  second.prime_offset = 4;
  second.threads = 3;
  for (int s : {2, 3, 5}) {
    const auto a = rep_count_exact(c, s, 20000, first);
    const auto b = rep_count_exact(c, s, 20000, second);
    for (auto p : a.primes) {
      for (auto q : b.primes) CHECK(p != q);
    }
    CHECK(a.values == b.values);
  }
}

TEST_CASE("capacity certificate") {
  const auto c = counts_vector(PseudoPolynomial::parse("x"), 100000);
  NttOptions tight;
  tight.min_primes = 1;
  tight.max_primes = 1;
  CHECK_THROWS_AS(rep_count_exact(c, 5, 100000, tight), CapacityError);
  CHECK_NOTHROW(rep_count_exact(c, 3, 100000));
  // Stars and bars at scale: r_{x,3}(N) = C(N-1, 2).
  const auto t = rep_count_exact(c, 3, 100000);
  for (std::int64_t N : {3, 17, 99999, 100000}) {
    const Count expected = static_cast<Count>(N - 1) * static_cast<Count>(N - 2) / 2;
    CHECK(t.values[static_cast<std::size_t>(N)] == expected);
  }
}

TEST_CASE("unrepresentable") {
  CHECK(unrepresentable(PseudoPolynomial::parse("x^2"), 2, 3, 8) == std::vector<std::int64_t>{3, 4, 6, 7});
  const auto f = PseudoPolynomial::parse("x^(3/2)");
  std::vector<std::int64_t> oracle;
  for (std::int64_t N = 1; N <= 20; ++N) {
    if (rep_count_bruteforce(f, 2, N) == 0) oracle.push_back(N);
  }
  CHECK(unrepresentable(f, 2, 1, 20) == oracle);
  // 9 = 1 + 8 has a representation.
  CHECK(rep_count_bruteforce(f, 2, 9) == 2);

  // Four squares with positive parts leave a fixed, brute-force-checked list.
  const auto g = PseudoPolynomial::parse("x^2");
  std::vector<std::int64_t> squares;
  for (std::int64_t N = 1; N <= 100; ++N) {
    if (rep_count_bruteforce(g, 4, N) == 0) squares.push_back(N);
  }
  CHECK(unrepresentable(g, 4, 1, 100) == squares);
  CHECK(squares == std::vector<std::int64_t>{1, 2, 3, 5, 6, 8, 9, 11, 14, 17, 24, 29, 32, 41, 56, 96});
}

TEST_CASE("csv round trip") {
  const auto f = PseudoPolynomial::parse("x^(3/2)");
  const auto c = counts_vector(f, 500);
  std::stringstream cs;
  write_counts_csv(cs, c);
  CHECK(cs.str().rfind("m,c\n", 0) == 0);
  const auto c2 = read_counts_csv(cs);
  CHECK(c2.counts == c.counts);
  CHECK(c2.n_max == c.n_max);

  const auto t = rep_count_exact(c, 3, 500);
  std::stringstream ts;
  write_rep_table_csv(ts, t);
  CHECK(ts.str().rfind("N,r\n", 0) == 0);
  const auto t2 = read_rep_table_csv(ts, 3);
  CHECK(t2.values == t.values);

  const Count big = (static_cast<Count>(1) << 100) + 12345;
  CHECK(parse_count(to_string(big)) == big);
  CHECK(to_string(static_cast<Count>(0)) == "0");
}

TEST_CASE("ntt matches naive convolution") {
  std::mt19937_64 rng(7);
  for (std::size_t idx = 0; idx < 4; ++idx) {
    const auto& prime = ntt::prime_at(idx);
    CHECK(ntt::is_prime(prime.p));
    CHECK(prime.two_adicity >= 40);
    for (std::size_t len : {1u, 7u, 64u, 1000u}) {
      std::vector<std::uint64_t> a(len), b(len + 3);
      for (auto& x : a) x = rng() % prime.p;
      for (auto& x : b) x = rng() % prime.p;
      const std::size_t out_len = a.size() + b.size() - 1;
      const auto got = ntt::convolve_mod(a, b, prime, out_len);
      REQUIRE(got.size() == out_len);
      for (std::size_t k = 0; k < out_len; ++k) {
        ntt::u128 acc = 0;
        for (std::size_t i = 0; i <= k && i < a.size(); ++i) {
          if (k - i < b.size()) acc = (acc + static_cast<ntt::u128>(a[i]) * b[k - i]) % prime.p;
        }
        if (got[k] != static_cast<std::uint64_t>(acc)) {
          FAIL("mismatch at " << k);
          break;
        }
      }
    }
  }
  CHECK(ntt::inverse_mod(3, 7) == 5);
  const ntt::Montgomery mont(ntt::prime_at(0).p);
  const auto x = mont.to_mont(123456789);
  CHECK(mont.from_mont(mont.mul(x, mont.one())) == 123456789);
}
