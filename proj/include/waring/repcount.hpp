#ifndef WARING_REPCOUNT_HPP
#define WARING_REPCOUNT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "waring/pseudopoly.hpp"

namespace waring {

/// Exact counts are carried in 128 bits; the NTT certificate refuses
/// anything that could reach 2^127.
using Count = unsigned __int128;

std::string to_string(Count value);
Count parse_count(const std::string& text);

/// Certified floors floor(f(n)) for n = 1..n_count, computed in contiguous
/// chunks on `threads` workers.
std::vector<std::int64_t> floor_table(const PseudoPolynomial& f, std::int64_t n_count, int threads = 1);

/// c_m = #{n >= 1 : floor(f(n)) = m} for 0 <= m <= n_max.
struct CountsVector {
  std::int64_t n_max = 0;
  std::vector<std::uint64_t> counts;
  std::string source;                // literal of the generating f
  std::int64_t generator_range = 0;  // largest n with floor(f(n)) <= n_max

  std::uint64_t total() const;
};

/// Throws DomainError if some floor(f(n)) < 1 with n in range, or
/// n_max < floor(f(1)).
CountsVector counts_vector(const PseudoPolynomial& f, std::int64_t n_max, int threads = 1);

struct NttOptions {
  std::size_t prime_offset = 0;  // first index into ntt::prime_at
  std::size_t min_primes = 2;
  std::size_t max_primes = 3;
  int threads = 1;  // residue channels run concurrently
};

/// values[N] = r_{f,s}(N) for 0 <= N <= n_max.
struct RepTable {
  int s = 0;
  std::vector<Count> values;
  std::vector<std::uint64_t> primes;  // NTT primes backing the result
  long double entry_bound = 0;        // proven bound (sum_m c_m)^s on every entry
};

/// s-fold truncated convolution power of c, exact by multi-prime NTT + CRT.
/// Throws CapacityError if the prime set allowed by `options` cannot
/// certify exact recovery.
RepTable rep_count_exact(const CountsVector& c, int s, std::int64_t n_max, const NttOptions& options = {});

/// Nested enumeration oracle. Throws BudgetError unless s <= 4 and N <= 10^4.
std::uint64_t rep_count_bruteforce(const PseudoPolynomial& f, int s, std::int64_t N);

/// All N in [lo, hi] with r_{f,s}(N) = 0.
std::vector<std::int64_t> unrepresentable(const PseudoPolynomial& f, int s, std::int64_t lo, std::int64_t hi);

void write_counts_csv(std::ostream& os, const CountsVector& c);
CountsVector read_counts_csv(std::istream& is);
void write_rep_table_csv(std::ostream& os, const RepTable& t);
RepTable read_rep_table_csv(std::istream& is, int s);

}  // namespace waring

#endif  // WARING_REPCOUNT_HPP
