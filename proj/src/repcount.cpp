#include "waring/repcount.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "waring/errors.hpp"
#include "waring/ntt.hpp"

namespace waring {

std::string to_string(Count value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

Count parse_count(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse_count: empty");
  Count value = 0;
  const Count limit = ~Count{0} / 10;
  for (char c : text) {
    if (c < '0' || c > '9') throw std::invalid_argument("parse_count: bad digit in '" + text + "'");
    if (value > limit) throw std::out_of_range("parse_count: overflow");
    value = value * 10 + static_cast<Count>(c - '0');
  }
  return value;
}

std::vector<std::int64_t> floor_table(const PseudoPolynomial& f, std::int64_t n_count, int threads) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(std::max<std::int64_t>(n_count, 0)));
  const std::size_t n = out.size();
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1,
                                                      std::max<std::size_t>(n / 256, 1));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = floor_eval(f, static_cast<std::int64_t>(i + 1));
  };
  if (workers == 1) {
    work(0, n);
    return out;
  }
  std::vector<std::future<void>> jobs;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    jobs.push_back(std::async(std::launch::async, work, begin, std::min(n, begin + chunk)));
  }
  for (auto& job : jobs) job.get();
  return out;
}

std::uint64_t CountsVector::total() const {
  std::uint64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

CountsVector counts_vector(const PseudoPolynomial& f, std::int64_t n_max, int threads) {
  const std::int64_t first = floor_eval(f, 1);
  if (first < 1) throw DomainError("counts_vector: floor(f(1)) < 1");
  if (n_max < first) throw DomainError("counts_vector: n_max below floor(f(1))");
  const double P = largest_preimage(f, static_cast<double>(n_max) + 1.0);
  const auto n_hi = static_cast<std::int64_t>(std::floor(P)) + 1;
  const std::vector<std::int64_t> floors = floor_table(f, n_hi, threads);

  CountsVector out;
  out.n_max = n_max;
  out.counts.assign(static_cast<std::size_t>(n_max) + 1, 0);
  out.source = f.to_string();
  for (std::size_t i = 0; i < floors.size(); ++i) {
    const std::int64_t m = floors[i];
    if (m < 1) throw DomainError("counts_vector: floor(f(" + std::to_string(i + 1) + ")) < 1");
    if (m <= n_max) {
      ++out.counts[static_cast<std::size_t>(m)];
      out.generator_range = static_cast<std::int64_t>(i + 1);
    }
  }
  return out;
}

namespace {

using ntt::u64;

class CrtBasis {
 public:
  explicit CrtBasis(std::vector<ntt::NttPrime> primes) : primes_(std::move(primes)) {
    for (std::size_t i = 1; i < primes_.size(); ++i) {
      const u64 p = primes_[i].p;
      Count prefix = 1;
      for (std::size_t j = 0; j < i; ++j) prefix = prefix * primes_[j].p % p;
      inverses_.push_back(ntt::inverse_mod(static_cast<u64>(prefix), p));
    }
  }

  const std::vector<ntt::NttPrime>& primes() const { return primes_; }

  // Garner reconstruction; the caller has proven the value is below 2^127.
  Count combine(const std::vector<std::vector<u64>>& residues, std::size_t index) const {
    Count x = residues[0][index];
    Count modulus = primes_[0].p;
    for (std::size_t i = 1; i < primes_.size(); ++i) {
      const u64 p = primes_[i].p;
      const u64 x_mod = static_cast<u64>(x % p);
      const u64 r = residues[i][index];
      const u64 diff = r >= x_mod ? r - x_mod : r + p - x_mod;
      const u64 t = static_cast<u64>(static_cast<Count>(diff) * inverses_[i - 1] % p);
      if (t != 0 && static_cast<Count>(t) > (~Count{0} - x) / modulus) {
        throw CapacityError("CRT reconstruction overflowed the certified range");
      }
      x += static_cast<Count>(t) * modulus;
      if (i + 1 < primes_.size()) modulus *= p;
    }
    return x;
  }

 private:
  std::vector<ntt::NttPrime> primes_;
  std::vector<u64> inverses_;
};

std::vector<Count> multiply(const std::vector<Count>& a, const std::vector<Count>& b, const CrtBasis& basis,
                            std::size_t out_len, int threads) {
  const auto& primes = basis.primes();
  std::vector<std::vector<u64>> residues(primes.size());
  auto channel = [&](std::size_t i) {
    const u64 p = primes[i].p;
    std::vector<u64> ra(a.size());
    std::vector<u64> rb(b.size());
    for (std::size_t j = 0; j < a.size(); ++j) ra[j] = static_cast<u64>(a[j] % p);
    for (std::size_t j = 0; j < b.size(); ++j) rb[j] = static_cast<u64>(b[j] % p);
    residues[i] = ntt::convolve_mod(ra, rb, primes[i], out_len);
  };
  if (threads > 1) {
    std::vector<std::future<void>> jobs;
    for (std::size_t i = 0; i < primes.size(); ++i) jobs.push_back(std::async(std::launch::async, channel, i));
    for (auto& job : jobs) job.get();
  } else {
    for (std::size_t i = 0; i < primes.size(); ++i) channel(i);
  }
  std::vector<Count> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) out[i] = basis.combine(residues, i);
  return out;
}

}  // namespace

RepTable rep_count_exact(const CountsVector& c, int s, std::int64_t n_max, const NttOptions& options) {
  if (s < 1) throw std::invalid_argument("rep_count_exact: s must be at least 1");
  if (n_max < 0 || n_max > c.n_max) throw std::invalid_argument("rep_count_exact: counts do not cover n_max");
  const auto len = static_cast<std::size_t>(n_max) + 1;
  std::vector<Count> base(c.counts.begin(), c.counts.begin() + static_cast<std::ptrdiff_t>(len));

  long double total = 0;
  for (Count v : base) total += static_cast<long double>(v);
  const long double bound = std::pow(total, static_cast<long double>(s));
  const long double log2_bound = total > 0 ? static_cast<long double>(s) * std::log2(total) : 0.0L;
  if (log2_bound >= 126.0L) {
    throw CapacityError("rep_count_exact: entry bound 2^" + std::to_string(static_cast<double>(log2_bound)) +
                        " exceeds the 127-bit count range");
  }

  // Smallest prime set whose product exceeds the entry bound (with one bit of margin).
  std::vector<ntt::NttPrime> primes;
  long double log2_product = 0.0L;
  while (primes.size() < options.min_primes || log2_product <= log2_bound + 1.0L) {
    if (primes.size() >= options.max_primes) {
      throw CapacityError("rep_count_exact: prime set too small to certify entries up to 2^" +
                          std::to_string(static_cast<double>(log2_bound)));
    }
    primes.push_back(ntt::prime_at(options.prime_offset + primes.size()));
    log2_product += std::log2(static_cast<long double>(primes.back().p));
  }
  const CrtBasis basis(primes);

  std::vector<Count> result;
  std::vector<Count> power = base;
  bool have_result = false;
  for (int e = s; e > 0; e >>= 1) {
    if (e & 1) {
      result = have_result ? multiply(result, power, basis, len, options.threads) : power;
      have_result = true;
    }
    if (e > 1) power = multiply(power, power, basis, len, options.threads);
  }

  RepTable table;
  table.s = s;
  table.values = std::move(result);
  for (const auto& p : primes) table.primes.push_back(p.p);
  table.entry_bound = bound;
  return table;
}

std::uint64_t rep_count_bruteforce(const PseudoPolynomial& f, int s, std::int64_t N) {
  if (s < 1 || s > 4 || N > 10000) throw BudgetError("rep_count_bruteforce: needs 1 <= s <= 4 and N <= 10^4");
  if (N < 1) return 0;
  std::vector<std::int64_t> values;
  const double P = largest_preimage(f, static_cast<double>(N) + 1.0);
  for (std::int64_t n = 1; n <= static_cast<std::int64_t>(P) + 1; ++n) {
    const std::int64_t m = floor_eval(f, n);
    if (m >= 1 && m <= N) values.push_back(m);
  }
  std::sort(values.begin(), values.end());

  auto count = [&](auto&& self, std::int64_t remaining, int parts) -> std::uint64_t {
    std::uint64_t total = 0;
    if (parts == 1) {
      for (std::int64_t v : values) {
        if (v > remaining) break;
        if (v == remaining) ++total;
      }
      return total;
    }
    for (std::int64_t v : values) {
      if (v > remaining) break;
      total += self(self, remaining - v, parts - 1);
    }
    return total;
  };
  return count(count, N, s);
}

std::vector<std::int64_t> unrepresentable(const PseudoPolynomial& f, int s, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) return {};
  const CountsVector c = counts_vector(f, std::max<std::int64_t>(hi, floor_eval(f, 1)));
  const RepTable table = rep_count_exact(c, s, hi);
  std::vector<std::int64_t> out;
  for (std::int64_t N = std::max<std::int64_t>(lo, 0); N <= hi; ++N) {
    if (table.values[static_cast<std::size_t>(N)] == 0) out.push_back(N);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::pair<std::int64_t, std::string>> read_pairs(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line) || line != header) throw std::invalid_argument("expected CSV header '" + header + "'");
  std::vector<std::pair<std::int64_t, std::string>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("malformed CSV row '" + line + "'");
    const std::int64_t key = std::stoll(line.substr(0, comma));
    if (key != static_cast<std::int64_t>(rows.size())) throw std::invalid_argument("CSV rows must be dense from 0");
    rows.emplace_back(key, line.substr(comma + 1));
  }
  return rows;
}

}  // namespace

void write_counts_csv(std::ostream& os, const CountsVector& c) {
  os << "m,c\n";
  for (std::size_t m = 0; m < c.counts.size(); ++m) os << m << ',' << c.counts[m] << '\n';
}

CountsVector read_counts_csv(std::istream& is) {
  CountsVector c;
  // generator_range and source are not recoverable from the histogram alone.
  for (const auto& [m, text] : read_pairs(is, "m,c")) c.counts.push_back(std::stoull(text));
  c.n_max = static_cast<std::int64_t>(c.counts.size()) - 1;
  return c;
}

void write_rep_table_csv(std::ostream& os, const RepTable& t) {
  os << "N,r\n";
  for (std::size_t n = 0; n < t.values.size(); ++n) os << n << ',' << to_string(t.values[n]) << '\n';
}

RepTable read_rep_table_csv(std::istream& is, int s) {
  RepTable t;
  t.s = s;
  for (const auto& [n, text] : read_pairs(is, "N,r")) t.values.push_back(parse_count(text));
  return t;
}

}  // namespace waring
