#include "waring/ntt.hpp"

#include <deque>
#include <mutex>
#include <stdexcept>

namespace waring::ntt {

namespace {

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

constexpr int kTwoAdicity = 40;

std::vector<u64> distinct_prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

NttPrime make_prime(u64 c) {
  NttPrime prime;
  prime.p = (c << kTwoAdicity) | 1u;
  prime.two_adicity = kTwoAdicity;
  std::vector<u64> factors = distinct_prime_factors(c);
  if (c % 2 != 0) factors.push_back(2);
  for (u64 g = 2;; ++g) {
    bool primitive = true;
    for (u64 q : factors) {
      if (powmod(g, (prime.p - 1) / q, prime.p) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      prime.generator = g;
      return prime;
    }
  }
}

void transform(std::vector<u64>& a, const Montgomery& mont, const std::vector<u64>& twiddles) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        u64 u = a[i + k];
        u64 v = mont.mul(a[i + k + half], twiddles[k * stride]);
        a[i + k] = mont.add(u, v);
        a[i + k + half] = mont.sub(u, v);
      }
    }
  }
}

std::vector<u64> twiddle_table(const Montgomery& mont, u64 root_mont, std::size_t n) {
  std::vector<u64> w(n / 2 == 0 ? 1 : n / 2);
  w[0] = mont.one();
  for (std::size_t i = 1; i < w.size(); ++i) w[i] = mont.mul(w[i - 1], root_mont);
  return w;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

const NttPrime& prime_at(std::size_t index) {
  static std::mutex mutex;
  static std::deque<NttPrime> primes;
  static u64 next_c = ((u64{1} << 62) - 1) >> kTwoAdicity;
  std::lock_guard<std::mutex> lock(mutex);
  while (primes.size() <= index) {
    if (next_c == 0) throw std::out_of_range("prime_at: scan exhausted");
    u64 c = next_c--;
    if (is_prime((c << kTwoAdicity) | 1u)) primes.push_back(make_prime(c));
  }
  return primes[index];
}

Montgomery::Montgomery(u64 p) : p_(p) {
  if (p % 2 == 0 || p >= (u64{1} << 62)) throw std::invalid_argument("Montgomery: need odd p < 2^62");
  u64 inv = p;
  for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
  neg_inv_ = ~inv + 1;
  u64 r = static_cast<u64>((static_cast<u128>(1) << 64) % p);
  one_ = r;
  r2_ = static_cast<u64>(static_cast<u128>(r) * r % p);
}

u64 Montgomery::pow(u64 base_mont, u64 e) const {
  u64 r = one_;
  while (e) {
    if (e & 1) r = mul(r, base_mont);
    base_mont = mul(base_mont, base_mont);
    e >>= 1;
  }
  return r;
}

u64 inverse_mod(u64 a, u64 m) {
  __int128 t = 0;
  __int128 new_t = 1;
  __int128 r = m;
  __int128 new_r = a % m;
  while (new_r != 0) {
    __int128 q = r / new_r;
    __int128 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw std::invalid_argument("inverse_mod: not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

std::vector<u64> convolve_mod(std::span<const u64> a, std::span<const u64> b, const NttPrime& prime,
                              std::size_t out_len) {
  if (a.empty() || b.empty() || out_len == 0) return std::vector<u64>(out_len, 0);
  const std::size_t full = a.size() + b.size() - 1;
  std::size_t n = 1;
  while (n < full) n <<= 1;
  if (n > (std::size_t{1} << prime.two_adicity)) throw std::length_error("convolve_mod: transform too long");

  const Montgomery mont(prime.p);
  const u64 root = mont.pow(mont.to_mont(prime.generator), (prime.p - 1) / n);
  const u64 root_inv = mont.pow(root, n - 1);

  std::vector<u64> fa(n, 0);
  std::vector<u64> fb(n, 0);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = mont.to_mont(a[i]);
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = mont.to_mont(b[i]);

  const std::vector<u64> forward = twiddle_table(mont, root, n);
  transform(fa, mont, forward);
  transform(fb, mont, forward);
  for (std::size_t i = 0; i < n; ++i) fa[i] = mont.mul(fa[i], fb[i]);
  transform(fa, mont, twiddle_table(mont, root_inv, n));

  const u64 n_inv = mont.to_mont(inverse_mod(n % prime.p, prime.p));
  std::vector<u64> out(out_len, 0);
  const std::size_t keep = std::min(out_len, full);
  for (std::size_t i = 0; i < keep; ++i) out[i] = mont.from_mont(mont.mul(fa[i], n_inv));
  return out;
}

}  // namespace waring::ntt
