#ifndef WARING_NTT_HPP
#define WARING_NTT_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace waring::ntt {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Prime p = c * 2^k + 1 below 2^62 with a primitive root.
struct NttPrime {
  u64 p = 0;
  u64 generator = 0;
  int two_adicity = 0;
};

bool is_prime(u64 n);

/// The i-th prime of the fixed descending scan c * 2^40 + 1 < 2^62.
/// Deterministic, so prime sets are reproducible across runs.
const NttPrime& prime_at(std::size_t index);

/// Montgomery arithmetic modulo an odd p < 2^62.
class Montgomery {
 public:
  explicit Montgomery(u64 p);

  u64 modulus() const { return p_; }
  u64 to_mont(u64 a) const { return reduce(static_cast<u128>(a % p_) * r2_); }
  u64 from_mont(u64 a) const { return reduce(a); }
  u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
  u64 pow(u64 base_mont, u64 e) const;
  u64 one() const { return one_; }

 private:
  u64 reduce(u128 t) const {
    u64 m = static_cast<u64>(t) * neg_inv_;
    u64 r = static_cast<u64>((t + static_cast<u128>(m) * p_) >> 64);
    return r >= p_ ? r - p_ : r;
  }

  u64 p_;
  u64 neg_inv_;
  u64 r2_;
  u64 one_;
};

/// Cyclic convolution of residues modulo prime.p, truncated to out_len.
std::vector<u64> convolve_mod(std::span<const u64> a, std::span<const u64> b, const NttPrime& prime,
                              std::size_t out_len);

/// Modular inverse for coprime a, m (m < 2^63).
u64 inverse_mod(u64 a, u64 m);

}  // namespace waring::ntt

#endif  // WARING_NTT_HPP
