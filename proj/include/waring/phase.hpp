#ifndef WARING_PHASE_HPP
#define WARING_PHASE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace waring {

/// e(t) = exp(2 pi i t).
inline std::complex<double> unit_phase(double t) {
  const double angle = 2.0 * std::numbers::pi * t;
  return {std::cos(angle), std::sin(angle)};
}

/// alpha * m reduced mod 1 into [0, 1), using the exact product split
/// hi + lo from fma so large m does not lose the fractional digits.
inline double reduced_product(double alpha, std::int64_t m) {
  const double x = static_cast<double>(m);
  const double hi = alpha * x;
  const double lo = std::fma(alpha, x, -hi);
  double frac = (hi - std::floor(hi)) + lo;
  frac -= std::floor(frac);
  return frac;
}

/// Neumaier-compensated sum of doubles.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace waring

#endif  // WARING_PHASE_HPP
