#ifndef WARING_VAALER_HPP
#define WARING_VAALER_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "waring/bound_report.hpp"
#include "waring/pseudopoly.hpp"

namespace waring {

/// Vaaler's multiplier J(t) = pi t (1 - t) cot(pi t) + t on [0, 1).
double vaaler_multiplier(double t);

/// Degree-H trigonometric approximation of the indicator of [left, right).
class TrigPolyApprox {
 public:
  double left() const { return left_; }
  double right() const { return right_; }
  int H() const { return H_; }
  double constant() const { return right_ - left_; }
  /// coefficient(h) for 0 < |h| <= H; coefficient(-h) = conj(coefficient(h)).
  std::complex<double> coefficient(int h) const;

  /// chi*(x), real by construction.
  double operator()(double x) const;
  /// Indicator of [left, right) at x mod 1.
  double indicator(double x) const;

  nlohmann::json to_json() const;

 private:
  friend TrigPolyApprox vaaler_approx(double left, double right, int H);
  double left_ = 0.0;
  double right_ = 0.0;
  int H_ = 0;
  std::vector<std::complex<double>> positive_;  // positive_[h - 1], h = 1..H
};

/// Requires H >= 1 and 0 <= left <= right <= 1. A zero-length interval
/// gives the zero polynomial.
TrigPolyApprox vaaler_approx(double left, double right, int H);

/// Normalized Fejer kernel (sin(pi(H+1)x) / ((H+1) sin(pi x)))^2, 1 at integers.
double fejer_majorant(int H, double x);

struct VaalerCheck {
  /// quantity = max over the grid of |chi - chi*| - (K(x - a) + K(x - b)),
  /// bound = the 1e-12 slack.
  BoundReport report;
  std::size_t violations = 0;
  double worst_x = 0.0;
};

VaalerCheck check_vaaler_error(const TrigPolyApprox& approx, std::span<const double> grid);

inline constexpr double kVaalerSlack = 1e-12;

/// Interval-by-interval view of F(alpha) on the partition I_b = [b/B, (b+1)/B).
struct FloorDecomposition {
  std::int64_t N = 0;
  double alpha = 0.0;
  int B = 0;
  int H = 0;
  double P = 0.0;
  double v = 0.0;
  double q_minor = 0.0;  // P^{v/(2 c (c+1))}, c = ceil(theta_d)
  std::complex<double> F;
  /// sum over {f(m)} in I_b of e(alpha floor(f(m))): an exact partition of F.
  std::vector<std::complex<double>> floor_split;
  /// (i) sum_m e(alpha f(m)) chi_{I_b}({f(m)}).
  std::vector<std::complex<double>> smooth_split;
  /// (ii) the same with chi* in place of chi.
  std::vector<std::complex<double>> vaaler_split;
  /// (iii) sum_m (chi - chi*)({f(m)}).
  std::vector<double> residual;
  double smooth_abs_sum = 0.0;  // sum_b |(i)_b|
  double floor_gap_bound = 0.0;  // 2 pi |alpha| P / B, so |F| <= smooth_abs_sum + floor_gap_bound
  double exp_sum_shape = 0.0;    // P^{1 - v/(c(c+1))}
  double vaaler_term_bound = 0.0;  // (1/q + log H) P^{1 - v/(c(c+1))}
  double minor_arc_shape = 0.0;    // P^{1 - v/(2c(c+1))}

  nlohmann::json to_json() const;
};

/// Throws ArcError if alpha lies on the major arc.
FloorDecomposition floor_decomposition_terms(const PseudoPolynomial& f, std::int64_t N, double alpha, int B, int H,
                                             std::optional<double> v = std::nullopt);

}  // namespace waring

#endif  // WARING_VAALER_HPP
