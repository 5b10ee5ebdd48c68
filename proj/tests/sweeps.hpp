#ifndef WARING_TESTS_SWEEPS_HPP
#define WARING_TESTS_SWEEPS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "waring/expsum.hpp"

// Both estimates hold on every subinterval of a block, so the fitted constant
// at scale Q is the sup over initial segments of [Q, 2Q] and over 20 phases.
namespace sweeps {

inline constexpr int kPhases = 20;

// g = beta x^(3/2) with g' running through [top / sqrt 2, top] on [Q, 2Q].
inline double kusmin_landau_max_ratio(std::int64_t Q) {
  const auto f = waring::PseudoPolynomial::parse("x^(3/2)");
  double worst = 0.0;
  for (int i = 0; i < kPhases; ++i) {
    const double top = 0.2 + 0.75 * i / (kPhases - 1);
    const double beta = top / (1.5 * std::sqrt(2.0 * static_cast<double>(Q)));
    const double lambda = 0.99 * std::min(top / std::sqrt(2.0), 1.0 - top);
    const auto g = waring::PhaseFunction::scaled(f, beta);
    for (const auto& z : waring::weyl_partial_sums(g, Q, 2 * Q)) {
      worst = std::max(worst, std::abs(z) / waring::kusmin_landau_bound(lambda));
    }
  }
  return worst;
}

// g = beta x^(3/2) on ]Q, 2Q]: lambda = g''(2Q), eta = g''(Q) / g''(2Q).
inline double van_der_corput_max_ratio(std::int64_t Q) {
  const auto f = waring::PseudoPolynomial::parse("x^(3/2)");
  double worst = 0.0;
  for (int i = 0; i < kPhases; ++i) {
    const double beta = 0.01 * std::pow(2000.0, static_cast<double>(i) / (kPhases - 1));
    const auto g = waring::PhaseFunction::scaled(f, beta);
    const double lambda = std::abs(g.derivative(2, 2.0 * static_cast<double>(Q)));
    const double eta = std::abs(g.derivative(2, static_cast<double>(Q))) / lambda;
    const auto partial = waring::weyl_partial_sums(g, Q + 1, 2 * Q);
    for (std::size_t len = 1; len <= partial.size(); ++len) {
      const double bound = waring::van_der_corput_bound(static_cast<double>(len), lambda, eta);
      worst = std::max(worst, std::abs(partial[len - 1]) / bound);
    }
  }
  return worst;
}

}  // namespace sweeps

#endif  // WARING_TESTS_SWEEPS_HPP
