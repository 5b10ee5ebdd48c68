#ifndef WARING_MAJORARC_HPP
#define WARING_MAJORARC_HPP

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "waring/bound_report.hpp"
#include "waring/pseudopoly.hpp"

namespace waring {

/// Denominator of the Gamma main term: Gamma(s/theta_d) or Gamma((s+1)/theta_d).
enum class MainTermConvention {
  kGammaOfSOverTheta,
  kGammaOfSPlusOneOverTheta,
};

inline constexpr MainTermConvention kDefaultConvention = MainTermConvention::kGammaOfSOverTheta;

std::string to_string(MainTermConvention convention);
std::optional<MainTermConvention> parse_convention(const std::string& name);

/// V(alpha) = (1/a_d)^{1/theta_d} (1/theta_d) sum_{m<=N} m^{1/theta_d - 1} e(alpha m),
/// with the weights precomputed so it can be evaluated at many alpha.
class WeightedSum {
 public:
  WeightedSum(const PseudoPolynomial& f, std::int64_t N);

  std::complex<double> operator()(double alpha) const;

  std::int64_t N() const { return N_; }
  /// (1/a_d)^{1/theta_d} / theta_d.
  double scale() const { return scale_; }
  /// weights()[m - 1] = m^{1/theta_d - 1}.
  const Eigen::VectorXd& weights() const { return weights_; }

 private:
  std::int64_t N_;
  double scale_;
  Eigen::VectorXd weights_;
};

std::complex<double> v_sum(double alpha, std::int64_t N, const PseudoPolynomial& f);

/// sup over the grid of |V(alpha)| / min(P, |alpha|^{-1/theta_d}); the
/// report carries the maximising alpha. Requires |alpha| <= 1/2.
BoundReport check_v_bound(const PseudoPolynomial& f, std::int64_t N, std::span<const double> alpha_grid);

/// F(alpha) = sum_{m <= P} e(alpha floor(f(m))).
std::complex<double> f_sum(double alpha, const PseudoPolynomial& f, double P);
/// Same with floors[m - 1] = floor(f(m)) precomputed.
std::complex<double> f_sum(double alpha, std::span<const std::int64_t> floors);

/// |F(alpha) - V(alpha)| / P^{theta_{d-1} - theta_d + 1 + v} (theta_0 = 1).
/// Throws ArcError if alpha is on the minor arc.
BoundReport compare_f_v(const PseudoPolynomial& f, std::int64_t N, double alpha,
                        std::optional<double> v = std::nullopt);

struct NathansonResult {
  double exact_sum = 0.0;    // sum_{m=1}^{N-1} m^{beta-1} (N-m)^{alpha-1}
  double gamma_value = 0.0;  // N^{alpha+beta-1} Gamma(alpha) Gamma(beta) / Gamma(alpha+beta)
};

/// Throws DomainError unless 0 < beta <= 1 and alpha >= beta.
NathansonResult nathanson_sum(double alpha_exp, double beta_exp, std::int64_t N);

/// Truncated linear convolution (a * b)[0, out_len) via real FFT.
Eigen::VectorXd truncated_convolution(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Eigen::Index out_len);

/// J_s(N) = (1/a_d)^{s/theta_d} (1/theta_d)^s sum_{m_1+...+m_s=N} (m_1...m_s)^{1/theta_d-1}.
/// Requires 2 <= s and N <= 10^6.
double exact_js(const PseudoPolynomial& f, int s, std::int64_t N);

/// (1/a_d)^{s/theta_d} Gamma(1+1/theta_d)^s / Gamma(D) N^{s/theta_d - 1}.
double gamma_main_term(const PseudoPolynomial& f, int s, double N, MainTermConvention convention);

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::size_t panels = 0;
};

/// Adaptive Gauss-Kronrod integral of V(alpha)^s e(-alpha N) over
/// [-limit, limit], panels no wider than 1/(4N). The absolute tolerance is
/// tolerance * sup|V|^s over the whole interval.
QuadratureResult singular_integral_quadrature(const PseudoPolynomial& f, int s, std::int64_t N, double limit,
                                              double tolerance = 1e-8);

/// |J(N) - J*(N)| against P^{s - theta_d - delta_2}, delta_2 = v (s/theta_d - 1).
/// Throws DomainError unless s > theta_d.
BoundReport check_singular_tail(const PseudoPolynomial& f, int s, std::int64_t N,
                                std::optional<double> v = std::nullopt);

}  // namespace waring

#endif  // WARING_MAJORARC_HPP
