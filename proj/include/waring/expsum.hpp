#ifndef WARING_EXPSUM_HPP
#define WARING_EXPSUM_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "waring/bound_report.hpp"
#include "waring/pseudopoly.hpp"
#include "waring/repcount.hpp"

namespace waring {

/// g(x) = beta * sum_i a_i x^{theta_i}. Either a scaled pseudo-polynomial or
/// an explicit term list, where exponent 0 (a constant) is allowed.
class PhaseFunction {
 public:
  static PhaseFunction scaled(const PseudoPolynomial& f, double beta);
  static PhaseFunction explicit_terms(TermList terms, double beta = 1.0);

  double beta() const { return beta_; }
  const TermList& terms() const { return terms_; }

  long double value(long double x) const;
  /// g^{(j)}(x) for 0 <= j <= 10.
  double derivative(int j, double x) const;
  /// g(n) mod 1 in [0, 1), reduced term by term.
  double reduced(std::int64_t n) const;

 private:
  PhaseFunction(TermList terms, double beta) : terms_(std::move(terms)), beta_(beta) {}
  TermList terms_;
  double beta_;
};

/// sum_{n=lo}^{hi} e(g(n)). Throws DomainError if lo > hi.
std::complex<double> weyl_sum(const PhaseFunction& g, std::int64_t lo, std::int64_t hi);
/// out[i] = sum_{n=lo}^{lo+i} e(g(n)): every initial segment in one pass.
std::vector<std::complex<double>> weyl_partial_sums(const PhaseFunction& g, std::int64_t lo, std::int64_t hi);

/// lambda^{-1}; requires 0 < lambda < 1/2.
double kusmin_landau_bound(double lambda);
/// |I| eta lambda^{1/2} + lambda^{-1/2}; requires lambda > 0, eta >= 1, |I| >= 0.
double van_der_corput_bound(double interval_len, double lambda, double eta);
/// Q^{1 - delta/(k(k+1))}; requires k >= 2 and 0 < delta <= k + 1.
double vinogradov_prop_bound(double Q, int k, double delta);
/// N^{s+eps} + N^{2s - k(k+1)/2 + eps}.
double bdg_bound(int s, int k, double N, double eps);

enum class CaseLabel { k1_1, k1_2, k2_1, k2_2, k2_3, k2_4, kGap };
std::string to_string(CaseLabel label);

struct DyadicBlock {
  int w = 0;
  double Q = 0.0;  // block ]Q, 2Q], Q = P 2^{-w-1}
  CaseLabel label = CaseLabel::kGap;
  std::string formula;
  double lambda = 0.0;
  double bound = 0.0;  // evaluated case bound; the trivial Q for gaps
};

struct DyadicPlan {
  double P = 0.0;
  double beta = 0.0;
  double v = 0.0;
  double rho = 0.0;
  int W = 0;
  bool case_one = true;  // theta_d is the largest non-integer exponent
  int k = 0;             // derivative order used by the Vinogradov-type cases
  std::vector<DyadicBlock> blocks;
  /// W', W'', W''' for case 2 (only W' for case 1): blocks before each
  /// split carry an earlier label in the case order.
  std::vector<int> split_points;
  bool labels_monotone = true;
  std::size_t gap_count = 0;
  double tail = 0.0;       // P 2^{-W}, the trivial bound for m <= P/2^W
  double block_sum = 0.0;  // sum of block bounds plus tail
  double combined_estimate = 0.0;  // P^{1 - v/(ceil(theta_d)(ceil(theta_d)+1))}

  nlohmann::json to_json() const;
};

/// Dyadic case analysis of sum_{m<=P} e(beta f(m)). Requires
/// |beta| > P^{v - theta_d}. W defaults to floor(log2 P), which runs the
/// blocks down to m = 1.
DyadicPlan classify_and_bound(const PseudoPolynomial& f, double beta, double P, double v,
                              std::optional<int> W = std::nullopt);

/// max |F(alpha)| over `samples` golden-ratio points of the minor arc,
/// against P^{1 - v/(2 ceil(theta_d)(ceil(theta_d)+1))}.
BoundReport minor_arc_sup(const PseudoPolynomial& f, std::int64_t N, int samples, std::uint64_t seed = 0,
                          std::optional<double> v = std::nullopt, unsigned threads = 1);

/// i-th minor-arc sample in [1/tau, 1 - 1/tau].
double minor_arc_sample(double tau, int index, std::uint64_t seed);

struct VinogradovCount {
  int s = 0;
  int k = 0;
  std::int64_t N = 0;
  Count count = 0;
};

/// Number of solutions of sum_{i<=s} n_i^j = sum_{i<=s} m_i^j (1 <= j <= k)
/// in [1, N]. Requires 2 s log2 N <= 48.
VinogradovCount vinogradov_integral(int s, int k, std::int64_t N, bool reverse_order = false);

/// Counts n in [M, M + Nlen) with ||phi(n)|| <= D delta against
/// (Nlen c delta + 1)(2D + 1). The spacing hypothesis
/// delta <= phi(n+1) - phi(n) <= c delta is checked on [M, M + Nlen - 2];
/// HypothesisError names the first offender. c delta > 1/2 is rejected too.
BoundReport fractional_count_check(const std::function<double(std::int64_t)>& phi, std::int64_t M,
                                   std::int64_t Nlen, double delta, double c, double D);

}  // namespace waring

#endif  // WARING_EXPSUM_HPP
