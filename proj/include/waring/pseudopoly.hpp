#ifndef WARING_PSEUDOPOLY_HPP
#define WARING_PSEUDOPOLY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "waring/bigfloat.hpp"
#include "waring/exact_real.hpp"

namespace waring {

/// One term a * x^theta.
struct Term {
  ExactReal coefficient;
  ExactReal exponent;
};

/// Unconstrained sum of power terms, e.g. a derivative of a pseudo-polynomial.
using TermList = std::vector<Term>;

double eval_terms(const TermList& terms, double x);
long double eval_terms(const TermList& terms, long double x);

/// j-th derivative with falling-factorial coefficients. Terms with an
/// integer exponent smaller than j vanish identically and are dropped.
TermList derivative(const TermList& terms, int j);

/// Which value the empty exponent theta_0 takes when d = 1.
enum class ThetaZero {
  kTheorem,   // theta_0 = 0: main theorem and rho
  kMajorArc,  // theta_0 = 1: choice of v and the F - V comparison
};

inline constexpr double kThetaZeroTheorem = 0.0;
inline constexpr double kThetaZeroMajorArc = 1.0;

/// f(x) = sum_i a_i x^{theta_i} with 1 <= theta_1 < ... < theta_d, a_d > 0.
class PseudoPolynomial {
 public:
  /// Sorts the terms by exponent. Throws std::invalid_argument on an empty
  /// list, a zero coefficient, a repeated exponent, an exponent below 1 or a
  /// non-positive leading coefficient.
  explicit PseudoPolynomial(TermList terms);

  /// Parses "2*x^2.5 + 1*x^1", "x^(3/2) - 0.5*x". Throws ParseError.
  static PseudoPolynomial parse(std::string_view literal);

  const TermList& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  double leading_coefficient() const { return terms_.back().coefficient.value(); }
  double leading_exponent() const { return terms_.back().exponent.value(); }

  /// theta_{d-1}, with the requested theta_0 when d = 1.
  double previous_exponent(ThetaZero convention) const;

  /// True iff every exponent is an integer (ordinary polynomial).
  bool classical_mode() const { return classical_; }

  /// The largest non-integer exponent, absent in classical mode.
  std::optional<ExactReal> largest_non_integer_exponent() const;

  double operator()(double x) const { return eval_terms(terms_, x); }
  long double operator()(long double x) const { return eval_terms(terms_, x); }

  std::string to_string() const;

 private:
  TermList terms_;
  bool classical_ = true;
};

/// Value with a certified absolute error radius.
struct Ball {
  BigFloat mid;
  BigFloat radius;

  double value() const { return mid.to_double(); }
  double radius_upper() const { return radius.to_double(MPFR_RNDU); }
};

/// Evaluates f(x) at the given working precision. Throws DomainError for
/// x <= 0 or precision < 53, PrecisionError when the radius exceeds
/// 2^{-precision/2} |value|.
Ball eval(const PseudoPolynomial& f, double x, int precision_bits);

/// Certified floor(f(n)) for n >= 1.
std::int64_t floor_eval(const PseudoPolynomial& f, std::int64_t n);

/// {f(n)} = f(n) - floor(f(n)), consistent with floor_eval.
double fractional_part(const PseudoPolynomial& f, std::int64_t n);

/// Largest real solution of f(x) = N. Throws NoSolutionError when N < f(1).
double largest_preimage(const PseudoPolynomial& f, double N);

/// P - (N / a_d)^{1/theta_d}.
double p_deviation(const PseudoPolynomial& f, double N);

TermList derivative(const PseudoPolynomial& f, int j);

struct TheoremConstants {
  double rho = 0.0;
  std::int64_t s_min = 0;
  double s_bound = 0.0;  // (2/rho) ceil(theta_d)^2 (ceil(theta_d)+1)
};

/// rho = min(theta_d - theta_{d-1}, 1/6) with theta_0 = 0, and the smallest
/// s strictly above the theorem's bound.
TheoremConstants theorem_constants(const PseudoPolynomial& f);

/// N, P, v and tau = P^{theta_d - v} for one target N.
class ArcSetup {
 public:
  /// Throws DomainError unless 0 < v < v_cap(f) and tau > 1.
  ArcSetup(const PseudoPolynomial& f, std::int64_t N, std::optional<double> v = std::nullopt);

  /// min(theta_d - theta_{d-1}, 1/5) with theta_0 = 1.
  static double v_cap(const PseudoPolynomial& f);
  /// 0.9 * v_cap(f).
  static double default_v(const PseudoPolynomial& f);

  std::int64_t N() const { return N_; }
  double P() const { return P_; }
  double v() const { return v_; }
  double tau() const { return tau_; }
  double rho() const { return rho_; }

  /// ||alpha|| < 1/tau.
  bool is_major(double alpha) const;

 private:
  std::int64_t N_;
  double P_;
  double v_;
  double tau_;
  double rho_;
};

/// Distance to the nearest integer.
double distance_to_integer(double alpha);

}  // namespace waring

#endif  // WARING_PSEUDOPOLY_HPP
