#include "waring/majorarc.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "waring/errors.hpp"
#include "waring/phase.hpp"
#include "waring/repcount.hpp"

namespace waring {

std::string to_string(MainTermConvention convention) {
  switch (convention) {
    case MainTermConvention::kGammaOfSOverTheta:
      return "gamma_s_over_theta";
    case MainTermConvention::kGammaOfSPlusOneOverTheta:
      return "gamma_s_plus_one_over_theta";
  }
  return "unknown";
}

std::optional<MainTermConvention> parse_convention(const std::string& name) {
  if (name == "gamma_s_over_theta") return MainTermConvention::kGammaOfSOverTheta;
  if (name == "gamma_s_plus_one_over_theta") return MainTermConvention::kGammaOfSPlusOneOverTheta;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// V(alpha)

WeightedSum::WeightedSum(const PseudoPolynomial& f, std::int64_t N) : N_(N) {
  if (N < 1) throw DomainError("WeightedSum: N must be positive");
  const double theta = f.leading_exponent();
  scale_ = std::pow(1.0 / f.leading_coefficient(), 1.0 / theta) / theta;
  weights_.resize(N);
  const double e = 1.0 / theta - 1.0;
  for (std::int64_t m = 1; m <= N; ++m) weights_[m - 1] = std::pow(static_cast<double>(m), e);
}

std::complex<double> WeightedSum::operator()(double alpha) const {
  // e(alpha m) by rotation, re-seeded exactly every 64 terms.
  constexpr std::int64_t kBlock = 64;
  const std::complex<double> step = unit_phase(alpha - std::floor(alpha));
  CompensatedComplexSum sum;
  for (std::int64_t start = 1; start <= N_; start += kBlock) {
    std::complex<double> z = unit_phase(reduced_product(alpha, start));
    const std::int64_t stop = std::min(N_, start + kBlock - 1);
    for (std::int64_t m = start; m <= stop; ++m) {
      sum.add(weights_[m - 1] * z);
      z *= step;
    }
  }
  return scale_ * sum.value();
}

std::complex<double> v_sum(double alpha, std::int64_t N, const PseudoPolynomial& f) {
  return WeightedSum(f, N)(alpha);
}

BoundReport check_v_bound(const PseudoPolynomial& f, std::int64_t N, std::span<const double> alpha_grid) {
  if (alpha_grid.empty()) throw std::invalid_argument("check_v_bound: empty grid");
  const WeightedSum V(f, N);
  const double P = largest_preimage(f, static_cast<double>(N));
  const double theta = f.leading_exponent();
  double best_ratio = -1.0;
  double best_alpha = 0.0;
  double best_value = 0.0;
  double best_bound = 1.0;
  for (double alpha : alpha_grid) {
    if (std::abs(alpha) > 0.5) throw DomainError("check_v_bound: |alpha| must be at most 1/2");
    const double bound = alpha == 0.0 ? P : std::min(P, std::pow(std::abs(alpha), -1.0 / theta));
    const double value = std::abs(V(alpha));
    if (value / bound > best_ratio) {
      best_ratio = value / bound;
      best_alpha = alpha;
      best_value = value;
      best_bound = bound;
    }
  }
  return BoundReport::make("lemma_v_bound",
                           {{"N", static_cast<double>(N)}, {"P", P}, {"alpha", best_alpha},
                            {"grid_size", static_cast<double>(alpha_grid.size())}},
                           best_value, best_bound);
}

// ---------------------------------------------------------------------------
// F(alpha)

std::complex<double> f_sum(double alpha, std::span<const std::int64_t> floors) {
  CompensatedComplexSum sum;
  for (std::int64_t m : floors) sum.add(unit_phase(reduced_product(alpha, m)));
  return sum.value();
}

std::complex<double> f_sum(double alpha, const PseudoPolynomial& f, double P) {
  if (P < 1.0) throw DomainError("f_sum: P must be at least 1");
  const auto floors = floor_table(f, static_cast<std::int64_t>(std::floor(P)));
  return f_sum(alpha, floors);
}

BoundReport compare_f_v(const PseudoPolynomial& f, std::int64_t N, double alpha, std::optional<double> v) {
  const ArcSetup arc(f, N, v);
  if (!arc.is_major(alpha)) throw ArcError("compare_f_v: alpha is on the minor arc");
  const auto floors = floor_table(f, static_cast<std::int64_t>(std::floor(arc.P())));
  const std::complex<double> F = f_sum(alpha, floors);
  const std::complex<double> V = v_sum(alpha, N, f);
  const double exponent =
      f.previous_exponent(ThetaZero::kMajorArc) - f.leading_exponent() + 1.0 + arc.v();
  return BoundReport::make("lemma_f_minus_v",
                           {{"N", static_cast<double>(N)}, {"alpha", alpha}, {"P", arc.P()}, {"v", arc.v()}},
                           std::abs(F - V), std::pow(arc.P(), exponent));
}

// ---------------------------------------------------------------------------
// Singular integral

NathansonResult nathanson_sum(double alpha_exp, double beta_exp, std::int64_t N) {
  if (!(beta_exp > 0.0 && beta_exp <= 1.0) || !(alpha_exp >= beta_exp)) {
    throw DomainError("nathanson_sum: requires 0 < beta <= 1 and alpha >= beta");
  }
  if (N < 2) throw DomainError("nathanson_sum: N must be at least 2");
  CompensatedSum sum;
  const double n = static_cast<double>(N);
  for (std::int64_t m = 1; m < N; ++m) {
    const double x = static_cast<double>(m);
    sum.add(std::pow(x, beta_exp - 1.0) * std::pow(n - x, alpha_exp - 1.0));
  }
  NathansonResult out;
  out.exact_sum = sum.value();
  out.gamma_value = std::exp((alpha_exp + beta_exp - 1.0) * std::log(n) + std::lgamma(alpha_exp) +
                             std::lgamma(beta_exp) - std::lgamma(alpha_exp + beta_exp));
  return out;
}

Eigen::VectorXd truncated_convolution(const Eigen::VectorXd& a, const Eigen::VectorXd& b, Eigen::Index out_len) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(out_len);
  if (a.size() == 0 || b.size() == 0 || out_len == 0) return out;
  const Eigen::Index na = std::min(a.size(), out_len);
  const Eigen::Index nb = std::min(b.size(), out_len);
  if (na * nb <= 4096) {
    for (Eigen::Index i = 0; i < na; ++i) {
      for (Eigen::Index j = 0; j < nb && i + j < out_len; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }
  Eigen::Index n = 1;
  while (n < na + nb - 1) n <<= 1;
  std::vector<double> ta(static_cast<std::size_t>(n), 0.0);
  std::vector<double> tb(static_cast<std::size_t>(n), 0.0);
  std::copy(a.data(), a.data() + na, ta.begin());
  std::copy(b.data(), b.data() + nb, tb.begin());
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> fa;
  std::vector<std::complex<double>> fb;
  fft.fwd(fa, ta);
  fft.fwd(fb, tb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  std::vector<double> result;
  fft.inv(result, fa);
  for (Eigen::Index i = 0; i < out_len && i < n; ++i) out[i] = result[static_cast<std::size_t>(i)];
  return out;
}

double exact_js(const PseudoPolynomial& f, int s, std::int64_t N) {
  if (s < 2) throw DomainError("exact_js: s must be at least 2");
  if (N < 1 || N > 1'000'000) throw DomainError("exact_js: N must lie in [1, 10^6]");
  const double theta = f.leading_exponent();
  const Eigen::Index len = N + 1;
  Eigen::VectorXd w(len);
  w[0] = 0.0;
  for (Eigen::Index m = 1; m < len; ++m) w[m] = std::pow(static_cast<double>(m), 1.0 / theta - 1.0);

  auto power = [&](int k) {
    Eigen::VectorXd p = w;
    for (int i = 1; i < k; ++i) p = truncated_convolution(p, w, len);
    return p;
  };
  const Eigen::VectorXd A = power((s + 1) / 2);
  const Eigen::VectorXd B = (s / 2 == (s + 1) / 2) ? A : power(s / 2);
  CompensatedSum sum;
  for (Eigen::Index m = 0; m <= N; ++m) sum.add(A[m] * B[N - m]);
  const double scale = std::pow(1.0 / f.leading_coefficient(), s / theta) * std::pow(1.0 / theta, s);
  return scale * sum.value();
}

double gamma_main_term(const PseudoPolynomial& f, int s, double N, MainTermConvention convention) {
  if (s < 2) throw DomainError("gamma_main_term: s must be at least 2");
  const double theta = f.leading_exponent();
  const double denominator_arg =
      convention == MainTermConvention::kGammaOfSOverTheta ? s / theta : (s + 1) / theta;
  const double log_value = (s / theta) * std::log(1.0 / f.leading_coefficient()) +
                           s * std::lgamma(1.0 + 1.0 / theta) - std::lgamma(denominator_arg) +
                           (s / theta - 1.0) * std::log(N);
  return std::exp(log_value);
}

namespace {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kMaxDepth = 20;

template <typename Integrand>
struct PanelRule {
  std::complex<double> kronrod;
  std::complex<double> gauss;
};

template <typename Integrand>
PanelRule<Integrand> apply_rule(const Integrand& g, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::complex<double> k = kKronrodWeights[7] * g(center);
  std::complex<double> gs = kGaussWeights[3] * g(center);
  for (int i = 0; i < 7; ++i) {
    const std::complex<double> pair = g(center - half * kKronrodNodes[i]) + g(center + half * kKronrodNodes[i]);
    k += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gs += kGaussWeights[i / 2] * pair;
  }
  return {k * half, gs * half};
}

template <typename Integrand>
void integrate_panel(const Integrand& g, double a, double b, double tol, int depth, CompensatedComplexSum& sum,
                     CompensatedSum& error, std::size_t& panels) {
  const auto rule = apply_rule(g, a, b);
  const double estimate = std::abs(rule.kronrod - rule.gauss);
  if (estimate <= tol) {
    sum.add(rule.kronrod);
    error.add(estimate);
    ++panels;
    return;
  }
  if (depth >= kMaxDepth) throw std::runtime_error("singular_integral_quadrature: no convergence");
  const double mid = 0.5 * (a + b);
  integrate_panel(g, a, mid, 0.5 * tol, depth + 1, sum, error, panels);
  integrate_panel(g, mid, b, 0.5 * tol, depth + 1, sum, error, panels);
}

}  // namespace

QuadratureResult singular_integral_quadrature(const PseudoPolynomial& f, int s, std::int64_t N, double limit,
                                              double tolerance) {
  if (s < 1) throw DomainError("singular_integral_quadrature: s must be positive");
  if (!(limit > 0.0 && limit <= 0.5)) throw DomainError("singular_integral_quadrature: limit must lie in (0, 1/2]");
  const WeightedSum V(f, N);
  const double n = static_cast<double>(N);
  auto integrand = [&](double alpha) {
    const std::complex<double> v = V(alpha);
    std::complex<double> p = v;
    for (int i = 1; i < s; ++i) p *= v;
    return p * unit_phase(-reduced_product(alpha, N));
  };
  const double sup = std::pow(std::abs(V(0.0)), s);
  const double width = 2.0 * limit;
  const auto initial = static_cast<std::int64_t>(std::ceil(width * 4.0 * n));
  const double panel = width / static_cast<double>(initial);
  const double panel_tol = tolerance * sup * panel / width;

  CompensatedComplexSum sum;
  CompensatedSum error;
  std::size_t panels = 0;
  for (std::int64_t i = 0; i < initial; ++i) {
    const double a = -limit + static_cast<double>(i) * panel;
    const double b = (i + 1 == initial) ? limit : a + panel;
    integrate_panel(integrand, a, b, panel_tol, 0, sum, error, panels);
  }
  return {sum.value(), error.value(), panels};
}

BoundReport check_singular_tail(const PseudoPolynomial& f, int s, std::int64_t N, std::optional<double> v) {
  const double theta = f.leading_exponent();
  if (!(s > theta)) throw DomainError("check_singular_tail: requires s > theta_d");
  const ArcSetup arc(f, N, v);
  const auto full = singular_integral_quadrature(f, s, N, 0.5);
  const auto major = singular_integral_quadrature(f, s, N, 1.0 / arc.tau());
  const double delta2 = arc.v() * (s / theta - 1.0);
  return BoundReport::make("lemma_singular_tail",
                           {{"N", static_cast<double>(N)}, {"s", static_cast<double>(s)}, {"P", arc.P()}, {"v", arc.v()},
                            {"J", full.value.real()}, {"J_star", major.value.real()}},
                           std::abs(full.value - major.value), std::pow(arc.P(), s - theta - delta2));
}

}  // namespace waring
