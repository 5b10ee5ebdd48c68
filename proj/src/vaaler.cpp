#include "waring/vaaler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "waring/errors.hpp"
#include "waring/majorarc.hpp"
#include "waring/phase.hpp"
#include "waring/repcount.hpp"

namespace waring {

double vaaler_multiplier(double t) {
  if (!(t >= 0.0 && t < 1.0)) throw DomainError("vaaler_multiplier: t must lie in [0, 1)");
  if (t == 0.0) return 1.0;
  const double pt = std::numbers::pi * t;
  return pt * (1.0 - t) * std::cos(pt) / std::sin(pt) + t;
}

TrigPolyApprox vaaler_approx(double left, double right, int H) {
  if (H < 1) throw DomainError("vaaler_approx: H must be positive");
  if (!(left >= 0.0 && left <= right && right <= 1.0)) {
    throw DomainError("vaaler_approx: need 0 <= left <= right <= 1");
  }
  TrigPolyApprox p;
  p.left_ = left;
  p.right_ = right;
  p.H_ = H;
  p.positive_.reserve(static_cast<std::size_t>(H));
  // chi = (b - a) + psi(x - b) - psi(x - a), with psi replaced by its
  // degree-H approximant -sum J(|h|/(H+1)) e(hx) / (2 pi i h).
  for (int h = 1; h <= H; ++h) {
    const double J = vaaler_multiplier(static_cast<double>(h) / (H + 1));
    const std::complex<double> diff = unit_phase(-reduced_product(left, h)) - unit_phase(-reduced_product(right, h));
    const std::complex<double> denom(0.0, 2.0 * std::numbers::pi * h);
    p.positive_.push_back(left == right ? std::complex<double>{} : J * diff / denom);
  }
  return p;
}

std::complex<double> TrigPolyApprox::coefficient(int h) const {
  if (h == 0 || std::abs(h) > H_) throw DomainError("TrigPolyApprox: need 0 < |h| <= H");
  const auto c = positive_[static_cast<std::size_t>(std::abs(h) - 1)];
  return h > 0 ? c : std::conj(c);
}

double TrigPolyApprox::operator()(double x) const {
  CompensatedSum sum;
  sum.add(constant());
  for (int h = 1; h <= H_; ++h) {
    sum.add(2.0 * (positive_[static_cast<std::size_t>(h - 1)] * unit_phase(reduced_product(x, h))).real());
  }
  return sum.value();
}

double TrigPolyApprox::indicator(double x) const {
  const double y = x - std::floor(x);
  return (y >= left_ && y < right_) ? 1.0 : 0.0;
}

nlohmann::json TrigPolyApprox::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int h = -H_; h <= H_; ++h) {
    if (h == 0) {
      rows.push_back({{"h", 0}, {"re", constant()}, {"im", 0.0}});
    } else {
      const auto c = coefficient(h);
      rows.push_back({{"h", h}, {"re", c.real()}, {"im", c.imag()}});
    }
  }
  return {{"interval", {left_, right_}}, {"H", H_}, {"coefficients", std::move(rows)}};
}

double fejer_majorant(int H, double x) {
  if (H < 0) throw DomainError("fejer_majorant: H must be non-negative");
  const double y = x - std::nearbyint(x);
  if (y == 0.0) return 1.0;
  const double n = H + 1.0;
  const double r = std::sin(std::numbers::pi * n * y) / (n * std::sin(std::numbers::pi * y));
  return r * r;
}

VaalerCheck check_vaaler_error(const TrigPolyApprox& approx, std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("check_vaaler_error: empty grid");
  VaalerCheck out;
  double worst = -std::numeric_limits<double>::infinity();
  for (double x : grid) {
    if (!(x >= 0.0 && x < 1.0)) throw DomainError("check_vaaler_error: grid must lie in [0, 1)");
    const double err = std::abs(approx.indicator(x) - approx(x));
    const double majorant = fejer_majorant(approx.H(), x - approx.left()) + fejer_majorant(approx.H(), x - approx.right());
    const double excess = err - majorant;
    if (excess > kVaalerSlack) ++out.violations;
    if (excess > worst) {
      worst = excess;
      out.worst_x = x;
    }
  }
  out.report = BoundReport::make("vaaler_error",
                                 {{"left", approx.left()},
                                  {"right", approx.right()},
                                  {"H", static_cast<double>(approx.H())},
                                  {"grid_size", static_cast<double>(grid.size())}},
                                 worst, kVaalerSlack);
  return out;
}

FloorDecomposition floor_decomposition_terms(const PseudoPolynomial& f, std::int64_t N, double alpha, int B, int H,
                                             std::optional<double> v) {
  if (B < 1 || H < 1) throw DomainError("floor_decomposition_terms: requires B >= 1 and H >= 1");
  const ArcSetup arc(f, N, v);
  if (arc.is_major(alpha)) throw ArcError("floor_decomposition_terms: alpha is on the major arc");

  FloorDecomposition d;
  d.N = N;
  d.alpha = alpha;
  d.B = B;
  d.H = H;
  d.P = arc.P();
  d.v = arc.v();
  const double c = std::ceil(f.leading_exponent());
  d.q_minor = std::pow(d.P, d.v / (2.0 * c * (c + 1.0)));
  d.exp_sum_shape = std::pow(d.P, 1.0 - d.v / (c * (c + 1.0)));
  d.vaaler_term_bound = (1.0 / d.q_minor + std::log(static_cast<double>(H))) * d.exp_sum_shape;
  d.minor_arc_shape = std::pow(d.P, 1.0 - d.v / (2.0 * c * (c + 1.0)));

  const auto M = static_cast<std::int64_t>(std::floor(d.P));
  const auto floors = floor_table(f, M);
  std::vector<double> frac(static_cast<std::size_t>(M));
  for (std::int64_t m = 1; m <= M; ++m) frac[static_cast<std::size_t>(m - 1)] = fractional_part(f, m);

  std::vector<TrigPolyApprox> approx;
  approx.reserve(static_cast<std::size_t>(B));
  for (int b = 0; b < B; ++b) approx.push_back(vaaler_approx(static_cast<double>(b) / B, static_cast<double>(b + 1) / B, H));

  std::vector<CompensatedComplexSum> floor_sum(static_cast<std::size_t>(B));
  std::vector<CompensatedComplexSum> smooth(static_cast<std::size_t>(B));
  std::vector<CompensatedComplexSum> vaaler(static_cast<std::size_t>(B));
  std::vector<CompensatedSum> residual(static_cast<std::size_t>(B));
  CompensatedComplexSum total;
  for (std::int64_t m = 1; m <= M; ++m) {
    const double x = frac[static_cast<std::size_t>(m - 1)];
    const double floor_phase = reduced_product(alpha, floors[static_cast<std::size_t>(m - 1)]);
    const std::complex<double> floor_term = unit_phase(floor_phase);
    const std::complex<double> smooth_term = unit_phase(floor_phase + alpha * x);
    total.add(floor_term);
    const int cell = std::min(B - 1, static_cast<int>(std::floor(x * B)));
    floor_sum[static_cast<std::size_t>(cell)].add(floor_term);
    for (int b = 0; b < B; ++b) {
      const auto& a = approx[static_cast<std::size_t>(b)];
      const double chi = a.indicator(x);
      const double chi_star = a(x);
      if (chi != 0.0) smooth[static_cast<std::size_t>(b)].add(smooth_term);
      vaaler[static_cast<std::size_t>(b)].add(chi_star * smooth_term);
      residual[static_cast<std::size_t>(b)].add(chi - chi_star);
    }
  }

  d.F = total.value();
  CompensatedSum abs_sum;
  for (int b = 0; b < B; ++b) {
    const auto i = static_cast<std::size_t>(b);
    d.floor_split.push_back(floor_sum[i].value());
    d.smooth_split.push_back(smooth[i].value());
    d.vaaler_split.push_back(vaaler[i].value());
    d.residual.push_back(residual[i].value());
    abs_sum.add(std::abs(d.smooth_split.back()));
  }
  d.smooth_abs_sum = abs_sum.value();
  d.floor_gap_bound = 2.0 * std::numbers::pi * std::abs(alpha) * d.P / B;
  return d;
}

nlohmann::json FloorDecomposition::to_json() const {
  auto complex_rows = [](const std::vector<std::complex<double>>& values) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& z : values) rows.push_back({z.real(), z.imag()});
    return rows;
  };
  return {{"N", N},
          {"alpha", alpha},
          {"B", B},
          {"H", H},
          {"P", P},
          {"v", v},
          {"q_minor", q_minor},
          {"F", {F.real(), F.imag()}},
          {"floor_split", complex_rows(floor_split)},
          {"smooth_split", complex_rows(smooth_split)},
          {"vaaler_split", complex_rows(vaaler_split)},
          {"residual", residual},
          {"smooth_abs_sum", smooth_abs_sum},
          {"floor_gap_bound", floor_gap_bound},
          {"exp_sum_shape", exp_sum_shape},
          {"vaaler_term_bound", vaaler_term_bound},
          {"minor_arc_shape", minor_arc_shape}};
}

}  // namespace waring
