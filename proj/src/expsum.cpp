#include "waring/expsum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numbers>
#include <unordered_map>

#include "waring/errors.hpp"
#include "waring/majorarc.hpp"
#include "waring/phase.hpp"

namespace waring {

// ---------------------------------------------------------------------------
// Phase functions and Weyl sums

PhaseFunction PhaseFunction::scaled(const PseudoPolynomial& f, double beta) {
  if (!std::isfinite(beta)) throw DomainError("PhaseFunction: beta must be finite");
  return PhaseFunction(f.terms(), beta);
}

PhaseFunction PhaseFunction::explicit_terms(TermList terms, double beta) {
  if (!std::isfinite(beta)) throw DomainError("PhaseFunction: beta must be finite");
  for (const auto& t : terms) {
    if (!std::isfinite(t.coefficient.value()) || !std::isfinite(t.exponent.value()) || t.exponent.value() < 0.0) {
      throw DomainError("PhaseFunction: terms need finite coefficients and non-negative exponents");
    }
  }
  return PhaseFunction(std::move(terms), beta);
}

long double PhaseFunction::value(long double x) const {
  return static_cast<long double>(beta_) * eval_terms(terms_, x);
}

double PhaseFunction::derivative(int j, double x) const {
  if (j < 0 || j > 10) throw DomainError("PhaseFunction: derivative order must lie in [0, 10]");
  if (j == 0) return static_cast<double>(value(x));
  return beta_ * eval_terms(waring::derivative(terms_, j), x);
}

double PhaseFunction::reduced(std::int64_t n) const {
  const long double x = static_cast<long double>(n);
  long double total = 0.0L;
  for (const auto& t : terms_) {
    const long double c = static_cast<long double>(beta_) * static_cast<long double>(t.coefficient.value());
    const long double e = t.exponent.value();
    long double term = c * (e == 0.0L ? 1.0L : std::pow(x, e));
    term -= std::floor(term);
    total += term;
  }
  total -= std::floor(total);
  return static_cast<double>(total);
}

std::complex<double> weyl_sum(const PhaseFunction& g, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw DomainError("weyl_sum: empty range");
  CompensatedComplexSum sum;
  for (std::int64_t n = lo; n <= hi; ++n) sum.add(unit_phase(g.reduced(n)));
  return sum.value();
}

std::vector<std::complex<double>> weyl_partial_sums(const PhaseFunction& g, std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw DomainError("weyl_partial_sums: empty range");
  std::vector<std::complex<double>> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  CompensatedComplexSum sum;
  for (std::int64_t n = lo; n <= hi; ++n) {
    sum.add(unit_phase(g.reduced(n)));
    out.push_back(sum.value());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bound shapes

double kusmin_landau_bound(double lambda) {
  if (!(lambda > 0.0 && lambda < 0.5)) throw DomainError("kusmin_landau_bound: requires 0 < lambda < 1/2");
  return 1.0 / lambda;
}

double van_der_corput_bound(double interval_len, double lambda, double eta) {
  if (!(lambda > 0.0) || !(eta >= 1.0) || !(interval_len >= 0.0)) {
    throw DomainError("van_der_corput_bound: requires lambda > 0, eta >= 1, |I| >= 0");
  }
  return interval_len * eta * std::sqrt(lambda) + 1.0 / std::sqrt(lambda);
}

double vinogradov_prop_bound(double Q, int k, double delta) {
  if (k < 2) throw DomainError("vinogradov_prop_bound: requires k >= 2");
  if (!(delta > 0.0 && delta <= k + 1.0)) throw DomainError("vinogradov_prop_bound: requires 0 < delta <= k + 1");
  if (!(Q >= 1.0)) throw DomainError("vinogradov_prop_bound: requires Q >= 1");
  return std::pow(Q, 1.0 - delta / (k * (k + 1.0)));
}

double bdg_bound(int s, int k, double N, double eps) {
  if (s < 1 || k < 1 || !(N >= 2.0)) throw DomainError("bdg_bound: requires s >= 1, k >= 1, N >= 2");
  return std::pow(N, s + eps) + std::pow(N, 2.0 * s - k * (k + 1) / 2.0 + eps);
}

// ---------------------------------------------------------------------------
// Dyadic case analysis

std::string to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::k1_1: return "1.1";
    case CaseLabel::k1_2: return "1.2";
    case CaseLabel::k2_1: return "2.1";
    case CaseLabel::k2_2: return "2.2";
    case CaseLabel::k2_3: return "2.3";
    case CaseLabel::k2_4: return "2.4";
    case CaseLabel::kGap: return "gap";
  }
  return "gap";
}

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Smallest of |beta f^{(j)}| / j! at the block ends.
double derivative_scale(const PseudoPolynomial& f, double beta, int j, double Q) {
  const TermList dj = derivative(f.terms(), j);
  const double a = std::abs(beta * eval_terms(dj, Q));
  const double b = std::abs(beta * eval_terms(dj, 2.0 * Q));
  return std::min(a, b) / factorial(j);
}

int case_rank(CaseLabel label) {
  switch (label) {
    case CaseLabel::k1_1: return 0;
    case CaseLabel::k1_2: return 1;
    case CaseLabel::k2_1: return 0;
    case CaseLabel::k2_4: return 1;
    case CaseLabel::k2_3: return 2;
    case CaseLabel::k2_2: return 3;
    case CaseLabel::kGap: return -1;
  }
  return -1;
}

}  // namespace

DyadicPlan classify_and_bound(const PseudoPolynomial& f, double beta, double P, double v, std::optional<int> W) {
  const auto theta_exact = f.largest_non_integer_exponent();
  if (!theta_exact) throw DomainError("classify_and_bound: f has no non-integer exponent");
  if (!(P >= 2.0)) throw DomainError("classify_and_bound: requires P >= 2");
  if (!(v > 0.0)) throw DomainError("classify_and_bound: requires v > 0");
  const double theta_d = f.leading_exponent();
  const double theta = theta_exact->value();
  const double b = std::abs(beta);
  if (!(b > std::pow(P, v - theta_d))) throw DomainError("classify_and_bound: requires |beta| > P^{v - theta_d}");

  DyadicPlan plan;
  plan.P = P;
  plan.beta = beta;
  plan.v = v;
  plan.rho = theorem_constants(f).rho;
  plan.case_one = theta == theta_d;
  plan.k = plan.case_one ? static_cast<int>(std::ceil(theta_d)) : static_cast<int>(theta_d);
  plan.W = W.value_or(std::max(1, static_cast<int>(std::floor(std::log2(P)))));
  if (plan.W < 1) throw DomainError("classify_and_bound: requires W >= 1");

  const double rho = plan.rho;
  const int k = plan.k;
  for (int w = 0; w < plan.W; ++w) {
    DyadicBlock block;
    block.w = w;
    const double Q = P * std::ldexp(1.0, -w - 1);
    block.Q = Q;
    if (plan.case_one) {
      if (b >= std::pow(Q, -theta_d + v)) {
        block.label = CaseLabel::k1_1;
        block.formula = "Q^(1-v/(k(k+1)))";
        block.lambda = derivative_scale(f, beta, k + 1, Q);
        block.bound = std::pow(Q, 1.0 - v / (k * (k + 1.0)));
      } else {
        block.label = CaseLabel::k1_2;
        block.formula = "Q^(1-theta_d) P^(theta_d-v)";
        block.lambda = derivative_scale(f, beta, 1, Q);
        block.bound = std::pow(Q, 1.0 - theta_d) * std::pow(P, theta_d - v);
      }
    } else {
      const double t21 = std::pow(Q, -theta + rho);
      const double t22 = std::pow(P, -theta_d + 1.0 - rho);
      const double t23 = std::pow(P, -theta_d + 2.0 - rho);
      if (b > t21) {
        block.label = CaseLabel::k2_1;
        block.formula = "Q^(1-rho/(theta_d(theta_d+1)^2))";
        block.lambda = derivative_scale(f, beta, k + 1, Q);
        block.bound = std::pow(Q, 1.0 - rho / (theta_d * (theta_d + 1.0) * (theta_d + 1.0)));
      } else if (b <= t22) {
        block.label = CaseLabel::k2_2;
        block.formula = "P^(theta_d-v) Q^(1-theta_d)";
        block.lambda = derivative_scale(f, beta, 1, Q);
        block.bound = std::pow(P, theta_d - v) * std::pow(Q, 1.0 - theta_d);
      } else if (b < t23) {
        // rho_2 is taken to be rho.
        block.label = CaseLabel::k2_3;
        block.formula = "P^((-theta_d+3-rho)/2) Q^(theta_d/2-1) + P^((theta_d-1+rho)/2) Q^(1-theta_d/2)";
        block.lambda = std::pow(P, -theta_d + 1.0 - rho) * std::pow(Q, theta_d - 2.0);
        block.bound = std::pow(P, (-theta_d + 3.0 - rho) / 2.0) * std::pow(Q, theta_d / 2.0 - 1.0) +
                      std::pow(P, (theta_d - 1.0 + rho) / 2.0) * std::pow(Q, 1.0 - theta_d / 2.0);
      } else if (b > t23) {
        block.label = CaseLabel::k2_4;
        block.formula = "Q^(1-rho/((theta_d-1)theta_d^2))";
        block.lambda = derivative_scale(f, beta, k, Q);
        block.bound = std::pow(Q, 1.0 - rho / ((theta_d - 1.0) * theta_d * theta_d));
      } else {
        block.label = CaseLabel::kGap;
        block.formula = "uncovered; trivial Q";
        block.bound = Q;
      }
    }
    plan.blocks.push_back(std::move(block));
  }

  const int labels = plan.case_one ? 2 : 4;
  int last = 0;
  for (const auto& block : plan.blocks) {
    const int r = case_rank(block.label);
    if (r < 0) {
      ++plan.gap_count;
      continue;
    }
    if (r < last) plan.labels_monotone = false;
    last = std::max(last, r);
  }
  for (int i = 1; i < labels; ++i) {
    int count = 0;
    for (const auto& block : plan.blocks) {
      const int r = case_rank(block.label);
      if (r >= 0 && r < i) ++count;
    }
    plan.split_points.push_back(count);
  }

  plan.tail = P * std::ldexp(1.0, -plan.W);
  CompensatedSum total;
  for (const auto& block : plan.blocks) total.add(block.bound);
  total.add(plan.tail);
  plan.block_sum = total.value();
  const double c = std::ceil(theta_d);
  plan.combined_estimate = std::pow(P, 1.0 - v / (c * (c + 1.0)));
  return plan;
}

nlohmann::json DyadicPlan::to_json() const {
  nlohmann::json out;
  out["P"] = P;
  out["beta"] = beta;
  out["v"] = v;
  out["rho"] = rho;
  out["W"] = W;
  out["case"] = case_one ? 1 : 2;
  out["k"] = k;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& b : blocks) {
    rows.push_back({{"w", b.w},
                    {"lower", b.Q},
                    {"upper", 2.0 * b.Q},
                    {"case", to_string(b.label)},
                    {"formula", b.formula},
                    {"lambda", b.lambda},
                    {"bound", b.bound}});
  }
  out["blocks"] = std::move(rows);
  out["split_points"] = split_points;
  out["labels_monotone"] = labels_monotone;
  out["gap_count"] = gap_count;
  out["tail"] = tail;
  out["block_sum"] = block_sum;
  out["combined_estimate"] = combined_estimate;
  return out;
}

// ---------------------------------------------------------------------------
// Minor-arc sampling

double minor_arc_sample(double tau, int index, std::uint64_t seed) {
  constexpr double kInverseGolden = 0.6180339887498948482;
  const double offset = std::fmod(static_cast<double>(seed) * (std::numbers::sqrt2 - 1.0), 1.0);
  double u = 0.5 + offset + static_cast<double>(index - 1) * kInverseGolden;
  u -= std::floor(u);
  return 1.0 / tau + (1.0 - 2.0 / tau) * u;
}

BoundReport minor_arc_sup(const PseudoPolynomial& f, std::int64_t N, int samples, std::uint64_t seed,
                          std::optional<double> v, unsigned threads) {
  if (samples < 1) throw DomainError("minor_arc_sup: samples must be positive");
  const ArcSetup arc(f, N, v);
  const auto floors = floor_table(f, static_cast<std::int64_t>(std::floor(arc.P())));

  struct Best {
    double value = -1.0;
    int index = 0;
  };
  auto scan = [&](int first, int last) {
    Best best;
    for (int j = first; j < last; ++j) {
      const double a = minor_arc_sample(arc.tau(), j, seed);
      const double value = std::abs(f_sum(a, floors));
      if (value > best.value) best = {value, j};
    }
    return best;
  };

  threads = std::max(1u, threads);
  std::vector<std::future<Best>> parts;
  const int chunk = (samples + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (int first = 1; first <= samples; first += chunk) {
    const int last = std::min(samples + 1, first + chunk);
    parts.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, scan, first, last));
  }
  Best best;
  for (auto& part : parts) {
    const Best b = part.get();
    if (b.value > best.value) best = b;  // chunks are in index order, so ties keep the first
  }

  const double c = std::ceil(f.leading_exponent());
  const double exponent = 1.0 - arc.v() / (2.0 * c * (c + 1.0));
  return BoundReport::make("minor_arc_sup",
                           {{"N", static_cast<double>(N)},
                            {"P", arc.P()},
                            {"v", arc.v()},
                            {"tau", arc.tau()},
                            {"samples", static_cast<double>(samples)},
                            {"alpha_max", minor_arc_sample(arc.tau(), best.index, seed)}},
                           best.value, std::pow(arc.P(), exponent));
}

// ---------------------------------------------------------------------------
// Vinogradov integral

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& key) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t x : key) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

VinogradovCount vinogradov_integral(int s, int k, std::int64_t N, bool reverse_order) {
  if (s < 1 || k < 1 || N < 1) throw DomainError("vinogradov_integral: requires s, k, N >= 1");
  const double lg = std::log2(static_cast<double>(N));
  if (2.0 * s * lg > 48.0) throw BudgetError("vinogradov_integral: 2 s log2 N exceeds 48");
  if (k * lg + std::log2(static_cast<double>(s)) >= 63.0) {
    throw DomainError("vinogradov_integral: power sums overflow 64 bits");
  }

  std::vector<std::vector<std::uint64_t>> powers(static_cast<std::size_t>(N) + 1,
                                                 std::vector<std::uint64_t>(static_cast<std::size_t>(k)));
  for (std::int64_t n = 1; n <= N; ++n) {
    std::uint64_t p = 1;
    for (int j = 0; j < k; ++j) {
      p *= static_cast<std::uint64_t>(n);
      powers[static_cast<std::size_t>(n)][static_cast<std::size_t>(j)] = p;
    }
  }
  double s_factorial = 1.0;
  for (int i = 2; i <= s; ++i) s_factorial *= i;

  // Multisets of size s, each weighted by its number of orderings.
  std::unordered_map<std::vector<std::uint64_t>, std::uint64_t, KeyHash> classes;
  std::vector<std::uint64_t> sums(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> tuple(static_cast<std::size_t>(s));

  auto orderings = [&]() {
    std::uint64_t r = static_cast<std::uint64_t>(s_factorial);
    int run = 1;
    std::uint64_t divisor = 1;
    for (int i = 1; i <= s; ++i) {
      if (i < s && tuple[static_cast<std::size_t>(i)] == tuple[static_cast<std::size_t>(i - 1)]) {
        ++run;
      } else {
        for (int t = 2; t <= run; ++t) divisor *= static_cast<std::uint64_t>(t);
        run = 1;
      }
    }
    return r / divisor;
  };

  auto recurse = [&](auto&& self, int depth, std::int64_t bound) -> void {
    if (depth == s) {
      classes[sums] += orderings();
      return;
    }
    const std::int64_t first = bound;
    const std::int64_t last = reverse_order ? 1 : N;
    const std::int64_t step = reverse_order ? -1 : 1;
    for (std::int64_t n = first; reverse_order ? n >= last : n <= last; n += step) {
      tuple[static_cast<std::size_t>(depth)] = n;
      const auto& p = powers[static_cast<std::size_t>(n)];
      for (int j = 0; j < k; ++j) sums[static_cast<std::size_t>(j)] += p[static_cast<std::size_t>(j)];
      self(self, depth + 1, n);
      for (int j = 0; j < k; ++j) sums[static_cast<std::size_t>(j)] -= p[static_cast<std::size_t>(j)];
    }
  };
  recurse(recurse, 0, reverse_order ? N : 1);

  // Sum in key order so the result does not depend on hash iteration order.
  std::vector<std::pair<std::vector<std::uint64_t>, std::uint64_t>> sorted(classes.begin(), classes.end());
  std::sort(sorted.begin(), sorted.end());
  VinogradovCount out{s, k, N, 0};
  for (const auto& [key, m] : sorted) out.count += static_cast<Count>(m) * m;
  return out;
}

// ---------------------------------------------------------------------------
// Fractional-part counting

BoundReport fractional_count_check(const std::function<double(std::int64_t)>& phi, std::int64_t M,
                                   std::int64_t Nlen, double delta, double c, double D) {
  if (Nlen < 1 || !(delta > 0.0) || !(c >= 1.0) || !(D >= 0.0)) {
    throw DomainError("fractional_count_check: requires Nlen >= 1, delta > 0, c >= 1, D >= 0");
  }
  if (c * delta > 0.5) throw HypothesisError("fractional_count_check: c delta exceeds 1/2", M);
  constexpr double kTolerance = 1e-12;
  double prev = phi(M);
  std::int64_t count = distance_to_integer(prev) <= D * delta ? 1 : 0;
  for (std::int64_t n = M; n + 1 < M + Nlen; ++n) {
    const double next = phi(n + 1);
    const double gap = next - prev;
    if (gap < delta * (1.0 - kTolerance) || gap > c * delta * (1.0 + kTolerance)) {
      throw HypothesisError("fractional_count_check: spacing hypothesis fails at n = " + std::to_string(n), n);
    }
    if (distance_to_integer(next) <= D * delta) ++count;
    prev = next;
  }
  const double bound = (static_cast<double>(Nlen) * c * delta + 1.0) * (2.0 * D + 1.0);
  return BoundReport::make("fractional_count",
                           {{"M", static_cast<double>(M)},
                            {"Nlen", static_cast<double>(Nlen)},
                            {"delta", delta},
                            {"c", c},
                            {"D", D}},
                           static_cast<double>(count), bound);
}

}  // namespace waring
