#include "waring/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "waring/errors.hpp"
#include "waring/expsum.hpp"
#include "waring/phase.hpp"
#include "waring/pseudopoly.hpp"
#include "waring/repcount.hpp"
#include "waring/vaaler.hpp"

namespace waring {

// ---------------------------------------------------------------------------
// Config

namespace {

template <typename T>
T field(const nlohmann::json& j, const std::string& name) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(name, std::string("wrong type (") + j.type_name() + ")");
  }
}

template <typename T>
std::vector<T> scalar_or_list(const nlohmann::json& j, const std::string& name) {
  if (j.is_array()) return field<std::vector<T>>(j, name);
  return {field<T>(j, name)};
}

std::vector<std::int64_t> geometric_grid(std::int64_t lo, std::int64_t hi, int per_decade) {
  std::vector<std::int64_t> grid;
  for (int j = 0;; ++j) {
    const double x = static_cast<double>(lo) * std::pow(10.0, static_cast<double>(j) / per_decade);
    const auto n = static_cast<std::int64_t>(std::llround(x));
    if (n > hi) break;
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  if (grid.empty() || grid.back() != hi) grid.push_back(hi);
  return grid;
}

// Deterministic uniform double in [0, 1) that does not depend on the
// standard library's distribution implementation.
double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

PseudoPolynomial parse_polynomial(const std::string& literal) {
  try {
    return PseudoPolynomial::parse(literal);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("polynomial", e.what());
  }
}

}  // namespace

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["polynomial"] = polynomial;
  j["s"] = s;
  j["n_min"] = n_min;
  j["n_max"] = n_max;
  j["n_list"] = n_list;
  j["v"] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  j["convention"] = to_string(convention);
  j["samples"] = samples;
  j["seed"] = seed;
  j["H"] = H;
  j["B"] = B;
  j["window"] = window;
  j["points_per_decade"] = points_per_decade;
  j["k"] = k;
  j["eps"] = eps;
  j["intervals"] = intervals;
  j["grid_points"] = grid_points;
  j["lemmas"] = lemmas;
  j["tolerance_scale"] = tolerance_scale;
  j["output"] = output;
  j["threads"] = threads;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) { return from_json(j, ExperimentConfig{}); }

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("config", "top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "polynomial") {
      c.polynomial = field<std::string>(value, key);
    } else if (key == "s") {
      c.s = scalar_or_list<int>(value, key);
    } else if (key == "N") {
      c.n_min = c.n_max = field<std::int64_t>(value, key);
    } else if (key == "n_min") {
      c.n_min = field<std::int64_t>(value, key);
    } else if (key == "n_max") {
      c.n_max = field<std::int64_t>(value, key);
    } else if (key == "n_list") {
      c.n_list = scalar_or_list<std::int64_t>(value, key);
    } else if (key == "v") {
      c.v = value.is_null() ? std::nullopt : std::optional<double>(field<double>(value, key));
    } else if (key == "convention") {
      const auto conv = parse_convention(field<std::string>(value, key));
      if (!conv) throw ConfigError(key, "expected gamma_s_over_theta or gamma_s_plus_one_over_theta");
      c.convention = *conv;
    } else if (key == "samples") {
      c.samples = field<int>(value, key);
    } else if (key == "seed") {
      c.seed = field<std::uint64_t>(value, key);
    } else if (key == "H") {
      c.H = field<int>(value, key);
    } else if (key == "B") {
      c.B = field<int>(value, key);
    } else if (key == "window") {
      c.window = field<int>(value, key);
    } else if (key == "points_per_decade") {
      c.points_per_decade = field<int>(value, key);
    } else if (key == "k") {
      c.k = scalar_or_list<int>(value, key);
    } else if (key == "eps") {
      c.eps = field<double>(value, key);
    } else if (key == "intervals") {
      c.intervals = field<int>(value, key);
    } else if (key == "grid_points") {
      c.grid_points = field<int>(value, key);
    } else if (key == "lemmas") {
      c.lemmas = scalar_or_list<std::string>(value, key);
    } else if (key == "tolerance_scale") {
      c.tolerance_scale = field<double>(value, key);
    } else if (key == "output") {
      c.output = field<std::string>(value, key);
    } else if (key == "threads") {
      c.threads = field<int>(value, key);
    } else {
      throw ConfigError(key, "unknown field");
    }
  }
  return c;
}

void ExperimentConfig::validate() const {
  parse_polynomial(polynomial);
  if (s.empty()) throw ConfigError("s", "needs at least one value");
  for (int x : s) {
    if (x < 1) throw ConfigError("s", "values must be positive");
  }
  if (n_min < 1) throw ConfigError("n_min", "must be at least 1");
  if (n_max < n_min) throw ConfigError("n_max", "must be at least n_min");
  if (n_max > 100'000'000) throw ConfigError("n_max", "must not exceed 10^8");
  for (auto n : n_list) {
    if (n < 1) throw ConfigError("n_list", "values must be positive");
  }
  if (v && !(*v > 0.0)) throw ConfigError("v", "must be positive");
  if (samples < 1) throw ConfigError("samples", "must be positive");
  if (H < 1) throw ConfigError("H", "must be positive");
  if (B < 1) throw ConfigError("B", "must be positive");
  if (window < 1) throw ConfigError("window", "must be positive");
  if (points_per_decade < 1) throw ConfigError("points_per_decade", "must be positive");
  if (k.empty()) throw ConfigError("k", "needs at least one value");
  for (int x : k) {
    if (x < 1) throw ConfigError("k", "values must be positive");
  }
  if (!(eps >= 0.0)) throw ConfigError("eps", "must be non-negative");
  if (intervals < 1) throw ConfigError("intervals", "must be positive");
  if (grid_points < 1) throw ConfigError("grid_points", "must be positive");
  const auto known = verify_sections();
  for (const auto& name : lemmas) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw ConfigError("lemmas", "unknown section '" + name + "'");
    }
  }
  if (!(tolerance_scale > 0.0)) throw ConfigError("tolerance_scale", "must be positive");
  if (threads < 1) throw ConfigError("threads", "must be positive");
}

// ---------------------------------------------------------------------------
// count / convergence

int cmd_count(const ExperimentConfig& config, std::ostream& out) {
  if (config.s.size() != 1) throw ConfigError("s", "count takes a single value");
  const auto f = parse_polynomial(config.polynomial);
  const int s = config.s.front();
  const auto c = counts_vector(f, config.n_max, config.threads);
  NttOptions options;
  options.threads = config.threads;
  const auto table = rep_count_exact(c, s, config.n_max, options);
  out << "N,r,main_term,ratio\n";
  for (std::int64_t N = config.n_min; N <= config.n_max; ++N) {
    const Count r = table.values[static_cast<std::size_t>(N)];
    const double main = gamma_main_term(f, s, static_cast<double>(N), config.convention);
    out << N << ',' << to_string(r) << ',' << format_double(main) << ','
        << format_double(static_cast<double>(r) / main) << '\n';
  }
  return 0;
}

int cmd_convergence(const ExperimentConfig& config, std::ostream& out) {
  const auto f = parse_polynomial(config.polynomial);
  const auto constants = theorem_constants(f);
  const auto grid = geometric_grid(config.n_min, config.n_max, config.points_per_decade);
  const std::int64_t top = config.n_max + config.window - 1;
  const auto c = counts_vector(f, top, config.threads);
  NttOptions options;
  options.threads = config.threads;

  out << "s,N,window,ratio,ratio_gamma_s_over_theta,ratio_gamma_s_plus_one_over_theta,convention,threshold\n";
  for (int s : config.s) {
    const auto table = rep_count_exact(c, s, top, options);
    const bool below = s < constants.s_min;
    for (std::int64_t N0 : grid) {
      CompensatedSum a;
      CompensatedSum b;
      for (std::int64_t N = N0; N < N0 + config.window; ++N) {
        const double r = static_cast<double>(table.values[static_cast<std::size_t>(N)]);
        const double n = static_cast<double>(N);
        a.add(r / gamma_main_term(f, s, n, MainTermConvention::kGammaOfSOverTheta));
        b.add(r / gamma_main_term(f, s, n, MainTermConvention::kGammaOfSPlusOneOverTheta));
      }
      const double ra = a.value() / config.window;
      const double rb = b.value() / config.window;
      const double chosen = config.convention == MainTermConvention::kGammaOfSOverTheta ? ra : rb;
      out << s << ',' << N0 << ',' << config.window << ',' << format_double(chosen) << ',' << format_double(ra)
          << ',' << format_double(rb) << ',' << to_string(config.convention) << ','
          << (below ? "below theorem threshold" : "ok") << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// vinogradov / vaaler-check

int cmd_vinogradov(const ExperimentConfig& config, std::ostream& out) {
  const std::vector<std::int64_t> ns =
      config.n_list.empty() ? geometric_grid(config.n_min, config.n_max, config.points_per_decade) : config.n_list;
  out << "s,k,N,J,bdg_bound,slope,slope_limit\n";
  for (int s : config.s) {
    for (int k : config.k) {
      for (std::int64_t N : ns) {
        const auto J = vinogradov_integral(s, k, N);
        const double j = static_cast<double>(J.count);
        const double n = static_cast<double>(N);
        const double limit = std::max<double>(s, 2.0 * s - k * (k + 1) / 2.0) + 0.8;
        out << s << ',' << k << ',' << N << ',' << to_string(J.count) << ','
            << (N >= 2 ? format_double(bdg_bound(s, k, n, config.eps)) : "nan") << ','
            << (N >= 2 ? format_double(std::log(j) / std::log(n)) : "nan") << ',' << format_double(limit) << '\n';
      }
    }
  }
  return 0;
}

int cmd_vaaler_check(const ExperimentConfig& config, std::ostream& out) {
  std::mt19937_64 rng(config.seed);
  std::vector<double> grid(static_cast<std::size_t>(config.grid_points));
  for (int j = 0; j < config.grid_points; ++j) grid[static_cast<std::size_t>(j)] = static_cast<double>(j) / config.grid_points;
  std::vector<BoundReport> reports;
  std::size_t violations = 0;
  for (int i = 0; i < config.intervals; ++i) {
    double a = unit_draw(rng);
    double b = unit_draw(rng);
    if (a > b) std::swap(a, b);
    const auto check = check_vaaler_error(vaaler_approx(a, b, config.H), grid);
    BoundReport r = check.report;
    r.parameters.emplace_back("violations", static_cast<double>(check.violations));
    violations += check.violations;
    reports.push_back(std::move(r));
  }
  write_bound_reports_csv(out, reports);
  return violations == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify

std::vector<std::string> verify_sections() {
  return {"v_bound",         "f_minus_v",      "singular_tail", "vaaler",         "kusmin_landau",
          "van_der_corput",  "vinogradov_prop", "bdg",          "fractional_count", "minor_arc_sup",
          "p_deviation",     "dyadic_plan"};
}

namespace {

nlohmann::json report_json(const BoundReport& r, double limit) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& [k, v] : r.parameters) params.push_back({k, v});
  return {{"name", r.name},      {"parameters", params}, {"quantity", r.quantity}, {"bound", r.bound},
          {"ratio", r.ratio},    {"limit", limit},       {"pass", r.ratio <= limit}};
}

class Section {
 public:
  explicit Section(std::string name) { doc_["lemma"] = std::move(name); doc_["checks"] = nlohmann::json::array(); }

  void check(const BoundReport& r, double limit) {
    doc_["checks"].push_back(report_json(r, limit));
    pass_ = pass_ && r.ratio <= limit;
  }
  void note(const std::string& key, nlohmann::json value) { doc_[key] = std::move(value); }
  void fail() { pass_ = false; }
  bool pass() const { return pass_; }

  nlohmann::json finish() {
    doc_["pass"] = pass_;
    return doc_;
  }

 private:
  nlohmann::json doc_;
  bool pass_ = true;
};

std::vector<std::int64_t> verify_sweep(std::int64_t n_max) {
  std::vector<std::int64_t> out;
  for (std::int64_t n : {n_max / 100, n_max / 10, n_max}) {
    if (n >= 100 && (out.empty() || out.back() != n)) out.push_back(n);
  }
  if (out.empty()) out.push_back(std::max<std::int64_t>(n_max, 100));
  return out;
}

void section_v_bound(const ExperimentConfig& cfg, const PseudoPolynomial& f, Section& sec) {
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(-0.5 + i / 200.0);
  for (auto N : verify_sweep(cfg.n_max)) sec.check(check_v_bound(f, N, grid), 10.0 * cfg.tolerance_scale);
}

void section_f_minus_v(const ExperimentConfig& cfg, const PseudoPolynomial& f, Section& sec) {
  for (auto N : verify_sweep(cfg.n_max)) {
    const ArcSetup arc(f, N, cfg.v);
    for (double alpha : {0.0, 0.5 / arc.tau()}) sec.check(compare_f_v(f, N, alpha, cfg.v), 10.0 * cfg.tolerance_scale);
  }
}

void section_singular_tail(const ExperimentConfig& cfg, const PseudoPolynomial& f, Section& sec) {
  const double theta = f.leading_exponent();
  int s = static_cast<int>(std::floor(theta)) + 1;
  for (int x : cfg.s) {
    if (x > theta) {
      s = x;
      break;
    }
  }
  const std::int64_t N = std::min<std::int64_t>(cfg.n_max, 500);
  sec.check(check_singular_tail(f, s, N, cfg.v), 10.0 * cfg.tolerance_scale);
  const double J = singular_integral_quadrature(f, s, N, 0.5).value.real();
  const double exact = exact_js(f, s, N);
  sec.check(BoundReport::make("full_period_identity", {{"N", static_cast<double>(N)}, {"s", static_cast<double>(s)}},
                              std::abs(J - exact) / std::abs(exact), 1e-6),
            cfg.tolerance_scale);
}

void section_vaaler(const ExperimentConfig& cfg, Section& sec) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> grid;
  for (int j = 0; j < 2000; ++j) grid.push_back(j / 2000.0);
  std::size_t violations = 0;
  for (int i = 0; i < 5; ++i) {
    double a = unit_draw(rng);
    double b = unit_draw(rng);
    if (a > b) std::swap(a, b);
    const auto check = check_vaaler_error(vaaler_approx(a, b, cfg.H), grid);
    violations += check.violations;
    sec.check(check.report, cfg.tolerance_scale);
  }
  sec.note("violations", violations);
  if (violations != 0) sec.fail();
}

void section_kusmin_landau(const ExperimentConfig& cfg, Section& sec) {
  // Linear phases beta n with lambda <= beta <= 1 - lambda.
  for (double lambda : {0.01, 0.05, 0.1, 0.2, 0.3}) {
    for (double u : {0.0, 0.37, 0.81, 1.0}) {
      const double beta = lambda + (1.0 - 2.0 * lambda) * u;
      const auto g = PhaseFunction::explicit_terms({Term{ExactReal(1.0), ExactReal(1.0)}}, beta);
      const double S = std::abs(weyl_sum(g, 1, 1000));
      sec.check(BoundReport::make("kusmin_landau", {{"lambda", lambda}, {"beta", beta}, {"length", 1000.0}}, S,
                                  kusmin_landau_bound(lambda)),
                2.0 * cfg.tolerance_scale);
    }
  }
}

void section_van_der_corput(const ExperimentConfig& cfg, Section& sec) {
  const auto f = PseudoPolynomial::parse("x^(3/2)");
  for (double Q : {250.0, 1000.0, 4000.0}) {
    for (double beta : {0.3, 1.7}) {
      const auto g = PhaseFunction::scaled(f, beta);
      const double lambda = std::abs(g.derivative(2, 2.0 * Q));
      const double eta = std::abs(g.derivative(2, Q)) / lambda;
      const auto q = static_cast<std::int64_t>(Q);
      const double S = std::abs(weyl_sum(g, q + 1, 2 * q));
      sec.check(BoundReport::make("van_der_corput", {{"Q", Q}, {"beta", beta}, {"lambda", lambda}, {"eta", eta}}, S,
                                  van_der_corput_bound(Q, lambda, eta)),
                10.0 * cfg.tolerance_scale);
    }
  }
}

void section_vinogradov_prop(const ExperimentConfig& cfg, Section& sec) {
  const auto f = PseudoPolynomial::parse("x^(3/2)");
  const int k = 2;
  for (double Q : {1000.0, 4000.0}) {
    const auto g = PhaseFunction::scaled(f, 1.0);
    const double lambda = std::abs(g.derivative(k + 1, 2.0 * Q)) / 6.0;
    const double delta = std::min(k + 1.0, std::log(lambda) / std::log(Q) + k + 1.0);
    const auto q = static_cast<std::int64_t>(Q);
    const double S = std::abs(weyl_sum(g, q + 1, 2 * q));
    sec.check(BoundReport::make("vinogradov_prop", {{"Q", Q}, {"k", k}, {"lambda", lambda}, {"delta", delta}}, S,
                                vinogradov_prop_bound(Q, k, delta)),
              10.0 * cfg.tolerance_scale);
  }
}

void section_bdg(const ExperimentConfig& cfg, Section& sec) {
  for (int s : {2, 3}) {
    for (int k : {2, 3}) {
      for (std::int64_t N : {8, 12, 16}) {
        const auto J = vinogradov_integral(s, k, N);
        sec.check(BoundReport::make("bdg", {{"s", s}, {"k", k}, {"N", static_cast<double>(N)}},
                                    static_cast<double>(J.count), bdg_bound(s, k, static_cast<double>(N), cfg.eps)),
                  10.0 * cfg.tolerance_scale);
      }
    }
  }
}

void section_fractional_count(const ExperimentConfig& cfg, Section& sec) {
  const double d = 1e-3;
  sec.check(fractional_count_check([d](std::int64_t n) { return n * d; }, 1, 100, d, 1.0, 1.0), cfg.tolerance_scale);
  // First differences of beta f on a block, f = x^3 + x^(3/2).
  const auto f = PseudoPolynomial::parse("x^3 + x^(3/2)");
  const double beta = 1e-5;
  const std::int64_t Q = 1000;
  auto phi = [&](std::int64_t n) {
    const long double a = static_cast<long double>(n);
    return static_cast<double>(beta * (f(a + 1.0L) - f(a)));
  };
  double lo = INFINITY;
  double hi = 0.0;
  for (std::int64_t n = Q; n + 1 < 2 * Q; ++n) {
    const double gap = phi(n + 1) - phi(n);
    lo = std::min(lo, gap);
    hi = std::max(hi, gap);
  }
  sec.check(fractional_count_check(phi, Q, Q, lo, hi / lo * (1.0 + 1e-9), 1.0), cfg.tolerance_scale);
}

void section_minor_arc_sup(const ExperimentConfig& cfg, const PseudoPolynomial& f, Section& sec) {
  for (auto N : verify_sweep(cfg.n_max)) {
    sec.check(minor_arc_sup(f, N, cfg.samples, cfg.seed, cfg.v, static_cast<unsigned>(cfg.threads)),
              10.0 * cfg.tolerance_scale);
  }
}

void section_p_deviation(const ExperimentConfig& cfg, const PseudoPolynomial& f, Section& sec) {
  const double exponent = f.previous_exponent(ThetaZero::kMajorArc) - f.leading_exponent() + 1.0;
  for (auto N : verify_sweep(cfg.n_max)) {
    const double P = largest_preimage(f, static_cast<double>(N));
    sec.check(BoundReport::make("p_deviation", {{"N", static_cast<double>(N)}, {"P", P}},
                                std::abs(p_deviation(f, static_cast<double>(N))), std::pow(P, exponent)),
              10.0 * cfg.tolerance_scale);
  }
}

void section_dyadic_plan(const ExperimentConfig& cfg, const PseudoPolynomial& f, Section& sec) {
  if (!f.largest_non_integer_exponent()) {
    sec.note("skipped", "f has only integer exponents");
    return;
  }
  const double P = largest_preimage(f, static_cast<double>(cfg.n_max));
  const double v = cfg.v.value_or(ArcSetup::default_v(f));
  const auto plan = classify_and_bound(f, 1.0, P, v);
  sec.note("plan", plan.to_json());
  if (plan.case_one && plan.gap_count != 0) sec.fail();
}

}  // namespace

int cmd_verify(const ExperimentConfig& config, std::ostream& out) {
  const auto f = parse_polynomial(config.polynomial);
  const auto selected = config.lemmas.empty() ? verify_sections() : config.lemmas;
  bool all = true;
  for (const auto& name : verify_sections()) {
    if (std::find(selected.begin(), selected.end(), name) == selected.end()) continue;
    Section sec(name);
    if (name == "v_bound") section_v_bound(config, f, sec);
    if (name == "f_minus_v") section_f_minus_v(config, f, sec);
    if (name == "singular_tail") section_singular_tail(config, f, sec);
    if (name == "vaaler") section_vaaler(config, sec);
    if (name == "kusmin_landau") section_kusmin_landau(config, sec);
    if (name == "van_der_corput") section_van_der_corput(config, sec);
    if (name == "vinogradov_prop") section_vinogradov_prop(config, sec);
    if (name == "bdg") section_bdg(config, sec);
    if (name == "fractional_count") section_fractional_count(config, sec);
    if (name == "minor_arc_sup") section_minor_arc_sup(config, f, sec);
    if (name == "p_deviation") section_p_deviation(config, f, sec);
    if (name == "dyadic_plan") section_dyadic_plan(config, f, sec);
    all = all && sec.pass();
    out << sec.finish().dump() << '\n';
  }
  return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Command line

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Circle-method experiments for Waring's problem with pseudo-polynomials"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  ExperimentConfig flags;
  std::string convention;
  double v = 0.0;
  std::int64_t N = 0;
  app.add_option("--config", config_path, "JSON experiment config");
  auto* o_poly = app.add_option("--polynomial,-f", flags.polynomial, "pseudo-polynomial literal");
  auto* o_s = app.add_option("--s", flags.s, "number of summands (comma list)")->delimiter(',');
  auto* o_N = app.add_option("--N", N, "single target N");
  auto* o_min = app.add_option("--n-min", flags.n_min);
  auto* o_max = app.add_option("--n-max", flags.n_max);
  auto* o_list = app.add_option("--n-list", flags.n_list, "explicit N values (comma list)")->delimiter(',');
  auto* o_v = app.add_option("--v", v, "major-arc exponent v");
  auto* o_conv = app.add_option("--convention", convention, "gamma_s_over_theta | gamma_s_plus_one_over_theta");
  auto* o_samples = app.add_option("--samples", flags.samples);
  auto* o_seed = app.add_option("--seed", flags.seed);
  auto* o_H = app.add_option("--H", flags.H);
  auto* o_B = app.add_option("--B", flags.B);
  auto* o_window = app.add_option("--window", flags.window);
  auto* o_ppd = app.add_option("--points-per-decade", flags.points_per_decade);
  auto* o_k = app.add_option("--k", flags.k)->delimiter(',');
  auto* o_eps = app.add_option("--eps", flags.eps);
  auto* o_intervals = app.add_option("--intervals", flags.intervals);
  auto* o_grid = app.add_option("--grid-points", flags.grid_points);
  auto* o_lemma = app.add_option("--lemma", flags.lemmas, "verify only these sections (repeatable)");
  auto* o_tol = app.add_option("--tolerance-scale", flags.tolerance_scale);
  auto* o_out = app.add_option("--output,-o", flags.output, "output path, - for stdout");
  auto* o_threads = app.add_option("--threads,-j", flags.threads);

  auto* count = app.add_subcommand("count", "r_{f,s}(N) with the main term");
  auto* verify = app.add_subcommand("verify", "bound-report suite, one JSON document per lemma");
  auto* convergence = app.add_subcommand("convergence", "window-averaged r / main term");
  auto* vaaler = app.add_subcommand("vaaler-check", "Vaaler error-majorant sweep");
  auto* vinogradov = app.add_subcommand("vinogradov", "Vinogradov integral counts against the BDG shape");
  auto* defaults = app.add_subcommand("defaults", "print the default config, or the effective one when flags or --config are given");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    ExperimentConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("config", "cannot open " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", e.what());
      }
      config = ExperimentConfig::from_json(j);
    }
    if (o_poly->count()) config.polynomial = flags.polynomial;
    if (o_s->count()) config.s = flags.s;
    if (o_N->count()) config.n_min = config.n_max = N;
    if (o_min->count()) config.n_min = flags.n_min;
    if (o_max->count()) config.n_max = flags.n_max;
    if (o_list->count()) config.n_list = flags.n_list;
    if (o_v->count()) config.v = v;
    if (o_conv->count()) {
      const auto conv = parse_convention(convention);
      if (!conv) throw ConfigError("convention", "expected gamma_s_over_theta or gamma_s_plus_one_over_theta");
      config.convention = *conv;
    }
    if (o_samples->count()) config.samples = flags.samples;
    if (o_seed->count()) config.seed = flags.seed;
    if (o_H->count()) config.H = flags.H;
    if (o_B->count()) config.B = flags.B;
    if (o_window->count()) config.window = flags.window;
    if (o_ppd->count()) config.points_per_decade = flags.points_per_decade;
    if (o_k->count()) config.k = flags.k;
    if (o_eps->count()) config.eps = flags.eps;
    if (o_intervals->count()) config.intervals = flags.intervals;
    if (o_grid->count()) config.grid_points = flags.grid_points;
    if (o_lemma->count()) config.lemmas = flags.lemmas;
    if (o_tol->count()) config.tolerance_scale = flags.tolerance_scale;
    if (o_out->count()) config.output = flags.output;
    if (o_threads->count()) config.threads = flags.threads;
    config.validate();
    // With no config or flags this is the embedded default.
    if (defaults->parsed()) {
      out << config.to_json().dump(2) << '\n';
      return 0;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (config.output != "-") {
      file.open(config.output);
      if (!file) throw ConfigError("output", "cannot write " + config.output);
      sink = &file;
    }
    // Buffer so a run that fails midway leaves no partial report.
    std::ostringstream buffer;
    int status = 0;
    if (count->parsed()) status = cmd_count(config, buffer);
    if (verify->parsed()) status = cmd_verify(config, buffer);
    if (convergence->parsed()) status = cmd_convergence(config, buffer);
    if (vaaler->parsed()) status = cmd_vaaler_check(config, buffer);
    if (vinogradov->parsed()) status = cmd_vinogradov(config, buffer);
    *sink << buffer.str();
    return status;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace waring
