#include "waring/pseudopoly.hpp"

#include <gmp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "waring/errors.hpp"

namespace waring {

// ---------------------------------------------------------------------------
// Term lists

double eval_terms(const TermList& terms, double x) {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.coefficient.value() * std::pow(x, t.exponent.value());
  return sum;
}

long double eval_terms(const TermList& terms, long double x) {
  long double sum = 0.0L;
  for (const auto& t : terms) {
    sum += static_cast<long double>(t.coefficient.value()) *
           std::pow(x, static_cast<long double>(t.exponent.value()));
  }
  return sum;
}

TermList derivative(const TermList& terms, int j) {
  if (j < 0) throw std::invalid_argument("derivative order must be non-negative");
  TermList out;
  for (const auto& t : terms) {
    if (t.exponent.is_integer() && t.exponent.value() >= 0.0 && j > t.exponent.value()) continue;
    ExactReal coefficient = t.coefficient;
    ExactReal exponent = t.exponent;
    for (int i = 0; i < j; ++i) {
      coefficient = coefficient * exponent;
      exponent = exponent - ExactReal(Rational{1, 1});
    }
    out.push_back({coefficient, exponent});
  }
  return out;
}

// ---------------------------------------------------------------------------
// PseudoPolynomial

PseudoPolynomial::PseudoPolynomial(TermList terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("pseudo-polynomial needs at least one term");
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.exponent.value() < b.exponent.value(); });
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (!std::isfinite(t.coefficient.value()) || !std::isfinite(t.exponent.value())) {
      throw std::invalid_argument("non-finite coefficient or exponent");
    }
    if (t.coefficient.value() == 0.0) throw std::invalid_argument("zero coefficient");
    if (t.exponent.value() < 1.0) {
      throw std::invalid_argument("exponent " + t.exponent.to_string() + " is below 1");
    }
    if (i > 0 && !(terms_[i - 1].exponent.value() < t.exponent.value())) {
      throw std::invalid_argument("repeated exponent " + t.exponent.to_string());
    }
    if (!t.exponent.is_integer()) classical_ = false;
  }
  if (!(leading_coefficient() > 0.0)) throw std::invalid_argument("leading coefficient must be positive");
}

double PseudoPolynomial::previous_exponent(ThetaZero convention) const {
  if (terms_.size() >= 2) return terms_[terms_.size() - 2].exponent.value();
  return convention == ThetaZero::kTheorem ? kThetaZeroTheorem : kThetaZeroMajorArc;
}

std::optional<ExactReal> PseudoPolynomial::largest_non_integer_exponent() const {
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!it->exponent.is_integer()) return it->exponent;
  }
  return std::nullopt;
}

std::string PseudoPolynomial::to_string() const {
  std::ostringstream os;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    double c = it->coefficient.value();
    std::string coefficient = it->coefficient.to_string();
    if (it == terms_.rbegin()) {
      os << coefficient;
    } else if (c < 0.0) {
      os << " - " << coefficient.substr(1);
    } else {
      os << " + " << coefficient;
    }
    std::string e = it->exponent.to_string();
    if (e.find('/') != std::string::npos) e = "(" + e + ")";
    os << "*x^" << e;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view s) : s_(s) {}

  TermList parse() {
    TermList terms;
    skip_ws();
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
    }
    terms.push_back(term(negative));
    for (;;) {
      skip_ws();
      if (pos_ == s_.size()) break;
      char c = peek();
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      ++pos_;
      terms.push_back(term(c == '-'));
    }
    return terms;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  Term term(bool negative) {
    skip_ws();
    std::size_t start = pos_;
    ExactReal coefficient(Rational{1, 1});
    bool have_coefficient = false;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      coefficient = number();
      have_coefficient = true;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        skip_ws();
      }
    }
    if (peek() != 'x') {
      if (have_coefficient) {
        pos_ = start;
        fail("constant terms are not allowed (exponents must be at least 1)");
      }
      fail("expected coefficient or 'x'");
    }
    ++pos_;
    skip_ws();
    ExactReal exponent(Rational{1, 1});
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      exponent = bracketed_exponent();
    }
    if (negative) coefficient = ExactReal(Rational{-1, 1}) * coefficient;
    return {coefficient, exponent};
  }

  ExactReal bracketed_exponent() {
    char open = peek();
    char close = open == '(' ? ')' : (open == '{' ? '}' : '\0');
    if (close != '\0') {
      ++pos_;
      skip_ws();
    }
    ExactReal e = number();
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      ExactReal den = number();
      if (!e.exact() || !den.exact() || den.value() == 0.0) {
        pos_ = at;
        fail("invalid fraction denominator");
      }
      auto q = div(*e.exact(), *den.exact());
      if (!q) fail("fraction overflows");
      e = ExactReal(*q);
    }
    if (close != '\0') {
      skip_ws();
      if (peek() != close) fail(std::string("expected '") + close + "'");
      ++pos_;
    }
    return e;
  }

  // Decimal literal; exact as a rational whenever it fits in 64 bits.
  ExactReal number() {
    std::size_t start = pos_;
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool exact = true;
    bool any_digit = false;
    auto push_digit = [&](char c, bool fractional) {
      any_digit = true;
      if (!exact) return;
      if (num > (std::numeric_limits<std::int64_t>::max() - 9) / 10 ||
          (fractional && den > std::numeric_limits<std::int64_t>::max() / 10)) {
        exact = false;
        return;
      }
      num = num * 10 + (c - '0');
      if (fractional) den *= 10;
    };
    while (std::isdigit(static_cast<unsigned char>(peek()))) push_digit(s_[pos_++], false);
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) push_digit(s_[pos_++], true);
    }
    if (!any_digit) {
      pos_ = start;
      fail("expected a number");
    }
    int exp10 = 0;
    if (peek() == 'e' || peek() == 'E') {
      std::size_t mark = pos_;
      ++pos_;
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = mark;
        fail("malformed exponent in number");
      }
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        exp10 = exp10 * 10 + (s_[pos_++] - '0');
        if (exp10 > 400) fail("number out of range");
      }
      exp10 *= sign;
    }
    std::string text(s_.substr(start, pos_ - start));
    if (exact) {
      std::optional<Rational> r = Rational::make(num, den);
      for (int i = 0; r && i < std::abs(exp10); ++i) {
        r = exp10 > 0 ? mul(*r, Rational{10, 1}) : mul(*r, Rational{1, 10});
      }
      if (r) return ExactReal(*r);
    }
    ExactReal inexact(std::strtod(text.c_str(), nullptr));
    return inexact;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

PseudoPolynomial PseudoPolynomial::parse(std::string_view literal) {
  TermList terms = LiteralParser(literal).parse();
  try {
    return PseudoPolynomial(std::move(terms));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

// ---------------------------------------------------------------------------
// Certified evaluation

namespace {

constexpr std::int64_t kMaxRootDegree = 1 << 16;
constexpr std::int64_t kMaxPowerForRoot = 1 << 12;

bool small_rational(const ExactReal& e) {
  return e.exact() && e.exact()->num > 0 && e.exact()->num <= kMaxPowerForRoot &&
         e.exact()->den <= kMaxRootDegree;
}

void set_exact(mpfr_ptr out, const ExactReal& v, double& rounding_units) {
  if (v.exact() && v.exact()->den != 1) {
    mpfr_set_si(out, v.exact()->num, MPFR_RNDN);
    mpfr_div_si(out, out, v.exact()->den, MPFR_RNDN);
    rounding_units += 1.0;
  } else {
    mpfr_set_d(out, v.value(), MPFR_RNDN);  // exact: doubles fit any precision >= 53
  }
}

// Evaluates f(x) at precision bits; returns the midpoint and sets radius.
void eval_raw(const PseudoPolynomial& f, double x, mpfr_prec_t prec, BigFloat& mid, BigFloat& radius) {
  BigFloat xv(x, prec);
  BigFloat term(prec);
  BigFloat power(prec);
  BigFloat scratch(prec);
  BigFloat abs_sum(prec);
  mpfr_set_zero(mid.get(), 1);
  double worst_units = 0.0;
  const double log_x = std::abs(std::log(x));
  for (const auto& t : f.terms()) {
    double units = 0.0;
    const ExactReal& e = t.exponent;
    if (e.is_integer() && e.exact()) {
      mpfr_pow_ui(power.get(), xv.get(), static_cast<unsigned long>(e.exact()->num), MPFR_RNDN);
      units += 1.0;
    } else if (small_rational(e)) {
      mpfr_pow_ui(scratch.get(), xv.get(), static_cast<unsigned long>(e.exact()->num), MPFR_RNDN);
      mpfr_rootn_ui(power.get(), scratch.get(), static_cast<unsigned long>(e.exact()->den), MPFR_RNDN);
      units += 2.0;
    } else {
      double exponent_units = 0.0;
      set_exact(scratch.get(), e, exponent_units);
      mpfr_pow(power.get(), xv.get(), scratch.get(), MPFR_RNDN);
      units += 1.0 + exponent_units * (std::abs(e.value()) * log_x + 1.0);
    }
    set_exact(term.get(), t.coefficient, units);
    mpfr_mul(term.get(), term.get(), power.get(), MPFR_RNDN);
    units += 1.0;
    mpfr_add(mid.get(), mid.get(), term.get(), MPFR_RNDN);
    mpfr_abs(scratch.get(), term.get(), MPFR_RNDU);
    mpfr_add(abs_sum.get(), abs_sum.get(), scratch.get(), MPFR_RNDU);
    worst_units = std::max(worst_units, units);
  }
  // |error| <= (per-term rounding + one rounding per addition) * u * sum|t_i|,
  // with u = 2^{1-prec} and a 10% cushion for second-order terms.
  const double multiplier = 1.1 * (worst_units + static_cast<double>(f.term_count()) + 1.0);
  mpfr_set_prec(radius.get(), 64);
  mpfr_mul_d(radius.get(), abs_sum.get(), multiplier, MPFR_RNDU);
  mpfr_mul_2si(radius.get(), radius.get(), 1 - static_cast<long>(prec), MPFR_RNDU);
}

// Exact floor when every term is rational at n (perfect-power shortcut).
std::optional<std::int64_t> exact_floor(const PseudoPolynomial& f, std::int64_t n) {
  for (const auto& t : f.terms()) {
    if (!t.coefficient.exact() || !small_rational(t.exponent)) return std::nullopt;
  }
  mpq_t sum;
  mpq_t q;
  mpz_t power;
  mpz_t root;
  mpq_init(sum);
  mpq_init(q);
  mpz_init(power);
  mpz_init(root);
  bool all_exact = true;
  for (const auto& t : f.terms()) {
    const Rational& e = *t.exponent.exact();
    mpz_ui_pow_ui(power, static_cast<unsigned long>(n), static_cast<unsigned long>(e.num));
    if (mpz_root(root, power, static_cast<unsigned long>(e.den)) == 0) {
      all_exact = false;
      break;
    }
    const Rational& c = *t.coefficient.exact();
    mpq_set_si(q, c.num, static_cast<unsigned long>(c.den));
    mpq_canonicalize(q);
    mpz_mul(mpq_numref(q), mpq_numref(q), root);
    mpq_canonicalize(q);
    mpq_add(sum, sum, q);
  }
  std::optional<std::int64_t> out;
  if (all_exact) {
    mpz_fdiv_q(root, mpq_numref(sum), mpq_denref(sum));
    if (mpz_fits_slong_p(root)) out = mpz_get_si(root);
  }
  mpz_clear(root);
  mpz_clear(power);
  mpq_clear(q);
  mpq_clear(sum);
  return out;
}

constexpr std::array<mpfr_prec_t, 6> kPrecisionLadder = {53, 106, 212, 424, 848, 1024};

}  // namespace

Ball eval(const PseudoPolynomial& f, double x, int precision_bits) {
  if (!(x > 0.0)) throw DomainError("eval: x must be positive");
  if (precision_bits < 53) throw DomainError("eval: precision must be at least 53 bits");
  Ball out{BigFloat(precision_bits), BigFloat(64)};
  eval_raw(f, x, precision_bits, out.mid, out.radius);
  BigFloat limit(64);
  mpfr_abs(limit.get(), out.mid.get(), MPFR_RNDD);
  mpfr_mul_2si(limit.get(), limit.get(), -precision_bits / 2, MPFR_RNDD);
  if (mpfr_cmp(out.radius.get(), limit.get()) > 0) {
    throw PrecisionError("eval: cannot certify f(" + std::to_string(x) + ") to " +
                         std::to_string(precision_bits / 2) + " relative bits");
  }
  return out;
}

std::int64_t floor_eval(const PseudoPolynomial& f, std::int64_t n) {
  if (n < 1) throw DomainError("floor_eval: n must be at least 1");
  if (auto exact = exact_floor(f, n)) return *exact;
  for (mpfr_prec_t prec : kPrecisionLadder) {
    BigFloat mid(prec);
    BigFloat radius(64);
    eval_raw(f, static_cast<double>(n), prec, mid, radius);
    BigFloat lo(prec + 64);
    BigFloat hi(prec + 64);
    mpfr_sub(lo.get(), mid.get(), radius.get(), MPFR_RNDD);
    mpfr_add(hi.get(), mid.get(), radius.get(), MPFR_RNDU);
    mpfr_floor(lo.get(), lo.get());
    mpfr_floor(hi.get(), hi.get());
    if (mpfr_equal_p(lo.get(), hi.get())) {
      if (!mpfr_fits_slong_p(lo.get(), MPFR_RNDN)) throw DomainError("floor_eval: value exceeds 64 bits");
      return mpfr_get_si(lo.get(), MPFR_RNDN);
    }
  }
  throw PrecisionError("floor_eval: f(" + std::to_string(n) + ") is within 2^-1000 of an integer");
}

double fractional_part(const PseudoPolynomial& f, std::int64_t n) {
  const std::int64_t fl = floor_eval(f, n);
  BigFloat mid(192);
  BigFloat radius(64);
  eval_raw(f, static_cast<double>(n), 192, mid, radius);
  mpfr_sub_si(mid.get(), mid.get(), static_cast<long>(fl), MPFR_RNDN);
  double frac = mid.to_double();
  return std::clamp(frac, 0.0, std::nextafter(1.0, 0.0));
}

// ---------------------------------------------------------------------------
// Preimages and derived constants

double largest_preimage(const PseudoPolynomial& f, double N) {
  using ld = long double;
  const ld target = N;
  auto g = [&](ld x) { return f(x) - target; };
  if (g(1.0L) > 0.0L) throw NoSolutionError("largest_preimage: N < f(1)");

  // f is increasing beyond x0 where a_d theta_d x^{theta_d - theta_{d-1}} dominates the rest.
  const auto& terms = f.terms();
  const ld lead = static_cast<ld>(f.leading_coefficient()) * f.leading_exponent();
  ld lower_sum = 0.0L;
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    lower_sum += std::abs(static_cast<ld>(terms[i].coefficient.value()) * terms[i].exponent.value());
  }
  ld x0 = 1.0L;
  if (terms.size() >= 2 && lower_sum > 0.0L) {
    const ld gap = f.leading_exponent() - f.previous_exponent(ThetaZero::kTheorem);
    x0 = std::max(1.0L, std::pow(lower_sum / lead, 1.0L / gap));
  }

  ld lo;
  ld hi;
  if (g(x0) <= 0.0L) {
    lo = x0;
    hi = std::max(x0 * 2.0L, std::pow(target / static_cast<ld>(f.leading_coefficient()),
                                      1.0L / f.leading_exponent()) + 2.0L);
    while (g(hi) < 0.0L) hi *= 2.0L;
  } else {
    // Largest sign change below x0, located on a fine grid.
    constexpr int kSteps = 4096;
    const ld step = (x0 - 1.0L) / kSteps;
    hi = x0;
    lo = x0 - step;
    while (lo > 1.0L && g(lo) > 0.0L) {
      hi = lo;
      lo -= step;
    }
    lo = std::max(lo, 1.0L);
  }
  for (int i = 0; i < 200; ++i) {
    ld mid = lo + (hi - lo) / 2.0L;
    if (mid <= lo || mid >= hi) break;
    if (g(mid) <= 0.0L) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return static_cast<double>(std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi);
}

double p_deviation(const PseudoPolynomial& f, double N) {
  const long double P = largest_preimage(f, N);
  const long double approx =
      std::pow(static_cast<long double>(N) / f.leading_coefficient(), 1.0L / f.leading_exponent());
  return static_cast<double>(P - approx);
}

TermList derivative(const PseudoPolynomial& f, int j) { return derivative(f.terms(), j); }

TheoremConstants theorem_constants(const PseudoPolynomial& f) {
  const ExactReal theta_d = f.terms().back().exponent;
  const ExactReal theta_prev = f.term_count() >= 2 ? f.terms()[f.term_count() - 2].exponent
                                                   : ExactReal(Rational{0, 1});
  const ExactReal gap = theta_d - theta_prev;
  const Rational sixth{1, 6};
  const std::int64_t c =
      theta_d.exact() ? theta_d.exact()->ceil() : static_cast<std::int64_t>(std::ceil(theta_d.value()));
  const std::int64_t shape = c * c * (c + 1);

  TheoremConstants out;
  if (gap.exact()) {
    const Rational rho = compare(*gap.exact(), sixth) < 0 ? *gap.exact() : sixth;
    auto bound = div(Rational{2 * shape, 1}, rho);
    if (bound) {
      out.rho = rho.to_double();
      out.s_bound = bound->to_double();
      out.s_min = bound->floor() + 1;
      return out;
    }
  }
  out.rho = std::min(gap.value(), 1.0 / 6.0);
  out.s_bound = 2.0 / out.rho * static_cast<double>(shape);
  out.s_min = static_cast<std::int64_t>(std::floor(out.s_bound)) + 1;
  return out;
}

// ---------------------------------------------------------------------------
// Arcs

double distance_to_integer(double alpha) { return std::abs(alpha - std::nearbyint(alpha)); }

double ArcSetup::v_cap(const PseudoPolynomial& f) {
  return std::min(f.leading_exponent() - f.previous_exponent(ThetaZero::kMajorArc), 0.2);
}

double ArcSetup::default_v(const PseudoPolynomial& f) { return 0.9 * v_cap(f); }

ArcSetup::ArcSetup(const PseudoPolynomial& f, std::int64_t N, std::optional<double> v) : N_(N) {
  if (N < 1) throw DomainError("ArcSetup: N must be positive");
  const double cap = v_cap(f);
  v_ = v.value_or(default_v(f));
  if (!(v_ > 0.0 && v_ < cap)) {
    throw DomainError("ArcSetup: v must lie in (0, " + std::to_string(cap) + ")");
  }
  P_ = largest_preimage(f, static_cast<double>(N));
  tau_ = std::pow(P_, f.leading_exponent() - v_);
  if (!(tau_ > 1.0)) throw DomainError("ArcSetup: tau <= 1, N too small");
  rho_ = theorem_constants(f).rho;
}

bool ArcSetup::is_major(double alpha) const { return distance_to_integer(alpha) < 1.0 / tau_; }

}  // namespace waring
