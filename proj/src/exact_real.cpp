#include "waring/exact_real.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace waring {

namespace {

using i128 = __int128;

std::optional<Rational> from_wide(i128 num, i128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();
  if (num > kMax || num < -kMax || den > kMax) return std::nullopt;
  return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

// Dyadic doubles with a denominator up to 2^20 are kept exact.
std::optional<Rational> dyadic(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  constexpr int kMaxShift = 20;
  double scaled = v;
  std::int64_t den = 1;
  for (int i = 0; i <= kMaxShift; ++i) {
    if (scaled == std::floor(scaled) && std::abs(scaled) < 9.0e18) {
      return Rational::make(static_cast<std::int64_t>(scaled), den);
    }
    scaled *= 2.0;
    den *= 2;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Rational> Rational::make(std::int64_t num, std::int64_t den) {
  return from_wide(num, den);
}

std::int64_t Rational::floor() const {
  std::int64_t q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

std::int64_t Rational::ceil() const {
  std::int64_t q = num / den;
  if (num % den != 0 && num > 0) ++q;
  return q;
}

std::string Rational::to_string() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

std::optional<Rational> add(const Rational& a, const Rational& b) {
  return from_wide(static_cast<i128>(a.num) * b.den + static_cast<i128>(b.num) * a.den,
                   static_cast<i128>(a.den) * b.den);
}

std::optional<Rational> sub(const Rational& a, const Rational& b) {
  return from_wide(static_cast<i128>(a.num) * b.den - static_cast<i128>(b.num) * a.den,
                   static_cast<i128>(a.den) * b.den);
}

std::optional<Rational> mul(const Rational& a, const Rational& b) {
  return from_wide(static_cast<i128>(a.num) * b.num, static_cast<i128>(a.den) * b.den);
}

std::optional<Rational> div(const Rational& a, const Rational& b) {
  if (b.num == 0) return std::nullopt;
  return from_wide(static_cast<i128>(a.num) * b.den, static_cast<i128>(a.den) * b.num);
}

int compare(const Rational& a, const Rational& b) {
  i128 lhs = static_cast<i128>(a.num) * b.den;
  i128 rhs = static_cast<i128>(b.num) * a.den;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

ExactReal::ExactReal(double value) : value_(value), exact_(dyadic(value)) {}

ExactReal::ExactReal(const Rational& r) : value_(r.to_double()), exact_(r) {}

bool ExactReal::is_integer() const {
  if (exact_) return exact_->is_integer();
  return value_ == std::floor(value_);
}

std::string ExactReal::to_string() const {
  if (exact_) return exact_->to_string();
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

ExactReal operator-(const ExactReal& a, const ExactReal& b) {
  if (a.exact_ && b.exact_) {
    if (auto r = sub(*a.exact_, *b.exact_)) return ExactReal(*r);
  }
  ExactReal out;
  out.value_ = a.value_ - b.value_;
  out.exact_ = std::nullopt;
  return out;
}

ExactReal operator*(const ExactReal& a, const ExactReal& b) {
  if (a.exact_ && b.exact_) {
    if (auto r = mul(*a.exact_, *b.exact_)) return ExactReal(*r);
  }
  ExactReal out;
  out.value_ = a.value_ * b.value_;
  out.exact_ = std::nullopt;
  return out;
}

}  // namespace waring
