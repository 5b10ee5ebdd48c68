#ifndef WARING_EXACT_REAL_HPP
#define WARING_EXACT_REAL_HPP

#include <cstdint>
#include <optional>
#include <string>

namespace waring {

/// Reduced fraction num/den with den > 0. Arithmetic reports overflow by
/// returning std::nullopt instead of wrapping.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static std::optional<Rational> make(std::int64_t num, std::int64_t den);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }
  std::int64_t floor() const;
  std::int64_t ceil() const;
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
};

std::optional<Rational> add(const Rational& a, const Rational& b);
std::optional<Rational> sub(const Rational& a, const Rational& b);
std::optional<Rational> mul(const Rational& a, const Rational& b);
std::optional<Rational> div(const Rational& a, const Rational& b);
int compare(const Rational& a, const Rational& b);

/// A real number carried as a double, plus its exact rational value when one
/// is known. Literals such as "5/2" or "1.25" stay exact; generic doubles
/// keep an exact value only when it is a short dyadic fraction.
class ExactReal {
 public:
  ExactReal() = default;
  ExactReal(double value);  // NOLINT(google-explicit-constructor)
  ExactReal(const Rational& r);  // NOLINT(google-explicit-constructor)

  double value() const { return value_; }
  const std::optional<Rational>& exact() const { return exact_; }

  bool is_integer() const;
  std::string to_string() const;

  friend ExactReal operator-(const ExactReal& a, const ExactReal& b);
  friend ExactReal operator*(const ExactReal& a, const ExactReal& b);

 private:
  double value_ = 0.0;
  std::optional<Rational> exact_ = Rational{0, 1};
};

}  // namespace waring

#endif  // WARING_EXACT_REAL_HPP
