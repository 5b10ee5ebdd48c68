#ifndef WARING_BIGFLOAT_HPP
#define WARING_BIGFLOAT_HPP

#include <mpfr.h>

#include <string>
#include <utility>

namespace waring {

/// Owning wrapper around an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t precision = 53) { mpfr_init2(value_, precision); mpfr_set_zero(value_, 1); }
  BigFloat(double v, mpfr_prec_t precision) : BigFloat(precision) { mpfr_set_d(value_, v, MPFR_RNDN); }
  BigFloat(const BigFloat& other) : BigFloat(mpfr_get_prec(other.value_)) {
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& other) noexcept : BigFloat(mpfr_get_prec(other.value_)) { mpfr_swap(value_, other.value_); }
  BigFloat& operator=(BigFloat other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(value_); }

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  std::string to_string(int digits = 30) const;

 private:
  mpfr_t value_;
};

inline std::string BigFloat::to_string(int digits) const {
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Rg", digits, value_);
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

}  // namespace waring

#endif  // WARING_BIGFLOAT_HPP
