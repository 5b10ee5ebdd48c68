#ifndef WARING_ERRORS_HPP
#define WARING_ERRORS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace waring {

// Argument outside an operation's domain (x <= 0, lambda out of range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Requested certification could not be reached within the precision cap.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Alpha was expected on one arc but lies on the other.
class ArcError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Brute-force enumeration or exact counting exceeds its guard.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The NTT prime set cannot certify exact recovery of the convolution.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A lemma's hypothesis fails at a concrete index.
class HypothesisError : public std::domain_error {
 public:
  HypothesisError(const std::string& what, std::int64_t first_offender)
      : std::domain_error(what), first_offender_(first_offender) {}
  std::int64_t first_offender() const { return first_offender_; }

 private:
  std::int64_t first_offender_;
};

class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& message, std::size_t position)
      : std::invalid_argument(message + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

}  // namespace waring

#endif  // WARING_ERRORS_HPP
