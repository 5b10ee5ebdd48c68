#ifndef WARING_BOUND_REPORT_HPP
#define WARING_BOUND_REPORT_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace waring {

/// Measured quantity against an evaluated theoretical bound shape.
/// Implicit constants of the estimates show up in `ratio`.
struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;  // ordered
  double quantity = 0.0;
  double bound = 1.0;
  double ratio = 0.0;

  /// Throws std::invalid_argument unless bound > 0.
  static BoundReport make(std::string name, std::vector<std::pair<std::string, double>> parameters,
                          double quantity, double bound);

  double parameter(const std::string& key) const;
};

/// "name,<param names...>,quantity,bound,ratio". Every report must carry
/// the same parameter names, in the same order, as the first one.
void write_bound_reports_csv(std::ostream& os, const std::vector<BoundReport>& reports);

/// Locale-independent round-trip formatting used by every CSV/JSON writer.
std::string format_double(double value);

}  // namespace waring

#endif  // WARING_BOUND_REPORT_HPP
