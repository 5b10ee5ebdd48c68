#include "waring/bound_report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace waring {

BoundReport BoundReport::make(std::string name, std::vector<std::pair<std::string, double>> parameters,
                              double quantity, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("BoundReport '" + name + "': bound must be positive");
  BoundReport r;
  r.name = std::move(name);
  r.parameters = std::move(parameters);
  r.quantity = quantity;
  r.bound = bound;
  r.ratio = quantity / bound;
  return r;
}

double BoundReport::parameter(const std::string& key) const {
  for (const auto& [k, v] : parameters) {
    if (k == key) return v;
  }
  throw std::out_of_range("BoundReport '" + name + "' has no parameter '" + key + "'");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

void write_bound_reports_csv(std::ostream& os, const std::vector<BoundReport>& reports) {
  if (reports.empty()) {
    os << "name,quantity,bound,ratio\n";
    return;
  }
  const auto& first = reports.front().parameters;
  os << "name";
  for (const auto& [k, v] : first) os << ',' << k;
  os << ",quantity,bound,ratio\n";
  for (const auto& r : reports) {
    if (r.parameters.size() != first.size()) throw std::invalid_argument("mixed parameter sets in CSV export");
    os << r.name;
    for (std::size_t i = 0; i < r.parameters.size(); ++i) {
      if (r.parameters[i].first != first[i].first) throw std::invalid_argument("mixed parameter sets in CSV export");
      os << ',' << format_double(r.parameters[i].second);
    }
    os << ',' << format_double(r.quantity) << ',' << format_double(r.bound) << ',' << format_double(r.ratio)
       << '\n';
  }
}

}  // namespace waring
