#ifndef WARING_CLI_HPP
#define WARING_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "waring/majorarc.hpp"

namespace waring {

/// Rejected configuration; what() names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& field, const std::string& message)
      : std::invalid_argument("config field '" + field + "': " + message), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::string polynomial = "x^(3/2)";
  std::vector<int> s = {2};
  std::int64_t n_min = 1;
  std::int64_t n_max = 10000;
  std::vector<std::int64_t> n_list;  // explicit N values for vinogradov
  std::optional<double> v;
  MainTermConvention convention = kDefaultConvention;
  int samples = 1000;
  std::uint64_t seed = 0;
  int H = 8;
  int B = 8;
  int window = 1000;
  int points_per_decade = 4;
  std::vector<int> k = {2, 3};
  double eps = 0.0;
  int intervals = 20;
  int grid_points = 10000;
  std::vector<std::string> lemmas;  // empty: every verify section
  double tolerance_scale = 1.0;
  std::string output = "-";
  int threads = 1;

  nlohmann::json to_json() const;
  /// Unknown keys and ill-typed values raise ConfigError.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base);
  /// Field-level range checks; throws ConfigError.
  void validate() const;
};

std::vector<std::string> verify_sections();

/// Entry point behind the command-line tool. Exit status: 0 success or all
/// checks passed, 1 a verification failed, 2 a configuration or capacity error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_count(const ExperimentConfig& config, std::ostream& out);
int cmd_convergence(const ExperimentConfig& config, std::ostream& out);
int cmd_verify(const ExperimentConfig& config, std::ostream& out);
int cmd_vaaler_check(const ExperimentConfig& config, std::ostream& out);
int cmd_vinogradov(const ExperimentConfig& config, std::ostream& out);

}  // namespace waring

#endif  // WARING_CLI_HPP
