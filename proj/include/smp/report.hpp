#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace smp {

/// One verification record. Serialized exactly as
/// {check, example, params, statistic, null_value, tolerance, pass}.
struct CheckRecord {
  std::string check;
  std::string example;
  nlohmann::json params = nlohmann::json::object();
  double statistic = 0.0;
  double null_value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Fully resolved run configuration; echoed into every report so a run can be
/// reproduced from its own output.
struct RunConfig {
  std::vector<std::string> examples;
  std::vector<std::string> suites;
  std::uint64_t seed = 42;
  int n = 10000;
  double grid_h = 0.01;
  double grid_radius = 10.0;
  std::string format = "json";
  std::string out;
  std::map<std::string, double> tolerances;

  static std::map<std::string, double> default_tolerances();
  nlohmann::json to_json() const;
};

struct SuiteReport {
  RunConfig config;
  std::vector<CheckRecord> records;
  int skipped = 0;
  double wall_seconds = 0.0;  // console only, never serialized

  int pass_count() const;
  int fail_count() const;
  nlohmann::json to_json() const;  // schema "1"
  std::string to_json_string() const;
};

/// Schema check of a parsed report; throws ConfigError naming the defect.
void validate_report(const nlohmann::json& report);

std::string render_markdown(const nlohmann::json& report);
std::string render_csv(const nlohmann::json& report);

/// Parses with line/column diagnostics in the ConfigError message.
nlohmann::json parse_report_file(const std::string& path);

}  // namespace smp
