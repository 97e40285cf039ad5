#include "smp/report.hpp"

#include <fstream>
#include <sstream>

#include "smp/errors.hpp"

namespace smp {

std::map<std::string, double> RunConfig::default_tolerances() {
  return {{"exact", 1e-12},       {"stochastic", 1e-9}, {"closed_form", 1e-6},
          {"quadrature", 1e-4},   {"supermedian", 1e-9}, {"extension", 2e-3},
          {"generator", 1e-4},    {"separation", 1e-9}};
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["examples"] = examples;
  j["suites"] = suites;
  j["seed"] = seed;
  j["n"] = n;
  j["grid_h"] = grid_h;
  j["grid_radius"] = grid_radius;
  j["format"] = format;
  j["out"] = out;
  j["tolerances"] = tolerances.empty() ? default_tolerances() : tolerances;
  return j;
}

int SuiteReport::pass_count() const {
  int c = 0;
  for (const auto& r : records) c += r.pass ? 1 : 0;
  return c;
}

int SuiteReport::fail_count() const { return static_cast<int>(records.size()) - pass_count(); }

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json j;
  j["schema"] = "1";
  j["config"] = config.to_json();
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    recs.push_back({{"check", r.check},
                    {"example", r.example},
                    {"params", r.params},
                    {"statistic", r.statistic},
                    {"null_value", r.null_value},
                    {"tolerance", r.tolerance},
                    {"pass", r.pass}});
  }
  j["records"] = std::move(recs);
  j["summary"] = {{"pass", pass_count()}, {"fail", fail_count()}, {"skipped", skipped}};
  return j;
}

std::string SuiteReport::to_json_string() const { return to_json().dump(2) + "\n"; }

void validate_report(const nlohmann::json& report) {
  if (!report.is_object()) throw ConfigError("report: top level must be an object");
  for (const char* key : {"schema", "config", "records", "summary"})
    if (!report.contains(key)) throw ConfigError(std::string("report: missing field '") + key + "'");
  if (!report["records"].is_array()) throw ConfigError("report: 'records' must be an array");
  for (const auto& r : report["records"]) {
    for (const char* key : {"check", "example", "params", "statistic", "null_value", "tolerance",
                            "pass"})
      if (!r.contains(key))
        throw ConfigError(std::string("report record: missing field '") + key + "'");
  }
}

std::string render_markdown(const nlohmann::json& report) {
  validate_report(report);
  std::ostringstream os;
  os << "# Verification report\n\n";
  const auto& summary = report["summary"];
  os << "- pass: " << summary["pass"] << "\n- fail: " << summary["fail"]
     << "\n- skipped: " << summary["skipped"] << "\n\n";
  os << "| check | example | statistic | tolerance | pass |\n";
  os << "|---|---|---|---|---|\n";
  for (const auto& r : report["records"]) {
    os << "| " << r["check"].get<std::string>() << " | " << r["example"].get<std::string>()
       << " | " << r["statistic"].dump() << " | " << r["tolerance"].dump() << " | "
       << (r["pass"].get<bool>() ? "yes" : "NO") << " |\n";
  }
  return os.str();
}

std::string render_csv(const nlohmann::json& report) {
  validate_report(report);
  std::ostringstream os;
  os << "check,example,statistic,null_value,tolerance,pass,params\n";
  for (const auto& r : report["records"]) {
    std::string params = r["params"].dump();
    for (auto& ch : params)
      if (ch == ',') ch = ';';
    os << r["check"].get<std::string>() << ',' << r["example"].get<std::string>() << ','
       << r["statistic"].dump() << ',' << r["null_value"].dump() << ',' << r["tolerance"].dump()
       << ',' << (r["pass"].get<bool>() ? "true" : "false") << ',' << params << '\n';
  }
  return os.str();
}

nlohmann::json parse_report_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open report file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into line/column for the diagnostic.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError("malformed JSON at line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
}

}  // namespace smp
