#include "calderon/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "calderon/numkit/errors.hpp"

namespace calderon::cli {

using nlohmann::json;

namespace {

// NaN and infinities are not valid JSON numbers.
json number(double x) {
  if (std::isfinite(x)) return x;
  return io::format_double(x);
}

}  // namespace

Check& Report::check_at_most(std::string name, double value, double threshold, std::string detail) {
  checks.push_back({std::move(name), value <= threshold, value, threshold, std::move(detail)});
  return checks.back();
}

Check& Report::check_at_least(std::string name, double value, double threshold, std::string detail) {
  checks.push_back({std::move(name), value >= threshold, value, threshold, std::move(detail)});
  return checks.back();
}

Check& Report::check_flag(std::string name, bool passed, std::string detail) {
  checks.push_back({std::move(name), passed, passed ? 1.0 : 0.0, 1.0, std::move(detail)});
  return checks.back();
}

io::CsvTable& Report::add_table(std::string name, std::vector<std::string> columns) {
  io::CsvTable table;
  table.columns = std::move(columns);
  table.metadata.emplace_back("command", command);
  table.metadata.emplace_back("schema_version", std::to_string(io::kSchemaVersion));
  tables.emplace_back(std::move(name), std::move(table));
  return tables.back().second;
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

json Report::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks)
    checks_json.push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", number(c.value)},
                           {"threshold", number(c.threshold)},
                           {"detail", c.detail}});
  json table_names = json::array();
  for (const auto& [name, table] : tables) table_names.push_back(command + "_" + name + ".csv");
  json artifact_names = json::array();
  for (const auto& [name, contents] : artifacts) artifact_names.push_back(name);
  return {{"schema_version", io::kSchemaVersion},
          {"command", command},
          {"config", config},
          {"passed", passed()},
          {"checks", checks_json},
          {"results", results},
          {"tables", table_names},
          {"artifacts", artifact_names},
          {"notes", notes},
          {"wall_clock", wall_clock}};
}

void Report::write(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ParameterError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& [name, table] : tables) io::write_csv(dir / (command + "_" + name + ".csv"), table);
  for (const auto& [name, contents] : artifacts) {
    std::ofstream file(dir / name);
    if (!file) throw ParameterError("cannot write " + (dir / name).string());
    file << contents;
  }
  std::ofstream out(dir / (command + ".json"));
  if (!out) throw ParameterError("cannot write report to " + dir.string());
  out << to_json().dump(2) << '\n';
}

std::string Report::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "PASS " : "FAIL ") << command << '/' << c.name << "  value=" << io::format_double(c.value)
       << " threshold=" << io::format_double(c.threshold);
    if (!c.detail.empty()) os << "  (" << c.detail << ')';
    os << '\n';
  }
  for (const auto& note : notes) os << "note " << command << ": " << note << '\n';
  return os.str();
}

}  // namespace calderon::cli
