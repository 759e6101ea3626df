#pragma once

#include <deque>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "calderon/io.hpp"

namespace calderon::cli {

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

/// Outcome of one command: checks, scalar results and CSV tables.
struct Report {
  std::string command;
  nlohmann::json config;
  std::vector<Check> checks;
  nlohmann::json results = nlohmann::json::object();
  std::deque<std::pair<std::string, io::CsvTable>> tables;  // stable references for add_table
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, std::string>> artifacts;  // file name, contents
  double wall_clock = 0.0;

  /// value <= threshold passes.
  Check& check_at_most(std::string name, double value, double threshold, std::string detail = {});
  /// value >= threshold passes.
  Check& check_at_least(std::string name, double value, double threshold, std::string detail = {});
  Check& check_flag(std::string name, bool passed, std::string detail = {});
  io::CsvTable& add_table(std::string name, std::vector<std::string> columns);

  bool passed() const;
  nlohmann::json to_json() const;
  /// Writes <dir>/<command>.json, <dir>/<command>_<table>.csv and the artifacts.
  void write(const std::filesystem::path& dir) const;
  /// One line per check.
  std::string summary() const;
};

}  // namespace calderon::cli
