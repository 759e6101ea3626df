#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "calderon/dtn.hpp"
#include "calderon/fracpoisson.hpp"
#include "calderon/radialbasis.hpp"

namespace calderon::io {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// Comma-separated table with optional leading "# key=value" comment lines.
struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string metadata_value(const std::string& key) const;  // throws ParameterError when absent
};

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Radial basis for one (n, s, m) as JSON with decimal coefficient strings.
std::string basis_to_json(const radial::RadialBasis& basis);
radial::RadialBasis basis_from_json(const std::string& text, int quad_nodes = 64);
void save_basis(const std::filesystem::path& path, const radial::RadialBasis& basis);
radial::RadialBasis load_basis(const std::filesystem::path& path, int quad_nodes = 64);

/// Keyed (m1,k1,l1,m2,k2,l2,value) table with n, s and q in the metadata.
CsvTable gamma_to_csv(const dtn::GammaMatrix& mat);
dtn::GammaMatrix gamma_from_csv(const CsvTable& table);
void save_gamma(const std::filesystem::path& path, const dtn::GammaMatrix& mat);
dtn::GammaMatrix load_gamma(const std::filesystem::path& path);

/// Radial blocks of a discretized A0, keyed by (n, s, caps, grid).
struct StoredA0 {
  int n = 0;
  double s = 0.0;
  poisson::ControlCaps caps;
  int radial_nodes = 0;
  int max_degree = 0;
  std::vector<numkit::Matrix> blocks;  // one per degree m <= caps.M

  std::string key() const;
};

std::string a0_key(int n, double s, poisson::ControlCaps caps, int radial_nodes, int max_degree);
StoredA0 capture_a0(const poisson::ControlProblem& problem);
void save_a0(const std::filesystem::path& path, const StoredA0& a0);
StoredA0 load_a0(const std::filesystem::path& path);

}  // namespace calderon::io
