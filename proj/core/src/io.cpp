#include "calderon/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "calderon/numkit/errors.hpp"

namespace calderon::io {

using nlohmann::json;

std::string format_double(double x) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), x);
  return std::string(buffer, result.ptr);
}

namespace {

double parse_double(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw ParameterError("trailing characters in number '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ParameterError("cannot parse number '" + text + "'");
  }
}

int parse_int(const std::string& text) {
  int v = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), v);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size())
    throw ParameterError("cannot parse integer '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << text;
}

}  // namespace

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw ParameterError("CSV row width differs from the header");
  rows.push_back(std::move(row));
}

std::string CsvTable::metadata_value(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  throw ParameterError("CSV metadata lacks '" + key + "'");
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ostringstream os;
  for (const auto& [k, v] : table.metadata) os << "# " << k << '=' << v << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  write_file(path, os.str());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  CsvTable table;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      table.metadata.emplace_back(line.substr(2, eq - 2), line.substr(eq + 1));
    } else if (!header) {
      table.columns = split(line, ',');
      header = true;
    } else {
      table.add_row(split(line, ','));
    }
  }
  if (!header) throw ParameterError(path.string() + " has no CSV header");
  return table;
}

std::string basis_to_json(const radial::RadialBasis& basis) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "radial_basis";
  doc["n"] = basis.spec().n;
  doc["s"] = basis.spec().s;
  doc["m"] = basis.m();
  doc["k_max"] = basis.k_max();
  json profiles = json::array();
  for (const auto& p : basis.profiles()) {
    json coeffs = json::array();
    for (const auto& c : p.coeffs) coeffs.push_back(numkit::to_decimal_string(c));
    profiles.push_back({{"k", p.k}, {"coeffs", coeffs}});
  }
  doc["profiles"] = profiles;
  const auto& d = basis.diagnostics();
  doc["diagnostics"] = {{"gram_residual", d.gram_residual},
                        {"moment_residual", d.moment_residual},
                        {"condition_estimates", d.condition_estimates},
                        {"precision_bits", d.precision_bits}};
  return doc.dump(2);
}

radial::RadialBasis basis_from_json(const std::string& text, int quad_nodes) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("invalid basis JSON: ") + e.what());
  }
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) throw ParameterError("unsupported basis schema version");
    radial::WeightedSpaceSpec spec{doc.at("n").get<int>(), doc.at("s").get<double>()};
    const int m = doc.at("m").get<int>();
    std::vector<radial::RadialProfile> profiles;
    for (const auto& p : doc.at("profiles")) {
      radial::RadialProfile profile;
      profile.m = m;
      profile.k = p.at("k").get<int>();
      for (const auto& c : p.at("coeffs")) profile.coeffs.push_back(numkit::wide_from_string(c.get<std::string>()));
      profiles.push_back(std::move(profile));
    }
    const auto& d = doc.at("diagnostics");
    radial::BasisDiagnostics diagnostics;
    diagnostics.gram_residual = d.at("gram_residual").get<double>();
    diagnostics.moment_residual = d.at("moment_residual").get<double>();
    diagnostics.condition_estimates = d.at("condition_estimates").get<std::vector<double>>();
    diagnostics.precision_bits = d.at("precision_bits").get<int>();
    return radial::RadialBasis(spec, m, std::move(profiles), std::move(diagnostics), quad_nodes);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed basis JSON: ") + e.what());
  }
}

void save_basis(const std::filesystem::path& path, const radial::RadialBasis& basis) {
  write_file(path, basis_to_json(basis) + "\n");
}

radial::RadialBasis load_basis(const std::filesystem::path& path, int quad_nodes) {
  return basis_from_json(read_file(path), quad_nodes);
}

CsvTable gamma_to_csv(const dtn::GammaMatrix& mat) {
  CsvTable table;
  table.metadata = {{"schema_version", std::to_string(kSchemaVersion)},
                    {"n", std::to_string(mat.n)},
                    {"s", format_double(mat.s)},
                    {"q", mat.q_descriptor}};
  table.columns = {"m1", "k1", "l1", "m2", "k2", "l2", "value"};
  for (std::size_t i = 0; i < mat.indices.size(); ++i)
    for (std::size_t j = 0; j < mat.indices.size(); ++j) {
      const auto& a = mat.indices[i];
      const auto& b = mat.indices[j];
      table.add_row({std::to_string(a.m), std::to_string(a.k), std::to_string(a.l), std::to_string(b.m),
                     std::to_string(b.k), std::to_string(b.l),
                     format_double(mat.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))});
    }
  return table;
}

dtn::GammaMatrix gamma_from_csv(const CsvTable& table) {
  if (table.columns != std::vector<std::string>{"m1", "k1", "l1", "m2", "k2", "l2", "value"})
    throw ParameterError("unexpected Gamma CSV columns");
  dtn::GammaMatrix mat;
  mat.n = parse_int(table.metadata_value("n"));
  mat.s = parse_double(table.metadata_value("s"));
  mat.q_descriptor = table.metadata_value("q");
  std::map<poisson::BasisIndex, std::size_t> position;
  for (const auto& row : table.rows) {
    const poisson::BasisIndex a{parse_int(row[0]), parse_int(row[1]), parse_int(row[2])};
    const poisson::BasisIndex b{parse_int(row[3]), parse_int(row[4]), parse_int(row[5])};
    position.emplace(a, 0);
    position.emplace(b, 0);
  }
  for (auto& [idx, pos] : position) {
    pos = mat.indices.size();
    mat.indices.push_back(idx);
  }
  const auto size = static_cast<Eigen::Index>(mat.indices.size());
  mat.entries = numkit::Matrix::Zero(size, size);
  for (const auto& row : table.rows) {
    const poisson::BasisIndex a{parse_int(row[0]), parse_int(row[1]), parse_int(row[2])};
    const poisson::BasisIndex b{parse_int(row[3]), parse_int(row[4]), parse_int(row[5])};
    mat.entries(static_cast<Eigen::Index>(position.at(a)), static_cast<Eigen::Index>(position.at(b))) =
        parse_double(row[6]);
  }
  return mat;
}

void save_gamma(const std::filesystem::path& path, const dtn::GammaMatrix& mat) { write_csv(path, gamma_to_csv(mat)); }

dtn::GammaMatrix load_gamma(const std::filesystem::path& path) { return gamma_from_csv(read_csv(path)); }

std::string a0_key(int n, double s, poisson::ControlCaps caps, int radial_nodes, int max_degree) {
  std::ostringstream os;
  os << "n=" << n << ";s=" << format_double(s) << ";M=" << caps.M << ";K=" << caps.K << ";radial=" << radial_nodes
     << ";degree=" << max_degree;
  return os.str();
}

std::string StoredA0::key() const { return a0_key(n, s, caps, radial_nodes, max_degree); }

StoredA0 capture_a0(const poisson::ControlProblem& problem) {
  StoredA0 a0;
  a0.n = problem.grid().n();
  a0.s = problem.grid().s();
  a0.caps = problem.caps();
  a0.radial_nodes = static_cast<int>(problem.grid().radial_size());
  a0.max_degree = problem.grid().max_degree();
  const int top = a0.n == 1 ? std::min(a0.caps.M, 1) : a0.caps.M;
  for (int m = 0; m <= top; ++m) a0.blocks.push_back(problem.radial_block(m));
  return a0;
}

void save_a0(const std::filesystem::path& path, const StoredA0& a0) {
  CsvTable table;
  table.metadata = {{"schema_version", std::to_string(kSchemaVersion)},
                    {"key", a0.key()},
                    {"n", std::to_string(a0.n)},
                    {"s", format_double(a0.s)},
                    {"M", std::to_string(a0.caps.M)},
                    {"K", std::to_string(a0.caps.K)},
                    {"radial_nodes", std::to_string(a0.radial_nodes)},
                    {"max_degree", std::to_string(a0.max_degree)}};
  table.columns = {"m", "node", "k", "value"};
  for (std::size_t m = 0; m < a0.blocks.size(); ++m) {
    const auto& block = a0.blocks[m];
    for (Eigen::Index i = 0; i < block.rows(); ++i)
      for (Eigen::Index k = 0; k < block.cols(); ++k)
        table.add_row({std::to_string(m), std::to_string(i), std::to_string(k), format_double(block(i, k))});
  }
  write_csv(path, table);
}

StoredA0 load_a0(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.columns != std::vector<std::string>{"m", "node", "k", "value"})
    throw ParameterError("unexpected A0 CSV columns");
  StoredA0 a0;
  a0.n = parse_int(table.metadata_value("n"));
  a0.s = parse_double(table.metadata_value("s"));
  a0.caps = {parse_int(table.metadata_value("M")), parse_int(table.metadata_value("K"))};
  a0.radial_nodes = parse_int(table.metadata_value("radial_nodes"));
  a0.max_degree = parse_int(table.metadata_value("max_degree"));
  if (table.metadata_value("key") != a0.key()) throw ParameterError("A0 table key does not match its metadata");
  const int top = a0.n == 1 ? std::min(a0.caps.M, 1) : a0.caps.M;
  a0.blocks.assign(static_cast<std::size_t>(top + 1), numkit::Matrix::Zero(a0.radial_nodes, a0.caps.K + 1));
  for (const auto& row : table.rows) {
    const int m = parse_int(row[0]), i = parse_int(row[1]), k = parse_int(row[2]);
    if (m < 0 || m > top || i < 0 || i >= a0.radial_nodes || k < 0 || k > a0.caps.K)
      throw ParameterError("A0 table entry out of range");
    a0.blocks[static_cast<std::size_t>(m)](i, k) = parse_double(row[3]);
  }
  return a0;
}

}  // namespace calderon::io
