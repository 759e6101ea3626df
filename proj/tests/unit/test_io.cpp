#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "calderon/io.hpp"
#include "calderon/numkit/errors.hpp"

using namespace calderon;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "calderon_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Io, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 200));
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
}

TEST(Io, CsvRoundTrip) {
  io::CsvTable table;
  table.metadata = {{"n", "2"}, {"note", "x"}};
  table.columns = {"a", "b"};
  table.add_row({"1", "2.5"});
  table.add_row({"3", "-4e-300"});
  EXPECT_THROW(table.add_row({"1"}), ParameterError);
  const auto path = scratch("table.csv");
  io::write_csv(path, table);
  const auto back = io::read_csv(path);
  EXPECT_EQ(back.metadata, table.metadata);
  EXPECT_EQ(back.columns, table.columns);
  EXPECT_EQ(back.rows, table.rows);
  EXPECT_EQ(back.metadata_value("n"), "2");
  EXPECT_THROW(back.metadata_value("missing"), ParameterError);
}

TEST(Io, BasisRoundTripIsExact) {
  ProblemParams params;
  params.n = 2;
  params.s = 0.25;
  const auto basis = radial::build_radial_basis(3, 6, params);
  const auto path = scratch("basis.json");
  io::save_basis(path, basis);
  const auto back = io::load_basis(path);
  EXPECT_EQ(back.m(), 3);
  EXPECT_EQ(back.k_max(), 6);
  EXPECT_EQ(back.spec().n, 2);
  EXPECT_EQ(back.spec().s, 0.25);
  for (int k = 0; k <= 6; ++k) {
    ASSERT_EQ(back.profile(k).coeffs.size(), basis.profile(k).coeffs.size());
    for (std::size_t j = 0; j < basis.profile(k).coeffs.size(); ++j)
      EXPECT_EQ(back.profile(k).coeffs[j], basis.profile(k).coeffs[j]);
    EXPECT_EQ(back.profile(k).eval_exact(2.5), basis.profile(k).eval_exact(2.5));
  }
  EXPECT_THROW(io::basis_from_json("{\"schema_version\": 1}"), ParameterError);
}

TEST(Io, GammaRoundTrip) {
  const auto mat = dtn::random_section(2, 3, [](int level) { return std::exp(-level); }, 4);
  const auto path = scratch("gamma.csv");
  io::save_gamma(path, mat);
  const auto back = io::load_gamma(path);
  EXPECT_EQ(back.n, mat.n);
  EXPECT_EQ(back.indices, mat.indices);
  EXPECT_EQ((back.entries - mat.entries).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Io, A0RoundTripAndKey) {
  ProblemParams params;
  params.n = 2;
  params.s = 0.5;
  const auto basis = std::make_shared<const poisson::ExteriorBasis>(poisson::ExteriorBasis::build_rectangle(params, 4, 4));
  const auto grid = poisson::make_interior_grid(2, 0.5, 24, 4);
  const poisson::ControlProblem problem(basis, grid, 2, {4, 4});
  const auto stored = io::capture_a0(problem);
  EXPECT_EQ(stored.key(), io::a0_key(2, 0.5, {4, 4}, 24, 4));
  const auto path = scratch("a0.csv");
  io::save_a0(path, stored);
  const auto back = io::load_a0(path);
  EXPECT_EQ(back.key(), stored.key());
  ASSERT_EQ(back.blocks.size(), stored.blocks.size());
  for (std::size_t m = 0; m < stored.blocks.size(); ++m)
    EXPECT_EQ((back.blocks[m] - stored.blocks[m]).cwiseAbs().maxCoeff(), 0.0);

  // a tampered key is rejected
  auto table = io::read_csv(path);
  for (auto& [key, value] : table.metadata)
    if (key == "key") value += "x";
  io::write_csv(path, table);
  EXPECT_THROW(io::load_a0(path), ParameterError);
}
