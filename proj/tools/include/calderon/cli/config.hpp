#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "calderon/numkit/params.hpp"

namespace calderon::cli {

struct BasisSection {
  int cap = 12;
};

struct DecaySection {
  std::vector<int> dims{1, 2};
  std::vector<double> orders{0.25, 0.5, 0.75};
  int cap = 12;
  int radial_nodes = 96;
};

struct GammaSection {
  int cap = 10;
  int mesh_elements = 256;
  double amplitude = 0.5;  // bump height as a fraction of r0 = lambda_min / 2
  double center = 0.2;
  double radius = 0.5;
  int random_matrices = 100;
  int count_p_max = 20;
};

struct InstabilitySection {
  int m = 1;
  int N = 3;
  double eps_fraction = 0.05;  // eps = eps_fraction * r0
  int cap = 8;
  int mesh_elements = 256;
  int exhaustive_bits = 12;
  int sampled_pairs = 2000;
};

struct ApproxSection {
  std::vector<int> dims{2, 3};
  int p_min = 2;
  int p_max = 8;
  int radial_nodes = 96;
  double rel_tol = 0.01;
};

struct HilbertSection {
  int target_nodes = 64;
  int source_nodes = 64;
  int count = 12;
  int sl_max = 8;
  int k_max = 8;
  std::vector<double> orders{0.25, 0.5, 0.75};
  double identity_sigma_floor = 1e-6;
};

struct HadamardSection {
  std::vector<double> orders{0.25, 0.5, 0.75};
  int n = 5;
  double x0 = 1.0;
  double y0 = 1.0;
  int n_min = 20;
  int n_max = 80;
  std::vector<int> steps{32, 64, 128, 256};
};

/// Everything a run depends on; serialized into every report.
struct RunConfig {
  ProblemParams params;
  std::string out = "results";
  unsigned threads = 1;
  std::uint64_t seed = 1;
  BasisSection basis;
  DecaySection decay;
  GammaSection gamma;
  InstabilitySection instability;
  ApproxSection approx;
  HilbertSection hilbert;
  HadamardSection hadamard;

  /// Throws ParameterError on any violated precondition.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys are a ParameterError.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

}  // namespace calderon::cli
