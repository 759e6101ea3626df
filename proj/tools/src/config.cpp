#include "calderon/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "calderon/numkit/errors.hpp"

namespace calderon::cli {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ParameterError(message);
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  require(j.is_object(), where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items())
    require(allowed.count(key) == 1, "unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& j, const char* key, T& target) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(target);
  } catch (const json::exception&) {
    throw ParameterError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  require(threads >= 1, "threads must be at least 1");
  require(!out.empty(), "output directory must not be empty");
  require(basis.cap >= 0, "basis.cap must be nonnegative");
  require(!decay.dims.empty() && !decay.orders.empty(), "decay needs dimensions and orders");
  for (int n : decay.dims) require(n >= 1 && n <= 3, "decay.dims entries must be 1, 2 or 3");
  for (double s : decay.orders) require(s > 0.0 && s < 1.0, "decay.orders entries must lie in (0,1)");
  require(decay.cap >= 0 && decay.radial_nodes >= 8, "decay.cap >= 0 and decay.radial_nodes >= 8 required");
  require(gamma.cap >= 1, "gamma.cap must be at least 1");
  require(gamma.mesh_elements >= 8, "gamma.mesh_elements must be at least 8");
  require(gamma.amplitude >= 0.0 && gamma.amplitude <= 0.5, "gamma.amplitude must lie in [0, 1/2] (fraction of r0)");
  require(gamma.radius > 0.0 && std::abs(gamma.center) + gamma.radius <= 1.0, "gamma bump must lie inside (-1,1)");
  require(gamma.random_matrices >= 1 && gamma.count_p_max >= 0, "gamma.random_matrices >= 1 required");
  require(instability.m >= 1 && instability.N >= 1, "instability.m and instability.N must be positive");
  require(instability.eps_fraction > 0.0 && instability.eps_fraction < 0.5, "instability.eps_fraction must lie in (0, 1/2)");
  require(instability.cap >= 1 && instability.mesh_elements >= 8, "instability.cap >= 1 and mesh >= 8 required");
  require(!approx.dims.empty(), "approx.dims must not be empty");
  for (int n : approx.dims) require(n == 2 || n == 3, "approx.dims entries must be 2 or 3");
  require(approx.p_min >= 2 && approx.p_max >= approx.p_min, "approx needs 2 <= p_min <= p_max");
  require(approx.rel_tol > 0.0 && approx.rel_tol < 1.0, "approx.rel_tol must lie in (0,1)");
  require(hilbert.target_nodes >= 32 && hilbert.source_nodes >= 32, "hilbert node counts must be at least 32");
  require(hilbert.count >= 2 && hilbert.k_max >= 1 && hilbert.sl_max >= 0, "hilbert counts must be positive");
  require(hilbert.k_max < hilbert.count, "hilbert.k_max must be below hilbert.count");
  for (double s : hilbert.orders) require(s > 0.0 && s < 1.0, "hilbert.orders entries must lie in (0,1)");
  require(!hadamard.orders.empty(), "hadamard.orders must not be empty");
  for (double s : hadamard.orders) require(s > 0.0 && s < 1.0, "hadamard.orders entries must lie in (0,1)");
  require(hadamard.n >= 1 && hadamard.y0 > 0.0, "hadamard.n >= 1 and hadamard.y0 > 0 required");
  require(hadamard.n_min >= 1 && hadamard.n_max >= hadamard.n_min, "invalid hadamard frequency range");
  require(hadamard.steps.size() >= 2, "hadamard.steps needs at least two resolutions");
}

json to_json(const RunConfig& c) {
  return {
      {"params",
       {{"n", c.params.n},
        {"s", c.params.s},
        {"quad_nodes", c.params.quad_nodes},
        {"precision_bits", c.params.precision_bits},
        {"tol_quad", c.params.tol_quad}}},
      {"out", c.out},
      {"threads", c.threads},
      {"seed", c.seed},
      {"basis", {{"cap", c.basis.cap}}},
      {"decay",
       {{"dims", c.decay.dims}, {"orders", c.decay.orders}, {"cap", c.decay.cap}, {"radial_nodes", c.decay.radial_nodes}}},
      {"gamma",
       {{"cap", c.gamma.cap},
        {"mesh_elements", c.gamma.mesh_elements},
        {"amplitude", c.gamma.amplitude},
        {"center", c.gamma.center},
        {"radius", c.gamma.radius},
        {"random_matrices", c.gamma.random_matrices},
        {"count_p_max", c.gamma.count_p_max}}},
      {"instability",
       {{"m", c.instability.m},
        {"N", c.instability.N},
        {"eps_fraction", c.instability.eps_fraction},
        {"cap", c.instability.cap},
        {"mesh_elements", c.instability.mesh_elements},
        {"exhaustive_bits", c.instability.exhaustive_bits},
        {"sampled_pairs", c.instability.sampled_pairs}}},
      {"approx",
       {{"dims", c.approx.dims},
        {"p_min", c.approx.p_min},
        {"p_max", c.approx.p_max},
        {"radial_nodes", c.approx.radial_nodes},
        {"rel_tol", c.approx.rel_tol}}},
      {"hilbert",
       {{"target_nodes", c.hilbert.target_nodes},
        {"source_nodes", c.hilbert.source_nodes},
        {"count", c.hilbert.count},
        {"sl_max", c.hilbert.sl_max},
        {"k_max", c.hilbert.k_max},
        {"orders", c.hilbert.orders},
        {"identity_sigma_floor", c.hilbert.identity_sigma_floor}}},
      {"hadamard",
       {{"orders", c.hadamard.orders},
        {"n", c.hadamard.n},
        {"x0", c.hadamard.x0},
        {"y0", c.hadamard.y0},
        {"n_min", c.hadamard.n_min},
        {"n_max", c.hadamard.n_max},
        {"steps", c.hadamard.steps}}},
  };
}

RunConfig config_from_json(const json& doc) {
  RunConfig c;
  check_keys(doc, "config",
             {"params", "out", "threads", "seed", "basis", "decay", "gamma", "instability", "approx", "hilbert", "hadamard"});
  if (doc.contains("params")) {
    const auto& j = doc["params"];
    check_keys(j, "params", {"n", "s", "quad_nodes", "precision_bits", "tol_quad"});
    read(j, "n", c.params.n);
    read(j, "s", c.params.s);
    read(j, "quad_nodes", c.params.quad_nodes);
    read(j, "precision_bits", c.params.precision_bits);
    read(j, "tol_quad", c.params.tol_quad);
  }
  read(doc, "out", c.out);
  read(doc, "threads", c.threads);
  read(doc, "seed", c.seed);
  if (doc.contains("basis")) {
    check_keys(doc["basis"], "basis", {"cap"});
    read(doc["basis"], "cap", c.basis.cap);
  }
  if (doc.contains("decay")) {
    const auto& j = doc["decay"];
    check_keys(j, "decay", {"dims", "orders", "cap", "radial_nodes"});
    read(j, "dims", c.decay.dims);
    read(j, "orders", c.decay.orders);
    read(j, "cap", c.decay.cap);
    read(j, "radial_nodes", c.decay.radial_nodes);
  }
  if (doc.contains("gamma")) {
    const auto& j = doc["gamma"];
    check_keys(j, "gamma", {"cap", "mesh_elements", "amplitude", "center", "radius", "random_matrices", "count_p_max"});
    read(j, "cap", c.gamma.cap);
    read(j, "mesh_elements", c.gamma.mesh_elements);
    read(j, "amplitude", c.gamma.amplitude);
    read(j, "center", c.gamma.center);
    read(j, "radius", c.gamma.radius);
    read(j, "random_matrices", c.gamma.random_matrices);
    read(j, "count_p_max", c.gamma.count_p_max);
  }
  if (doc.contains("instability")) {
    const auto& j = doc["instability"];
    check_keys(j, "instability", {"m", "N", "eps_fraction", "cap", "mesh_elements", "exhaustive_bits", "sampled_pairs"});
    read(j, "m", c.instability.m);
    read(j, "N", c.instability.N);
    read(j, "eps_fraction", c.instability.eps_fraction);
    read(j, "cap", c.instability.cap);
    read(j, "mesh_elements", c.instability.mesh_elements);
    read(j, "exhaustive_bits", c.instability.exhaustive_bits);
    read(j, "sampled_pairs", c.instability.sampled_pairs);
  }
  if (doc.contains("approx")) {
    const auto& j = doc["approx"];
    check_keys(j, "approx", {"dims", "p_min", "p_max", "radial_nodes", "rel_tol"});
    read(j, "dims", c.approx.dims);
    read(j, "p_min", c.approx.p_min);
    read(j, "p_max", c.approx.p_max);
    read(j, "radial_nodes", c.approx.radial_nodes);
    read(j, "rel_tol", c.approx.rel_tol);
  }
  if (doc.contains("hilbert")) {
    const auto& j = doc["hilbert"];
    check_keys(j, "hilbert", {"target_nodes", "source_nodes", "count", "sl_max", "k_max", "orders",
                                  "identity_sigma_floor"});
    read(j, "target_nodes", c.hilbert.target_nodes);
    read(j, "source_nodes", c.hilbert.source_nodes);
    read(j, "count", c.hilbert.count);
    read(j, "sl_max", c.hilbert.sl_max);
    read(j, "k_max", c.hilbert.k_max);
    read(j, "orders", c.hilbert.orders);
    read(j, "identity_sigma_floor", c.hilbert.identity_sigma_floor);
  }
  if (doc.contains("hadamard")) {
    const auto& j = doc["hadamard"];
    check_keys(j, "hadamard", {"orders", "n", "x0", "y0", "n_min", "n_max", "steps"});
    read(j, "orders", c.hadamard.orders);
    read(j, "n", c.hadamard.n);
    read(j, "x0", c.hadamard.x0);
    read(j, "y0", c.hadamard.y0);
    read(j, "n_min", c.hadamard.n_min);
    read(j, "n_max", c.hadamard.n_max);
    read(j, "steps", c.hadamard.steps);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParameterError("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

}  // namespace calderon::cli
