#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "calderon/cli/commands.hpp"
#include "calderon/cli/config.hpp"
#include "calderon/numkit/errors.hpp"

namespace {

enum ExitCode { kPass = 0, kCheckFailed = 1, kParameter = 2, kFailure = 3 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale experiments on the fractional Calderon problem"};
  app.require_subcommand(1, 1);

  std::optional<std::string> config_path;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  std::optional<int> precision;
  std::optional<int> dimension;
  std::optional<double> order;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--seed", seed, "seed for randomized sampling");
  app.add_option("--precision", precision, "mantissa bits for orthogonalization");
  app.add_option("--n", dimension, "spatial dimension");
  app.add_option("--s", order, "fractional order");
  app.add_flag("--quiet", quiet, "print only the final verdict");

  for (const auto& name : calderon::cli::command_names()) app.add_subcommand(name, "run the " + name + " experiment");
  app.add_subcommand("all", "run every experiment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kParameter;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    calderon::cli::RunConfig config;
    if (config_path) config = calderon::cli::load_config(*config_path);
    if (out) config.out = *out;
    if (threads) config.threads = *threads;
    if (seed) config.seed = *seed;
    if (precision) config.params.precision_bits = *precision;
    if (dimension) config.params.n = *dimension;
    if (order) config.params.s = *order;

    bool passed = true;
    for (const auto& report : calderon::cli::run_command(command, config)) {
      report.write(config.out);
      if (!quiet) std::cout << report.summary();
      passed = passed && report.passed();
    }
    std::cout << (passed ? "all checks passed" : "some checks failed") << '\n';
    return passed ? kPass : kCheckFailed;
  } catch (const calderon::ParameterError& e) {
    std::cerr << "calderon " << command << ": parameter error: " << e.what() << '\n';
    return kParameter;
  } catch (const calderon::Error& e) {
    std::cerr << "calderon " << command << ": " << e.kind() << " error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "calderon " << command << ": " << e.what() << '\n';
    return kFailure;
  }
}
