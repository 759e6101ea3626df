#pragma once

#include <string>
#include <vector>

#include "calderon/cli/config.hpp"
#include "calderon/cli/report.hpp"
#include "calderon/numkit/parallel.hpp"

namespace calderon::cli {

/// Decay table, Gram and moment diagnostics for params.n, params.s and basis.cap.
Report cmd_basis(const RunConfig& config, const numkit::WorkerPool& pool);
/// Decay bounds and slopes over decay.dims x decay.orders.
Report cmd_decay(const RunConfig& config, const numkit::WorkerPool& pool);
/// Gamma(q) for a bump at two mesh sizes, the norm chain and the tuple counts.
Report cmd_gamma(const RunConfig& config, const numkit::WorkerPool& pool);
/// Closest-image pair over the bump family.
Report cmd_instability(const RunConfig& config, const numkit::WorkerPool& pool);
/// Minimal-norm control growth in p.
Report cmd_approx(const RunConfig& config, const numkit::WorkerPool& pool);
/// Truncated Hilbert transform SVD and its identities.
Report cmd_hilbert(const RunConfig& config, const numkit::WorkerPool& pool);
/// Extension example: residual order, flux limit and growth.
Report cmd_hadamard(const RunConfig& config, const numkit::WorkerPool& pool);

const std::vector<std::string>& command_names();

/// Validates the config, runs one command (or every command for "all") and
/// fills in the config echo and wall clock.
std::vector<Report> run_command(const std::string& name, const RunConfig& config);

}  // namespace calderon::cli
