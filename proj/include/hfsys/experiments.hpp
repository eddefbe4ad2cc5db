#pragma once

#include "hfsys/config.hpp"
#include "hfsys/record.hpp"

#include <map>
#include <string>
#include <vector>

namespace hfsys
{
struct RunOutput
{
	RunRecord record;
	std::map<std::string, std::string> files;  ///< extra outputs (profile CSVs) by file name
};

/// constants, coulomb, gradient, fibering, scalar, inequalities, audit, nonexistence,
/// coercive, multibump, nehari, limit, symmetry.
std::vector<std::string> experiment_names();

/// Runs the named pipeline. Throws ConfigError for an unknown experiment and GuardViolation
/// when cfg.strict is set and a guard of the experiment fails.
RunOutput run_experiment(ExperimentConfig const & cfg);

/// Writes record.json and the extra files into dir (created if missing).
void write_outputs(RunOutput const & out, std::string const & dir);

/// One run per point of the cartesian product of cfg.sweep, in a worker pool
/// (threads = 0: hardware concurrency). Results keep the point order.
std::vector<RunOutput> run_sweep(ExperimentConfig const & cfg, int threads = 0);

/// Columns: p, beta, eps, alpha, alpha_minus, delta, classifications, passed, exit_code.
std::string sweep_csv(std::vector<RunOutput> const & runs);
}  // namespace hfsys
