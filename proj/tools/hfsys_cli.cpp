#include "hfsys/config.hpp"
#include "hfsys/errors.hpp"
#include "hfsys/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

using namespace hfsys;

namespace
{
constexpr int exit_config = 2;
constexpr int exit_guard = 3;

struct Common
{
	std::string config;
	std::optional<std::uint64_t> seed;
	bool strict = false;
	std::string out;
};

void add_common(CLI::App * cmd, Common & c)
{
	cmd->add_option("--config", c.config, "key = value config file");
	cmd->add_option("--seed", c.seed, "RNG seed (overrides the config)");
	cmd->add_flag("--strict", c.strict, "guard failures abort with exit code 3");
	cmd->add_option("--out", c.out, "output directory (overrides the config)");
}

ExperimentConfig resolve(Common const & c, std::string const & experiment)
{
	ExperimentConfig cfg;
	if (!c.config.empty())
		cfg = load_config(c.config);
	if (!experiment.empty())
		cfg.experiment = experiment;
	if (cfg.experiment.empty())
		throw ConfigError("no experiment given");
	if (c.seed)
		cfg.seed = *c.seed;
	if (c.strict)
		cfg.strict = true;
	if (!c.out.empty())
		cfg.out = c.out;
	return cfg;
}

void summarize(RunRecord const & r, std::ostream & os)
{
	os << r.experiment << " [" << r.config_hash << "]" << (r.guarded ? "" : " unguarded") << '\n';
	for (auto const & n : r.guard_notes)
		os << "  guard " << n << '\n';
	for (auto const & c : r.contracts)
	{
		os << "  " << (c.passed ? "PASS" : c.asserted ? "FAIL" : "obs ") << "  " << c.name;
		if (!c.detail.empty())
			os << "  (" << c.detail << ')';
		os << '\n';
	}
	os << "  wall time " << r.wall_time << " s\n";
}

int run_one(ExperimentConfig const & cfg)
{
	auto const out = run_experiment(cfg);
	write_outputs(out, cfg.out);
	summarize(out.record, std::cout);
	std::cout << "record written to " << (std::filesystem::path(cfg.out) / "record.json").string() << '\n';
	return out.record.exit_code();
}

int run_sweep_cmd(ExperimentConfig const & cfg, int threads)
{
	if (cfg.sweep.empty())
		throw ConfigError("sweep: the config has no sweep.* keys");
	auto const runs = run_sweep(cfg, threads);
	std::filesystem::create_directories(cfg.out);
	int code = 0;
	for (std::size_t i = 0; i < runs.size(); ++i)
	{
		write_outputs(runs[i], (std::filesystem::path(cfg.out) / ("point_" + std::to_string(i))).string());
		summarize(runs[i].record, std::cout);
		code = std::max(code, runs[i].record.exit_code());
	}
	std::ofstream(std::filesystem::path(cfg.out) / "sweep.csv") << sweep_csv(runs);
	std::cout << "sweep table written to " << (std::filesystem::path(cfg.out) / "sweep.csv").string() << '\n';
	return code;
}
}  // namespace

int main(int argc, char ** argv)
{
	CLI::App app{"Coupled Hartree-Fock-type system: experiments and audits"};
	app.require_subcommand(1);

	Common c_constants, c_audit, c_run, c_sweep;
	auto * constants = app.add_subcommand("constants", "closed-form constants with their scan oracles");
	add_common(constants, c_constants);
	auto * audit = app.add_subcommand("audit", "gradient, fibering and Coulomb identity audit");
	add_common(audit, c_audit);
	auto * run = app.add_subcommand("run", "run one named experiment");
	std::string experiment;
	run->add_option("experiment", experiment, "experiment name")->required();
	add_common(run, c_run);
	auto * sweep = app.add_subcommand("sweep", "cartesian sweep over sweep.p / sweep.beta / sweep.eps");
	int threads = 0;
	sweep->add_option("--threads", threads, "worker threads (0: hardware concurrency)");
	add_common(sweep, c_sweep);
	app.add_subcommand("list", "list experiment names")->callback([] {
		for (auto const & n : experiment_names())
			std::cout << n << '\n';
	});

	try
	{
		app.parse(argc, argv);
	}
	catch (CLI::ParseError const & e)
	{
		int const code = app.exit(e);
		return code == 0 ? 0 : exit_config;
	}

	try
	{
		if (constants->parsed())
			return run_one(resolve(c_constants, "constants"));
		if (audit->parsed())
			return run_one(resolve(c_audit, "audit"));
		if (run->parsed())
			return run_one(resolve(c_run, experiment));
		if (sweep->parsed())
			return run_sweep_cmd(resolve(c_sweep, ""), threads);
		return 0;
	}
	catch (ConfigError const & e)
	{
		std::cerr << "config error: " << e.what() << '\n';
		return exit_config;
	}
	catch (GuardViolation const & e)
	{
		std::cerr << "guard violation: " << e.what() << '\n';
		return exit_guard;
	}
	catch (NoConvergence const & e)
	{
		std::cerr << "no convergence: " << e.what() << '\n';
		return 4;
	}
	catch (std::exception const & e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
}
