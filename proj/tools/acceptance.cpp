#include "hfsys/config.hpp"
#include "hfsys/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#ifndef HFSYS_CONFIG_DIR
#define HFSYS_CONFIG_DIR "configs"
#endif

using namespace hfsys;

namespace
{
struct Criterion
{
	int id;
	char const * title;
	char const * config;
	double budget;  ///< seconds
};

Criterion const criteria[] = {
	{1, "constants web", "constants.cfg", 1},
	{2, "Coulomb solver oracles", "coulomb.cfg", 30},
	{3, "gradient audit", "gradient.cfg", 120},
	{4, "fibering and Nehari roots", "fibering.cfg", 10},
	{5, "scalar reference ground state", "scalar.cfg", 30},
	{6, "nonexistence certificate", "nonexistence.cfg", 300},
	{7, "coercive vectorial ground state", "coercive.cfg", 600},
	{8, "multibump divergence", "multibump.cfg", 300},
	{9, "Nehari ground state and classification", "nehari.cfg", 900},
	{10, "limit comparison", "limit.cfg", 1200},
	{11, "symmetry breaking", "symmetry.cfg", 1800},
	{12, "inequality suite", "inequalities.cfg", 300},
};
}  // namespace

int main(int argc, char ** argv)
{
	CLI::App app{"Acceptance criteria, one line each"};
	std::string dir = HFSYS_CONFIG_DIR;
	std::string out;
	std::vector<int> only;
	app.add_option("--configs", dir, "directory with the criterion configs");
	app.add_option("--out", out, "write each record under this directory");
	app.add_option("criteria", only, "subset of criterion numbers");
	CLI11_PARSE(app, argc, argv);
	std::set<int> const selected(only.begin(), only.end());

	int failed = 0;
	for (auto const & c : criteria)
	{
		if (!selected.empty() && !selected.count(c.id))
			continue;
		std::string verdict, detail;
		try
		{
			auto cfg = load_config((std::filesystem::path(dir) / c.config).string());
			cfg.strict = true;
			auto const res = run_experiment(cfg);
			if (!out.empty())
				write_outputs(res, (std::filesystem::path(out) / ("criterion_" + std::to_string(c.id))).string());
			auto const & r = res.record;
			int bad = 0;
			for (auto const & k : r.contracts)
				if (!k.passed)
				{
					++bad;
					detail += (detail.empty() ? "" : "; ") + k.name;
				}
			bool const in_time = r.wall_time < c.budget;
			if (!in_time)
				detail += (detail.empty() ? "" : "; ") + std::string("over the runtime budget");
			verdict = bad == 0 && r.guarded && in_time ? "PASS" : "FAIL";
			char buf[96];
			std::snprintf(buf, sizeof buf, "%zu contracts, %.2f s of %.0f s", r.contracts.size(), r.wall_time, c.budget);
			detail = detail.empty() ? buf : std::string(buf) + "; failed: " + detail;
		}
		catch (std::exception const & e)
		{
			verdict = "FAIL";
			detail = e.what();
		}
		failed += verdict != "PASS";
		std::cout << "criterion " << c.id << " " << verdict << "  " << c.title << "  (" << detail << ")" << std::endl;
	}
	return failed == 0 ? 0 : 1;
}
