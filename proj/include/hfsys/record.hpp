#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hfsys
{
inline constexpr int kSchemaVersion = 1;

/// One checked statement. Unasserted contracts are observations of an unguarded run.
struct Contract
{
	std::string name;
	bool passed = false;
	bool asserted = true;
	bool convergence = false;  ///< failure maps to the convergence exit code
	std::string detail;

	bool operator==(Contract const &) const = default;
};

struct RunRecord
{
	int schema_version = kSchemaVersion;
	std::string experiment;
	std::vector<std::pair<std::string, std::string>> config;
	std::string config_hash;
	bool guarded = true;
	std::vector<std::string> guard_notes;
	std::vector<std::string> deviations;
	std::map<std::string, double> constants;
	std::map<std::string, double> energies;
	std::map<std::string, double> residuals;
	std::map<std::string, double> diagnostics;
	std::map<std::string, std::string> classifications;
	std::vector<Contract> contracts;
	double wall_time = 0;

	void check(std::string name, bool passed, std::string detail = {}, bool convergence = false);
	/// All asserted contracts passed.
	bool passed() const;
	/// 0 pass, 4 a convergence contract failed, 1 another contract failed.
	int exit_code() const;

	bool operator==(RunRecord const &) const = default;
};

/// Stable key order; non-finite numbers are written as strings.
std::string to_json(RunRecord const & r);
/// Throws ConfigError on malformed input or an unknown schema version.
RunRecord record_from_json(std::string const & text);
}  // namespace hfsys
