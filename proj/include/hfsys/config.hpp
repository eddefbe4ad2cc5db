#pragma once

#include "hfsys/constructions.hpp"
#include "hfsys/minimize.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hfsys
{
/// Flat key = value experiment description. See README for the key list.
struct ExperimentConfig
{
	std::string experiment;
	double p = 2.5;
	double beta = 1.0;
	double eps = 1.0;  ///< potentials evaluated at eps x
	RadialProfile V = constant_profile(1.0);
	RadialProfile rho = constant_profile(1.0);

	int n = 32;  ///< cube points per axis
	double L = 8;  ///< cube half-width
	int m = 1000;  ///< radial points
	double R = 40;  ///< radial extent

	SolverConfig solver;
	std::uint64_t seed = 1;
	std::string out = "out";
	bool strict = false;

	int samples = 1000;  ///< random pairs
	int descents = 10;  ///< adversarial runs
	int cases = 50;  ///< finite-difference cases
	int N_max = 4;  ///< largest bump count
	double spacing = 12;
	double R0 = 5;  ///< bump support radius
	double lambda0 = 1;  ///< (theta, k) of the Lambda quotient
	double k0 = 0.1;
	double x0 = 0;  ///< |x0| of the well point, unscaled, along e_x

	/// Swept key -> values (keys: p, beta, eps).
	std::map<std::string, std::vector<double>> sweep;

	/// Every key with its canonical value, in a fixed order.
	std::vector<std::pair<std::string, std::string>> echo() const;
	Potentials potentials() const;
};

/// Throws ConfigError on unknown keys, duplicates, malformed values.
ExperimentConfig parse_config(std::string const & text);
ExperimentConfig load_config(std::string const & path);

/// Sets a single key; repeated V.well / rho.well keys append.
void apply_setting(ExperimentConfig & cfg, std::string const & key, std::string const & value);

/// FNV-1a of the echo, as 16 hex digits.
std::string config_hash(ExperimentConfig const & cfg);
}  // namespace hfsys
