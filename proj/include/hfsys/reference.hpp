#pragma once

#include "hfsys/functional.hpp"

#include <string>
#include <utility>

namespace hfsys
{
/// Radial default used by the reference solvers.
inline RadialGrid default_radial_grid()
{
	return RadialGrid::make(4000, 40.0);
}

/// Positive radial solution of -Lap w + lambda w = c |w|^{p-2} w.
struct ScalarGroundState
{
	RadialField w;
	double lambda = 0;
	double c = 0;
	double energy = 0;  ///< (1/2)||w||_lambda^2 - (c/p) int |w|^p
	double norm_sq = 0;  ///< ||w||_lambda^2
	double nehari_res = 0;  ///< relative
	double pohozaev_res = 0;  ///< relative
	double residual = 0;  ///< ||L w - c|w|^{p-2}w|| / ||L w||
	int iterations = 0;
};

/// Fixed-point iteration w <- (-Lap + lambda)^{-1}(c |w|^{p-2} w), rescaled onto the Nehari set
/// each sweep. Throws NoConvergence.
ScalarGroundState solve_scalar_ground(double lambda, double c, double p, RadialGrid const & g,
	double tol = 1e-10, int max_sweeps = 5000);

/// Same with a caller-chosen initial profile.
ScalarGroundState solve_scalar_ground(double lambda, double c, double p, RadialField const & seed,
	double tol = 1e-10, int max_sweeps = 5000);

struct SobolevConstant
{
	double S = 0;
	double S_coarse = 0;  ///< same on a grid with twice the spacing
	double delta() const { return std::abs(S - S_coarse); }
};

/// S = ||w||_lambda / |w|_p at the c = 1 ground state.
SobolevConstant sobolev_constant(double lambda, double p, RadialGrid const & g);

/// Quotient of the constant-coefficient functional split by beta:
/// [ (1/2)||.||_theta^2 + (k^2/4) int phi q - (1/p) int |u|^p + |v|^p ] / [ (2/p) int |u|^{p/2}|v|^{p/2} ].
double quotient_Lambda(PairRadial const & s, double theta, double k, double p);

struct QuotientMinimizer
{
	PairRadial pair;
	double Lambda = 0;
	double lower_bound = 0;
	std::vector<double> start_values;  ///< best value reached from each seed
	/// A start ran below -1e6 with one component collapsing; Lambda is then -inf.
	/// Happens when the scalar part of the numerator can be negative (small theta k).
	bool unbounded = false;
};

/// Multistart L-BFGS on log-amplitudes. Throws std::invalid_argument outside 2 < p < 3.
QuotientMinimizer minimize_quotient_Lambda(double theta, double k, double p, RadialGrid const & g);

/// Radial grid sized for the quotient minimisation.
inline RadialGrid quotient_grid()
{
	return RadialGrid::make(800, 40.0);
}

/// inf over radial z of J(z, 0); returns the zero field when nothing negative is found.
std::pair<RadialField, double> minimize_I0(ParamsRadial const & P);

/// max_{r >= 5 dr} r |f(r)| / ||f||_{H^1}.
double strauss_diagnostic(RadialField const & f);

/// Profile as CSV rows "r,value".
std::string profile_csv(RadialField const & f);
}  // namespace hfsys
