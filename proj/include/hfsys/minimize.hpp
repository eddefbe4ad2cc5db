#pragma once

#include "hfsys/fibering.hpp"
#include "hfsys/functional.hpp"
#include "hfsys/optim.hpp"

#include <string>
#include <vector>

namespace hfsys
{
struct SolverConfig
{
	int max_iters = 4000;
	double grad_tol = 1e-6;  ///< ||J'|| relative to the sum of the gradient part norms
	double c1 = 1e-4;
	double backtrack = 0.5;
	double initial_step = 1.0;
	int memory = 8;
	bool quasi_newton = true;
	bool precondition = false;  ///< (-Lap + lambda)^{-1} as initial inverse Hessian
	bool nonneg_projection = false;
	double divergence_factor = 1e6;  ///< sentinel at -factor * initial energy scale

	/// Throws std::invalid_argument.
	void validate() const;
};

enum class Outcome
{
	converged,
	max_iters,
	stalled,  ///< line search could not decrease J
	diverged  ///< energy crossed the sentinel
};
std::string to_string(Outcome o);

struct SolverReport
{
	int iterations = 0;
	double final_grad_norm = 0;
	double relative_grad = 0;  ///< final_grad_norm / gradient scale
	std::vector<double> energy_trace;
	bool converged = false;
	Outcome outcome = Outcome::max_iters;
	double wall_time = 0;

	bool monotone() const;
};

template <class Grid>
struct DescentResult
{
	PairState<Grid> state;
	EnergyBreakdown energy;
	SolverReport report;
};

/// Armijo-backtracked descent on J from s0.
template <class Grid>
DescentResult<Grid> descend(PairState<Grid> const & s0, ProblemParams<Grid> const & P, SolverConfig const & cfg);

inline DescentResult<RadialGrid> radial_descend(
	PairRadial const & s0, ParamsRadial const & P, SolverConfig const & cfg)
{
	return descend(s0, P, cfg);
}

/// Runs descend from every seed and keeps the lowest final energy.
template <class Grid>
DescentResult<Grid> descend_multistart(
	std::vector<PairState<Grid>> const & seeds, ProblemParams<Grid> const & P, SolverConfig const & cfg);

template <class Grid>
struct NehariResult
{
	PairState<Grid> state;  ///< on the Nehari manifold
	double alpha_minus = 0;
	EnergyBreakdown energy;
	FiberingRoots roots;  ///< of the final state's ray
	NehariClass nehari_class = NehariClass::NotOnNehari;
	Filtration filtration = Filtration::outside;
	SolverReport report;
};

/// Minimises s -> J(t^-(s) s) from the seed direction. Throws RootAbsent if the seed ray has no t^-.
template <class Grid>
NehariResult<Grid> nehari_minimize(PairState<Grid> const & seed, ProblemParams<Grid> const & P, SolverConfig const & cfg);

template <class Grid>
struct QuotientDescent
{
	PairState<Grid> state;
	double value = 0;
	SolverReport report;
};

/// Descent on the nonexistence quotient from a seed with both components nonzero.
/// Converged when the gradient norm is below grad_tol (1 + |value|). Throws ZeroState.
template <class Grid>
QuotientDescent<Grid> minimize_nonexistence_quotient(
	PairState<Grid> const & seed, ProblemParams<Grid> const & P, SolverConfig const & cfg);
}  // namespace hfsys
