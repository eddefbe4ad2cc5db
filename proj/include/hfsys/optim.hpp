#pragma once

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace hfsys
{
using Vector = Eigen::VectorXd;

/// Value and gradient; the gradient is the Riesz representer for the weighted inner product.
/// Return +inf to reject a trial point.
using Objective = std::function<double(Vector const & x, Vector & grad)>;

struct LbfgsOptions
{
	int max_iters = 2000;
	int memory = 8;
	double c1 = 1e-4;
	double backtrack = 0.5;
	double initial_step = 1.0;
	int max_backtracks = 60;
	bool quasi_newton = true;  ///< false: steepest descent
	double divergence_floor = -std::numeric_limits<double>::infinity();
};

struct LbfgsHooks
{
	/// Stop when this returns true.
	std::function<bool(Vector const & x, Vector const & grad, double value)> converged;
	/// Initial inverse Hessian at the current iterate x; identity if empty.
	std::function<Vector(Vector const & x, Vector const & v)> precondition;
	/// Applied to every trial point before evaluation.
	std::function<void(Vector &)> project;
	/// Applied after an accepted step; returns true if x changed (memory is then reset).
	std::function<bool(Vector &)> after_step;
};

enum class StopReason
{
	converged,
	max_iters,
	line_search,
	diverged
};
std::string to_string(StopReason r);

struct LbfgsResult
{
	Vector x;
	double value = 0;
	double grad_norm = 0;
	int iterations = 0;
	StopReason reason = StopReason::max_iters;
	std::vector<double> trace;
};

/// Limited-memory BFGS with Armijo backtracking in the inner product sum_i w_i a_i b_i.
LbfgsResult lbfgs(Objective const & f, Vector x0, Vector const & weights, LbfgsOptions const & opt,
	LbfgsHooks const & hooks = {});
}  // namespace hfsys
