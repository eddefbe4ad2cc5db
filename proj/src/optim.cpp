#include "hfsys/optim.hpp"

#include <cmath>
#include <deque>

namespace hfsys
{
std::string to_string(StopReason r)
{
	switch (r)
	{
	case StopReason::converged:
		return "converged";
	case StopReason::max_iters:
		return "max_iters";
	case StopReason::line_search:
		return "line_search";
	case StopReason::diverged:
		return "diverged";
	}
	return "unknown";
}

LbfgsResult lbfgs(Objective const & f, Vector x0, Vector const & weights, LbfgsOptions const & opt,
	LbfgsHooks const & hooks)
{
	auto dot = [&](Vector const & a, Vector const & b) { return (weights.array() * a.array() * b.array()).sum(); };

	struct Pair
	{
		Vector s, y;
		double rho;
	};
	std::deque<Pair> memory;

	LbfgsResult res;
	res.x = std::move(x0);
	if (hooks.project)
		hooks.project(res.x);
	Vector g(res.x.size());
	res.value = f(res.x, g);
	res.trace.push_back(res.value);
	double step_scale = opt.initial_step;

	for (res.iterations = 0; res.iterations < opt.max_iters; ++res.iterations)
	{
		res.grad_norm = std::sqrt(dot(g, g));
		if (hooks.converged && hooks.converged(res.x, g, res.value))
		{
			res.reason = StopReason::converged;
			return res;
		}
		if (res.value < opt.divergence_floor)
		{
			res.reason = StopReason::diverged;
			return res;
		}

		// Two-loop recursion.
		Vector q = g;
		std::vector<double> alpha(memory.size());
		for (std::size_t i = memory.size(); i-- > 0;)
		{
			alpha[i] = memory[i].rho * dot(memory[i].s, q);
			q -= alpha[i] * memory[i].y;
		}
		Vector d = hooks.precondition ? hooks.precondition(res.x, q) : q;
		if (!memory.empty())
		{
			auto const & last = memory.back();
			Vector const Hy = hooks.precondition ? hooks.precondition(res.x, last.y) : last.y;
			d *= dot(last.s, last.y) / dot(last.y, Hy);
		}
		for (std::size_t i = 0; i < memory.size(); ++i)
		{
			double const b = memory[i].rho * dot(memory[i].y, d);
			d += (alpha[i] - b) * memory[i].s;
		}
		d = -d;

		double slope = dot(g, d);
		if (!(slope < 0))
		{
			memory.clear();
			d = hooks.precondition ? Vector(-hooks.precondition(res.x, g)) : Vector(-g);
			slope = dot(g, d);
		}
		double step = memory.empty() ? step_scale : 1.0;

		Vector trial(res.x.size()), g_trial(res.x.size());
		double f_trial = 0;
		bool accepted = false;
		for (int bt = 0; bt < opt.max_backtracks; ++bt)
		{
			trial = res.x + step * d;
			if (hooks.project)
				hooks.project(trial);
			f_trial = f(trial, g_trial);
			double const decrease = hooks.project ? opt.c1 * dot(g, trial - res.x) : opt.c1 * step * slope;
			if (std::isfinite(f_trial) && f_trial <= res.value + decrease)
			{
				accepted = true;
				break;
			}
			step *= opt.backtrack;
		}
		if (!accepted)
		{
			if (!memory.empty())
			{
				memory.clear();
				continue;
			}
			res.reason = StopReason::line_search;
			return res;
		}
		if (memory.empty())
			step_scale = step / opt.backtrack;

		Vector s = trial - res.x;
		Vector y = g_trial - g;
		res.x = std::move(trial);
		g = std::move(g_trial);
		res.value = f_trial;

		if (hooks.after_step && hooks.after_step(res.x))
		{
			memory.clear();
			res.value = f(res.x, g);
		}
		else if (opt.quasi_newton && !hooks.project)
		{
			double const sy = dot(s, y);
			if (sy > 1e-14 * std::sqrt(dot(s, s) * dot(y, y)))
			{
				memory.push_back({std::move(s), std::move(y), 1 / sy});
				if (int(memory.size()) > opt.memory)
					memory.pop_front();
			}
		}
		res.trace.push_back(res.value);
	}
	res.grad_norm = std::sqrt(dot(g, g));
	if (hooks.converged && hooks.converged(res.x, g, res.value))
		res.reason = StopReason::converged;
	return res;
}
}  // namespace hfsys
