#include "hfsys/minimize.hpp"

#include "hfsys/errors.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace hfsys
{
void SolverConfig::validate() const
{
	if (max_iters < 0)
		throw std::invalid_argument("SolverConfig: max_iters must be nonnegative");
	if (!(grad_tol > 0))
		throw std::invalid_argument("SolverConfig: grad_tol must be positive");
	if (!(c1 > 0 && c1 < 1) || !(backtrack > 0 && backtrack < 1) || !(initial_step > 0))
		throw std::invalid_argument("SolverConfig: invalid Armijo parameters");
	if (memory < 1)
		throw std::invalid_argument("SolverConfig: memory must be >= 1");
	if (!(divergence_factor > 0))
		throw std::invalid_argument("SolverConfig: divergence_factor must be positive");
}

std::string to_string(Outcome o)
{
	switch (o)
	{
	case Outcome::converged:
		return "converged";
	case Outcome::max_iters:
		return "max_iters";
	case Outcome::stalled:
		return "stalled";
	case Outcome::diverged:
		return "diverged";
	}
	return "unknown";
}

bool SolverReport::monotone() const
{
	for (std::size_t i = 1; i < energy_trace.size(); ++i)
		if (energy_trace[i] > energy_trace[i - 1])
			return false;
	return true;
}

namespace
{
Array quadrature_weights(GridSpec const & g)
{
	return Array::Constant(g.size(), g.cell_volume());
}

Array quadrature_weights(RadialGrid const & g)
{
	return g.weights();
}

template <class Grid>
Vector pack(PairState<Grid> const & s)
{
	Vector x(2 * s.u.values.size());
	x << s.u.values.matrix(), s.v.values.matrix();
	return x;
}

template <class Grid>
PairState<Grid> unpack(Grid const & g, Vector const & x)
{
	Index const m = x.size() / 2;
	return {{g, x.head(m).array()}, {g, x.tail(m).array()}};
}

Outcome outcome_of(StopReason r)
{
	switch (r)
	{
	case StopReason::converged:
		return Outcome::converged;
	case StopReason::max_iters:
		return Outcome::max_iters;
	case StopReason::line_search:
		return Outcome::stalled;
	case StopReason::diverged:
		return Outcome::diverged;
	}
	return Outcome::max_iters;
}

LbfgsOptions options_of(SolverConfig const & cfg)
{
	cfg.validate();
	LbfgsOptions opt;
	opt.max_iters = cfg.max_iters;
	opt.memory = cfg.memory;
	opt.c1 = cfg.c1;
	opt.backtrack = cfg.backtrack;
	opt.initial_step = cfg.initial_step;
	opt.quasi_newton = cfg.quasi_newton;
	return opt;
}

template <class Grid>
void add_shared_hooks(LbfgsHooks & hooks, Grid const & g, ProblemParams<Grid> const & P, SolverConfig const & cfg)
{
	if (cfg.precondition)
		hooks.precondition = [&g, &P](Vector const &, Vector const & v) {
			Index const m = v.size() / 2;
			Vector out(v.size());
			out.head(m) = shifted_inverse_laplacian(g, v.head(m).array(), P.lambda).matrix();
			out.tail(m) = shifted_inverse_laplacian(g, v.tail(m).array(), P.lambda).matrix();
			return out;
		};
	if (cfg.nonneg_projection)
		hooks.project = [](Vector & x) { x = x.cwiseMax(0.0); };
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
	return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

template <class Grid>
DescentResult<Grid> descend(PairState<Grid> const & s0, ProblemParams<Grid> const & P, SolverConfig const & cfg)
{
	auto const t0 = std::chrono::steady_clock::now();
	Grid const & g = s0.grid();
	LbfgsOptions opt = options_of(cfg);
	Array const w = quadrature_weights(g);
	Vector weights(2 * w.size());
	weights << w.matrix(), w.matrix();

	// Gradient scale of the last evaluated point.
	struct Cache
	{
		Vector x;
		double scale = 0;
	};
	Cache cache;

	Objective f = [&](Vector const & x, Vector & grad) {
		auto const parts = variation_parts(unpack(g, x), P);
		grad = pack(parts.gradient());
		cache = {x, parts.scale()};
		return parts.energy.total;
	};
	auto scale_at = [&](Vector const & x) {
		if (cache.x.size() != x.size() || cache.x != x)
		{
			Vector scratch;
			f(x, scratch);
		}
		return cache.scale;
	};

	double const initial_scale = energy(s0, P).scale();
	if (initial_scale > 0)
		opt.divergence_floor = -cfg.divergence_factor * initial_scale;

	LbfgsHooks hooks;
	hooks.converged = [&](Vector const & x, Vector const & grad, double) {
		double const gn = std::sqrt((weights.array() * grad.array().square()).sum());
		return gn <= cfg.grad_tol * scale_at(x);
	};
	add_shared_hooks(hooks, g, P, cfg);

	auto const res = lbfgs(f, pack(s0), weights, opt, hooks);

	DescentResult<Grid> out;
	out.state = unpack(g, res.x);
	out.energy = energy(out.state, P);
	SolverReport & r = out.report;
	r.iterations = res.iterations;
	r.final_grad_norm = res.grad_norm;
	double const sc = scale_at(res.x);
	r.relative_grad = sc > 0 ? res.grad_norm / sc : 0.0;
	r.energy_trace = res.trace;
	r.outcome = outcome_of(res.reason);
	r.converged = r.outcome == Outcome::converged;
	r.wall_time = seconds_since(t0);
	return out;
}

template DescentResult<GridSpec> descend(Pair3D const &, Params3D const &, SolverConfig const &);
template DescentResult<RadialGrid> descend(PairRadial const &, ParamsRadial const &, SolverConfig const &);

template <class Grid>
DescentResult<Grid> descend_multistart(
	std::vector<PairState<Grid>> const & seeds, ProblemParams<Grid> const & P, SolverConfig const & cfg)
{
	if (seeds.empty())
		throw std::invalid_argument("descend_multistart: no seeds");
	std::optional<DescentResult<Grid>> best;
	for (auto const & s : seeds)
	{
		auto r = descend(s, P, cfg);
		if (!best || r.energy.total < best->energy.total)
			best = std::move(r);
	}
	return *best;
}

template DescentResult<GridSpec> descend_multistart(std::vector<Pair3D> const &, Params3D const &, SolverConfig const &);
template DescentResult<RadialGrid> descend_multistart(
	std::vector<PairRadial> const &, ParamsRadial const &, SolverConfig const &);

template <class Grid>
NehariResult<Grid> nehari_minimize(PairState<Grid> const & seed, ProblemParams<Grid> const & P, SolverConfig const & cfg)
{
	auto const t0 = std::chrono::steady_clock::now();
	Grid const & g = seed.grid();
	double const p = P.p;
	LbfgsOptions const opt = options_of(cfg);
	Array const w = quadrature_weights(g);
	Vector weights(2 * w.size());
	weights << w.matrix(), w.matrix();
	double constexpr inf = std::numeric_limits<double>::infinity();

	// t^- and the gradient scale at t^- s for the last evaluated direction.
	struct Cache
	{
		Vector x;
		double t = 0;
		double scale = 0;
	};
	Cache cache;

	Objective f = [&](Vector const & x, Vector & grad) {
		auto const s = unpack(g, x);
		auto const parts = variation_parts(s, P);
		auto const c = coefficients(parts.energy, p);
		if (!(c.A > 0) || !(c.C > 0))
			return inf;
		auto const roots = find_roots(c, p);
		if (!roots.t_minus || roots.degenerate)
			return inf;
		double const t = *roots.t_minus;
		grad = t * pack(parts.gradient_at_scale(t));
		cache = {x, t,
			t * l2_norm(parts.linear) + t * t * t * l2_norm(parts.coulomb)
				+ std::pow(t, p - 1) * l2_norm(parts.nonlinear)};
		return c.phi(t, p);
	};
	auto refresh = [&](Vector const & x) {
		if (cache.x.size() != x.size() || cache.x != x)
		{
			Vector scratch(x.size());
			f(x, scratch);
		}
	};

	Vector x0 = pack(seed);
	{
		Vector scratch(x0.size());
		if (!std::isfinite(f(x0, scratch)))
			throw RootAbsent("nehari_minimize: the seed ray has no t^- root");
		x0 *= cache.t;
	}

	LbfgsHooks hooks;
	hooks.converged = [&](Vector const & x, Vector const & grad, double) {
		refresh(x);
		double const gn = std::sqrt((weights.array() * grad.array().square()).sum()) / cache.t;
		return gn <= cfg.grad_tol * cache.scale;
	};
	// J(t s) is 0-homogeneous in s; keep the iterate near the manifold.
	hooks.after_step = [&](Vector & x) {
		refresh(x);
		if (cache.t > 0.5 && cache.t < 2)
			return false;
		x *= cache.t;
		return true;
	};
	add_shared_hooks(hooks, g, P, cfg);

	auto const res = lbfgs(f, x0, weights, opt, hooks);
	refresh(res.x);

	NehariResult<Grid> out;
	out.state = unpack(g, cache.t * res.x);
	out.energy = energy(out.state, P);
	out.alpha_minus = out.energy.total;
	auto const c = coefficients(out.energy, p);
	out.roots = find_roots(c, p);
	out.nehari_class = classify(c, p, 1e-6);
	try
	{
		out.filtration = filtration_member(c, out.energy.total, p, P.lambda, P.rho_max, 1e-6);
	}
	catch (std::invalid_argument const &)
	{
		out.filtration = Filtration::outside;
	}
	SolverReport & r = out.report;
	r.iterations = res.iterations;
	r.final_grad_norm = res.grad_norm / cache.t;
	r.relative_grad = cache.scale > 0 ? r.final_grad_norm / cache.scale : 0.0;
	r.energy_trace = res.trace;
	r.outcome = outcome_of(res.reason);
	r.converged = r.outcome == Outcome::converged;
	r.wall_time = seconds_since(t0);
	return out;
}

template NehariResult<GridSpec> nehari_minimize(Pair3D const &, Params3D const &, SolverConfig const &);
template NehariResult<RadialGrid> nehari_minimize(PairRadial const &, ParamsRadial const &, SolverConfig const &);

template <class Grid>
QuotientDescent<Grid> minimize_nonexistence_quotient(
	PairState<Grid> const & seed, ProblemParams<Grid> const & P, SolverConfig const & cfg)
{
	auto const t0 = std::chrono::steady_clock::now();
	Grid const & g = seed.grid();
	LbfgsOptions const opt = options_of(cfg);
	Array const w = quadrature_weights(g);
	Vector weights(2 * w.size());
	weights << w.matrix(), w.matrix();

	Objective f = [&](Vector const & x, Vector & grad) {
		auto const q = nonexistence_quotient(unpack(g, x), P);
		if (std::isfinite(q.value))
			grad = pack(q.gradient);
		return q.value;
	};
	Vector const x0 = pack(seed);
	{
		Vector scratch(x0.size());
		if (!std::isfinite(f(x0, scratch)))
			throw ZeroState("minimize_nonexistence_quotient: the seed has a vanishing cross term");
	}

	LbfgsHooks hooks;
	hooks.converged = [&](Vector const &, Vector const & grad, double value) {
		return std::sqrt((weights.array() * grad.array().square()).sum()) <= cfg.grad_tol * (1 + std::abs(value));
	};
	add_shared_hooks(hooks, g, P, cfg);

	auto const res = lbfgs(f, x0, weights, opt, hooks);

	QuotientDescent<Grid> out;
	out.state = unpack(g, res.x);
	out.value = res.value;
	SolverReport & r = out.report;
	r.iterations = res.iterations;
	r.final_grad_norm = res.grad_norm;
	r.relative_grad = res.grad_norm / (1 + std::abs(res.value));
	r.energy_trace = res.trace;
	r.outcome = outcome_of(res.reason);
	r.converged = r.outcome == Outcome::converged;
	r.wall_time = seconds_since(t0);
	return out;
}

template QuotientDescent<GridSpec> minimize_nonexistence_quotient(Pair3D const &, Params3D const &, SolverConfig const &);
template QuotientDescent<RadialGrid> minimize_nonexistence_quotient(
	PairRadial const &, ParamsRadial const &, SolverConfig const &);
}  // namespace hfsys
