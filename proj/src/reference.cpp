#include "hfsys/reference.hpp"

#include "hfsys/bounds.hpp"
#include "hfsys/errors.hpp"
#include "hfsys/optim.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hfsys
{
ScalarGroundState solve_scalar_ground(double lambda, double c, double p, RadialField const & seed, double tol,
	int max_sweeps)
{
	if (!(lambda > 0) || !(c > 0) || !(p > 2 && p < 6))
		throw std::invalid_argument("solve_scalar_ground: need lambda, c > 0 and 2 < p < 6");
	RadialGrid const & g = seed.grid;
	Array w = seed.values.abs();
	if (w.maxCoeff() <= 0)
		throw ZeroState("solve_scalar_ground: zero seed");

	auto norm_sq = [&](Array const & f) { return inner(g, f, neg_laplacian(g, f)) + lambda * integrate(g, f.square()); };
	auto rescale = [&](Array & f) {
		double const t = std::pow(norm_sq(f) / (c * integrate(g, f.abs().pow(p))), 1 / (p - 2));
		f *= t;
	};
	rescale(w);

	ScalarGroundState out;
	out.lambda = lambda;
	out.c = c;
	for (out.iterations = 0; out.iterations < max_sweeps; ++out.iterations)
	{
		Array const nl = c * w.abs().pow(p - 2) * w;
		Array const Lw = neg_laplacian(g, w) + lambda * w;
		out.residual = std::sqrt(integrate(g, (Lw - nl).square()) / integrate(g, Lw.square()));
		if (out.residual < tol)
			break;
		w = shifted_inverse_laplacian(g, nl, lambda).abs();
		rescale(w);
	}
	if (!(out.residual < tol))
		throw NoConvergence("solve_scalar_ground: residual stalled");

	out.w = {g, w};
	double const K = inner(g, w, neg_laplacian(g, w));
	double const M = integrate(g, w.square());
	double const P = integrate(g, w.abs().pow(p));
	out.norm_sq = K + lambda * M;
	out.energy = 0.5 * out.norm_sq - c / p * P;
	out.nehari_res = (out.norm_sq - c * P) / (out.norm_sq + c * P);
	out.pohozaev_res = (0.5 * K + 1.5 * lambda * M - 3 * c / p * P) / (0.5 * K + 1.5 * lambda * M + 3 * c / p * P);
	return out;
}

ScalarGroundState solve_scalar_ground(double lambda, double c, double p, RadialGrid const & g, double tol,
	int max_sweeps)
{
	double const a = std::sqrt(lambda);
	auto const seed = sample(g, [a](double r) { return std::exp(-a * r * r / 2); });
	return solve_scalar_ground(lambda, c, p, seed, tol, max_sweeps);
}

SobolevConstant sobolev_constant(double lambda, double p, RadialGrid const & g)
{
	auto S_of = [&](RadialGrid const & grid) {
		auto const gs = solve_scalar_ground(lambda, 1.0, p, grid);
		return std::sqrt(gs.norm_sq) / std::pow(integrate(grid, gs.w.values.abs().pow(p)), 1 / p);
	};
	return {S_of(g), S_of(RadialGrid::make(g.m / 2, g.R))};
}

namespace
{
struct QuotientParts
{
	double value;
	Array grad_u;
	Array grad_v;
};

QuotientParts quotient_with_gradient(RadialGrid const & g, Array const & u, Array const & v, double theta, double k,
	double p)
{
	Array const q = u.square() + v.square();
	Array const phi = solve_coulomb_radial({g, q}).values;
	Array const lu = neg_laplacian(g, u) + theta * u;
	Array const lv = neg_laplacian(g, v) + theta * v;
	Array const au = u.abs(), av = v.abs();
	double const num = 0.5 * (inner(g, u, lu) + inner(g, v, lv)) + k * k / 4 * integrate(g, phi * q)
		- integrate(g, au.pow(p) + av.pow(p)) / p;
	Array const hu = au.pow(p / 2), hv = av.pow(p / 2);
	double const den = 2 / p * integrate(g, hu * hv);
	QuotientParts out;
	out.value = num / den;
	if (!(den > 0))
	{
		out.value = std::numeric_limits<double>::infinity();
		return out;
	}
	Array const dnu = lu + k * k * phi * u - au.pow(p - 2) * u;
	Array const dnv = lv + k * k * phi * v - av.pow(p - 2) * v;
	Array const ddu = u.sign() * au.pow(p / 2 - 1) * hv;
	Array const ddv = v.sign() * av.pow(p / 2 - 1) * hu;
	out.grad_u = (dnu - out.value * ddu) / den;
	out.grad_v = (dnv - out.value * ddv) / den;
	return out;
}
}  // namespace

double quotient_Lambda(PairRadial const & s, double theta, double k, double p)
{
	return quotient_with_gradient(s.grid(), s.u.values, s.v.values, theta, k, p).value;
}

QuotientMinimizer minimize_quotient_Lambda(double theta, double k, double p, RadialGrid const & g)
{
	if (!(theta > 0) || !(k > 0) || !(p > 2 && p < 3))
		throw std::invalid_argument("minimize_quotient_Lambda: need theta, k > 0 and 2 < p < 3");
	Index const m = g.m;
	Array const r = g.radii();
	Vector weights(2 * m);
	weights << g.weights().matrix(), g.weights().matrix();

	Objective f = [&](Vector const & x, Vector & grad) {
		Array const u = x.head(m).array().exp();
		Array const v = x.tail(m).array().exp();
		if (!u.allFinite() || !v.allFinite())
			return std::numeric_limits<double>::infinity();
		auto const qp = quotient_with_gradient(g, u, v, theta, k, p);
		if (!std::isfinite(qp.value))
			return qp.value;
		grad.head(m) = (u * qp.grad_u).matrix();
		grad.tail(m) = (v * qp.grad_v).matrix();
		return qp.value;
	};

	struct Seed
	{
		double amp_u, width_u, amp_v, width_v;
	};
	Seed const seeds[] = {
		{1.0, 1.0, 1.0, 1.0},
		{1.0, 2.0, 1.0, 2.0},
		{0.5, 4.0, 0.5, 4.0},
		{1.5, 2.0, 0.7, 2.0},
		{1.0, 1.0, 1.0, 3.0},
	};
	auto profile = [&](double amp, double width) {
		return (std::log(amp) - (1 + r.square()).sqrt() / width).matrix();
	};

	LbfgsOptions opt;
	opt.max_iters = 4000;
	opt.memory = 12;
	opt.divergence_floor = -1e6;
	LbfgsHooks hooks;
	hooks.converged = [&](Vector const &, Vector const & grad, double value) {
		return std::sqrt((weights.array() * grad.array().square()).sum()) < 1e-9 * (1 + std::abs(value));
	};
	// a-space Hessian ~ U (-Lap + theta) U / den: invert with u floored to keep tails tame.
	hooks.precondition = [&](Vector const & x, Vector const & v) {
		Array const u = x.head(m).array().exp();
		Array const w = x.tail(m).array().exp();
		double const den = 2 / p * integrate(g, (u * w).pow(p / 2));
		Vector out(2 * m);
		for (int c = 0; c < 2; ++c)
		{
			Array const amp = c == 0 ? u : w;
			Array const floor = amp.max(1e-6 * amp.maxCoeff());
			Array const y = shifted_inverse_laplacian(g, v.segment(c * m, m).array() / floor, theta);
			out.segment(c * m, m) = (den * y / floor).matrix();
		}
		return out;
	};

	QuotientMinimizer best;
	best.Lambda = std::numeric_limits<double>::infinity();
	best.lower_bound = lambda_lower_bound(theta, k, p);
	for (auto const & s : seeds)
	{
		Vector x0(2 * m);
		x0 << profile(s.amp_u, s.width_u), profile(s.amp_v, s.width_v);
		// Start from the best common amplitude along the seed's ray.
		Vector scratch(2 * m);
		auto along = [&](double t) { return f((x0.array() + std::log(t)).matrix(), scratch); };
		double const t = std::exp(golden_section_min([&](double lt) { return along(std::exp(lt)); }, std::log(1e-4), std::log(1e2), 1e-6));
		x0.array() += std::log(t);
		auto const res = lbfgs(f, x0, weights, opt, hooks);
		best.start_values.push_back(res.value);
		if (res.reason == StopReason::diverged)
			best.unbounded = true;
		if (res.value < best.Lambda)
		{
			best.Lambda = res.value;
			best.pair = {{g, res.x.head(m).array().exp()}, {g, res.x.tail(m).array().exp()}};
		}
	}
	if (best.unbounded)
	{
		best.Lambda = -std::numeric_limits<double>::infinity();
		return best;
	}
	if (!std::isfinite(best.Lambda))
		throw NoConvergence("minimize_quotient_Lambda: no finite quotient");
	return best;
}

std::pair<RadialField, double> minimize_I0(ParamsRadial const & P)
{
	RadialGrid const & g = P.grid();
	Vector const weights = g.weights().matrix();
	RadialField const zero = RadialField::zeros(g);

	Objective f = [&](Vector const & x, Vector & grad) {
		PairRadial const s{{g, x.array()}, zero};
		auto const parts = variation_parts(s, P);
		grad = parts.gradient().u.values.matrix();
		return parts.energy.total;
	};
	LbfgsOptions opt;
	opt.max_iters = 3000;
	LbfgsHooks hooks;
	hooks.converged = [&](Vector const & x, Vector const & grad, double) {
		double const n = std::sqrt((weights.array() * x.array().square()).sum());
		return std::sqrt((weights.array() * grad.array().square()).sum()) < 1e-9 * (1 + n);
	};

	RadialField best = zero;
	double best_value = 0;
	for (double width : {1.0, 2.0, 4.0})
		for (double amp : {0.5, 2.0, 6.0})
		{
			Vector const x0 = (amp * (-g.radii().square() / (width * width)).exp()).matrix();
			auto const res = lbfgs(f, x0, weights, opt, hooks);
			if (res.value < best_value)
			{
				best_value = res.value;
				best = {g, res.x.array()};
			}
		}
	return {best, best_value};
}

double strauss_diagnostic(RadialField const & f)
{
	RadialGrid const & g = f.grid;
	double const h1 = std::sqrt(gradient_sq_integral(f) + integrate(g, f.values.square()));
	if (!(h1 > 0))
		throw ZeroState("strauss_diagnostic: zero field");
	double best = 0;
	for (int i = 5; i < g.m; ++i)
		best = std::max(best, g.r(i) * std::abs(f.values[i]));
	return best / h1;
}

std::string profile_csv(RadialField const & f)
{
	std::ostringstream os;
	os.precision(17);
	os << "r,value\n";
	for (int i = 0; i < f.grid.m; ++i)
		os << f.grid.r(i) << ',' << f.values[i] << '\n';
	return os.str();
}
}  // namespace hfsys
