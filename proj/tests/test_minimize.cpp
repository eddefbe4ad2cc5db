#include "hfsys/minimize.hpp"

#include "hfsys/bounds.hpp"
#include "hfsys/constructions.hpp"
#include "hfsys/errors.hpp"
#include "hfsys/reference.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hfsys;

namespace
{
Potentials coercive_family()
{
	return {gaussian_well(2.5, 2.35, 7, 8), gaussian_well(2.5, 2.35, 7, 8)};
}

SolverConfig fast_config()
{
	SolverConfig cfg;
	cfg.max_iters = 3000;
	cfg.precondition = true;
	return cfg;
}
}  // namespace

TEST_CASE("solver config validation")
{
	SolverConfig cfg;
	CHECK_NOTHROW(cfg.validate());
	cfg.grad_tol = 0;
	CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
	cfg = {};
	cfg.backtrack = 1.0;
	CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
	cfg = {};
	cfg.memory = 0;
	CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("the zero state is a fixed point")
{
	auto const g = RadialGrid::make(200, 20.0);
	auto const P = constant_params(g, 2.5, 1.0, 1.0, 1.0);
	auto const r = descend(PairRadial::zeros(g), P, SolverConfig{});
	CHECK(r.report.converged);
	CHECK(r.report.iterations == 0);
	CHECK(r.energy.total == 0);
}

TEST_CASE("radial descent in the coercive window")
{
	auto const g = RadialGrid::make(400, 40.0);
	auto const P = make_params(g, 2.5, 2.0, coercive_family());
	auto const z = sample(g, [](double r) { return 2 * std::exp(-r * r / 20); });
	auto const r = descend(coupled_ansatz(z, 0.5), P, fast_config());
	CHECK(r.report.converged);
	CHECK(r.report.relative_grad < 1e-6);
	CHECK(r.report.monotone());
	CHECK(r.energy.total < 0);
	// Symmetric seed stays symmetric.
	CHECK((r.state.u.values - r.state.v.values).abs().maxCoeff() < 1e-8 * r.state.u.values.abs().maxCoeff());
	CHECK(classify_nontriviality(r.state, 1e-4) == Nontriviality::vectorial);
	CHECK(std::abs(nehari_residual(r.state, P)) < 1e-5 * r.energy.scale());
	CHECK(std::abs(pohozaev_residual(r.state, P)) < 1e-4 * pohozaev_scale(r.state, P));
}

TEST_CASE("plain steepest descent decreases monotonically")
{
	auto const g = RadialGrid::make(100, 20.0);
	auto const P = constant_params(g, 3.0, 1.0, 1.0, 0.5);
	auto const z = sample(g, [](double r) { return std::exp(-r * r / 4); });
	SolverConfig cfg;
	cfg.quasi_newton = false;
	cfg.max_iters = 200;
	auto const r = descend(coupled_ansatz(z, 0.5), P, cfg);
	CHECK(r.report.monotone());
	CHECK(r.report.energy_trace.back() < r.report.energy_trace.front());
}

TEST_CASE("divergence sentinel")
{
	auto const g = RadialGrid::make(400, 40.0);
	auto const P = make_params(g, 2.5, 2.0, coercive_family());
	auto const z = sample(g, [](double r) { return 2 * std::exp(-r * r / 20); });
	SolverConfig cfg = fast_config();
	cfg.divergence_factor = 1e-3;
	auto const r = descend(coupled_ansatz(z, 0.5), P, cfg);
	CHECK(r.report.outcome == Outcome::diverged);
	CHECK_FALSE(r.report.converged);
}

TEST_CASE("multistart keeps the lowest energy")
{
	auto const g = RadialGrid::make(200, 20.0);
	auto const P = constant_params(g, 3.0, 1.0, 1.0, 0.5);
	std::vector<PairRadial> seeds;
	for (double w : {1.0, 2.0, 4.0})
		seeds.push_back(coupled_ansatz(sample(g, [w](double r) { return std::exp(-r * r / (w * w)); }), 0.5));
	SolverConfig cfg;
	cfg.max_iters = 30;
	auto const best = descend_multistart(seeds, P, cfg);
	for (auto const & s : seeds)
		CHECK(best.energy.total <= descend(s, P, cfg).energy.total);
	CHECK_THROWS_AS(descend_multistart(std::vector<PairRadial>{}, P, cfg), std::invalid_argument);
}

TEST_CASE("Nehari minimisation at p = 3.5")
{
	auto const g = RadialGrid::make(400, 30.0);
	double const p = 3.5, beta = 20;
	Potentials const pot{gaussian_well(1.0, 0.3, 2.0), constant_profile(0.3)};
	auto const P = make_params(g, p, beta, pot);
	double const S = sobolev_constant(P.lambda, p, default_radial_grid()).S;
	auto const w = solve_scalar_ground(P.lambda, P.lambda * max_g(beta, p) / P.V_max, p, g);
	double const s_beta = argmax_g(beta, p);
	PairRadial const seed{{g, std::sqrt(s_beta) * w.w.values}, {g, std::sqrt(1 - s_beta) * w.w.values}};

	auto const r = nehari_minimize(seed, P, fast_config());
	CHECK(r.report.converged);
	CHECK(r.report.monotone());
	CHECK(r.nehari_class == NehariClass::Nminus);
	CHECK(r.filtration == Filtration::N1);
	CHECK(std::abs(nehari_residual(r.state, P)) < 1e-6 * r.energy.scale());
	auto const sw = alpha_minus_sandwich(beta, P.lambda, P.rho_max, S, p);
	CHECK(r.alpha_minus > sw.lower);
	CHECK(r.alpha_minus < sw.upper);
	// Starting on the manifold: the seed energy bounds the minimum.
	CHECK(r.alpha_minus <= r.report.energy_trace.front());
}

TEST_CASE("Nehari minimisation needs a dip")
{
	auto const g = RadialGrid::make(200, 20.0);
	auto const P = constant_params(g, 3.5, 0.0, 1.0, 50.0);
	auto const z = sample(g, [](double r) { return std::exp(-r * r); });
	CHECK_THROWS_AS(nehari_minimize(coupled_ansatz(z, 0.5), P, SolverConfig{}), RootAbsent);
}

TEST_CASE("nonexistence quotient gradient and lower bound")
{
	auto const g = GridSpec::make(16, 8.0);
	auto const P = constant_params(g, 2.5, 1.0, 1.0, 1.0);
	std::mt19937_64 rng(5);
	for (int i = 0; i < 5; ++i)
	{
		// |u|^{p/2} is not C^2 at zeros; keep the finite differences away from them.
		auto s = test::random_pair(g, rng, true);
		s.u.values += 0.05;
		s.v.values += 0.05;
		auto const w = test::random_pair(g, rng);
		auto const q = nonexistence_quotient(s, P);
		double const h = 1e-5;
		double const fd
			= (nonexistence_quotient(s + h * w, P).value - nonexistence_quotient(s - h * w, P).value) / (2 * h);
		CHECK(inner(q.gradient, w) == doctest::Approx(fd).epsilon(1e-6));
		CHECK(q.value >= nonexistence_threshold(1.0, 1.0, 2.5));
		CHECK(nonexistence_quotient(test::random_pair(g, rng), P).value >= nonexistence_threshold(1.0, 1.0, 2.5));
	}
	auto const semi = Pair3D{test::random_bumps(g, rng), Field3D::zeros(g)};
	CHECK(std::isinf(nonexistence_quotient(semi, P).value));
	CHECK_THROWS_AS(minimize_nonexistence_quotient(semi, P, SolverConfig{}), ZeroState);
}

TEST_CASE("adversarial quotient descent stays above the bound")
{
	auto const g = RadialGrid::make(300, 30.0);
	auto const P = constant_params(g, 2.5, 1.0, 1.0, 1.0);
	std::mt19937_64 rng(9);
	for (int i = 0; i < 3; ++i)
	{
		PairRadial const seed{test::random_radial(g, rng, true), test::random_radial(g, rng, true)};
		auto const r = minimize_nonexistence_quotient(seed, P, fast_config());
		CHECK(r.report.converged);
		CHECK(r.report.monotone());
		CHECK(r.value >= nonexistence_threshold(1.0, 1.0, 2.5));
	}
}
