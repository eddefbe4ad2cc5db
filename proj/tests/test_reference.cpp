#include "hfsys/reference.hpp"

#include "hfsys/bounds.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace hfsys;

TEST_CASE("scalar ground state passes its audits")
{
	auto const g = default_radial_grid();
	for (double p : {2.5, 3.0, 3.5})
	{
		auto const gs = solve_scalar_ground(1.0, 1.0, p, g);
		CHECK(std::abs(gs.nehari_res) < 1e-6);
		CHECK(std::abs(gs.pohozaev_res) < 1e-6);
		CHECK(gs.residual < 1e-8);
		CHECK(gs.energy == doctest::Approx((0.5 - 1 / p) * gs.norm_sq).epsilon(1e-8));
		CHECK(gs.w.values.minCoeff() > 0);
		// Decreasing wherever the profile is above round-off.
		for (int i = 1; i < g.m; ++i)
			if (gs.w.values[i] > 1e-10 * gs.w.values[0])
				CHECK(gs.w.values[i] < gs.w.values[i - 1]);
	}
}

TEST_CASE("ground state energy does not depend on the seed")
{
	auto const g = default_radial_grid();
	auto const a = solve_scalar_ground(1.0, 1.0, 3.0, g);
	auto const seed = sample(g, [](double r) { return 3.0 / std::cosh(r / 2); });
	auto const b = solve_scalar_ground(1.0, 1.0, 3.0, seed);
	CHECK(b.energy == doctest::Approx(a.energy).epsilon(1e-5));
}

TEST_CASE("scaled ground state norm matches the Sobolev formula")
{
	auto const g = default_radial_grid();
	double const p = 3.0, lambda = 1.0, V_max = 2.0, beta = 1.0;
	double const S = sobolev_constant(lambda, p, g).S;
	double const gmax = max_g(beta, p);
	auto const w = solve_scalar_ground(lambda, lambda * gmax / V_max, p, g);
	CHECK(w.norm_sq == doctest::Approx(w_beta_norm_sq(gmax, lambda, V_max, S, p)).epsilon(0.02));
	CHECK(alpha_infinity(beta, lambda, V_max, S, p) == doctest::Approx((p - 2) / (2 * p) * w.norm_sq).epsilon(0.02));
}

TEST_CASE("Sobolev constant increases with lambda and is grid stable")
{
	auto const g = default_radial_grid();
	double prev = 0;
	for (double lambda : {0.5, 1.0, 2.0})
	{
		auto const S = sobolev_constant(lambda, 3.0, g);
		CHECK(S.S > prev);
		CHECK(S.delta() < 1e-6 * S.S);
		prev = S.S;
	}
}

TEST_CASE("Lambda quotient minimiser")
{
	auto const q = minimize_quotient_Lambda(1, 1, 2.5, quotient_grid());
	CHECK(q.lower_bound == doctest::Approx(1.5));
	CHECK(q.Lambda >= q.lower_bound);
	double const nu = std::sqrt(integrate(q.pair.u.grid, q.pair.u.values.square()));
	double const nv = std::sqrt(integrate(q.pair.v.grid, q.pair.v.values.square()));
	CHECK(nu > 1e-6 * std::hypot(nu, nv));
	CHECK(nv > 1e-6 * std::hypot(nu, nv));
	// Starts agree on the minimum.
	for (double v : q.start_values)
		CHECK(v == doctest::Approx(q.Lambda).epsilon(1e-3));
	// Not scale invariant: interior optimum along the ray.
	double const at1 = quotient_Lambda(q.pair, 1, 1, 2.5);
	CHECK(quotient_Lambda(0.5 * q.pair, 1, 1, 2.5) > at1);
	CHECK(quotient_Lambda(2.0 * q.pair, 1, 1, 2.5) > at1);
	CHECK_THROWS_AS(minimize_quotient_Lambda(1, 1, 3.2, quotient_grid()), std::invalid_argument);
}

TEST_CASE("Lambda follows the amplitude scaling law for a symmetric minimiser")
{
	// u = v = w/k makes Lambda + 1 proportional to k^(p-2) at fixed theta.
	auto const a = minimize_quotient_Lambda(1, 1, 2.5, quotient_grid());
	auto const b = minimize_quotient_Lambda(1, 0.1, 2.5, quotient_grid());
	CHECK_FALSE(b.unbounded);
	CHECK((b.Lambda + 1) / (a.Lambda + 1) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-3));
}

TEST_CASE("Lambda is unbounded below when the scalar part can be negative")
{
	auto const q = minimize_quotient_Lambda(1, 0.02, 2.5, quotient_grid());
	CHECK(q.unbounded);
	CHECK(q.Lambda == -std::numeric_limits<double>::infinity());
	// Same regime seen by the scalar problem.
	auto const g = RadialGrid::make(400, 40.0);
	CHECK(minimize_I0(constant_params(g, 2.5, 0.0, 1.0, 0.02)).second < 0);
}

TEST_CASE("Lambda lower bound on random radial pairs")
{
	std::mt19937_64 rng(31);
	auto const g = quotient_grid();
	std::uniform_real_distribution<double> theta(0.2, 3.0), k(0.2, 3.0), scale(-3, 1);
	for (int i = 0; i < 100; ++i)
	{
		double const th = theta(rng), kk = k(rng);
		PairRadial s{test::random_radial(g, rng, true), test::random_radial(g, rng, true)};
		s = std::exp(scale(rng)) * s;
		CHECK(quotient_Lambda(s, th, kk, 2.5) >= lambda_lower_bound(th, kk, 2.5));
	}
}

TEST_CASE("I0 minimisation")
{
	auto const g = RadialGrid::make(400, 40.0);
	auto P = constant_params(g, 2.5, 1.0, 0.3, 0.05);
	auto const [z, value] = minimize_I0(P);
	CHECK(value < 0);
	// The coupled ansatz at the maximiser of g lowers the energy.
	double const s = argmax_g(P.beta, P.p);
	PairRadial const ansatz{{g, std::sqrt(s) * z.values}, {g, std::sqrt(1 - s) * z.values}};
	CHECK(energy(ansatz, P).total < value);

	auto const Pc = constant_params(g, 2.5, 0.0, 3.0, 3.0);
	CHECK(minimize_I0(Pc).second <= 0);
}

TEST_CASE("Strauss diagnostic")
{
	auto const fine = RadialGrid::make(4000, 40.0), coarse = RadialGrid::make(2000, 40.0);
	auto gauss = [](double r) { return std::exp(-r * r / 4); };
	double const a = strauss_diagnostic(sample(fine, gauss));
	double const b = strauss_diagnostic(sample(coarse, gauss));
	CHECK(std::isfinite(a));
	CHECK(a / b < 1.1);
	CHECK(b / a < 1.1);
	auto f = sample(fine, gauss);
	auto f2 = f;
	f2.values *= 2;
	CHECK(strauss_diagnostic(f2) == doctest::Approx(strauss_diagnostic(f)));
	auto const bump = sample(fine, [](double r) { return r < 3 ? std::pow(9 - r * r, 2) : 0.0; });
	CHECK(strauss_diagnostic(bump) > 0);
	CHECK(profile_csv(f).rfind("r,value\n", 0) == 0);
}
