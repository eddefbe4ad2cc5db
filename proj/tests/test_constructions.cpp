#include "hfsys/constructions.hpp"

#include "hfsys/errors.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hfsys;

TEST_CASE("profile derivative matches finite differences")
{
	RadialProfile f = gaussian_well(2.0, 1.2, 1.5, 4);
	f.terms.push_back({0.4, 3.0, 0.7, 2});
	f.eps = 0.6;
	for (double r : {0.3, 1.0, 2.2, 4.7, 9.0})
	{
		double const h = 1e-6;
		double const fd = r * (f.value(r + h) - f.value(r - h)) / (2 * h);
		CHECK(f.r_deriv(r) == doctest::Approx(fd).epsilon(1e-7));
	}
}

TEST_CASE("profile bounds of the shipped families")
{
	auto const w = gaussian_well(2.0, 0.8, 1.0);
	CHECK(w.inf() == doctest::Approx(1.2).epsilon(1e-12));
	CHECK(w.sup() == doctest::Approx(2.0).epsilon(1e-12));
	CHECK(w.at_infinity() == 2.0);

	auto const a = annular_well(1.0, 0.5, 3.0, 0.5, 8);
	CHECK(a.inf() == doctest::Approx(0.5).epsilon(1e-10));
	CHECK(a.value(0) == doctest::Approx(1.0).epsilon(1e-12));

	auto const c = constant_profile(0.7);
	CHECK(c.inf() == 0.7);
	CHECK(c.sup() == 0.7);
	CHECK(d0_of(c) == doctest::Approx(1.4));

	CHECK_THROWS_AS(gaussian_well(1.0, 0.5, 0.0), std::invalid_argument);
	CHECK_THROWS_AS(gaussian_well(1.0, 0.5, 1.0, 1.5), std::invalid_argument);
	CHECK_THROWS_AS(annular_well(1.0, 0.5, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("d0 is the infimum of 2V + r V'")
{
	auto const V = gaussian_well(1.0, 0.5, 1.0);
	double best = 2.0;
	for (int i = 0; i <= 100000; ++i)
	{
		double const r = 10.0 * i / 100000;
		best = std::min(best, 2 * V.value(r) + V.r_deriv(r));
	}
	CHECK(d0_of(V) == doctest::Approx(best).epsilon(1e-8));
}

TEST_CASE("scaling the potentials")
{
	Potentials const pot{gaussian_well(2.0, 1.0, 1.0), gaussian_well(1.0, 0.5, 2.0)};
	auto const same = scale_potentials(pot, 1.0);
	for (double r : {0.0, 0.5, 3.0})
		CHECK(same.V.value(r) == pot.V.value(r));

	auto const g = GridSpec::make(16, 5.0);
	auto const P = make_params(g, 3.0, 1.0, scale_potentials(pot, 1e-4));
	CHECK((P.V.values - pot.V.value(0)).abs().maxCoeff() < 1e-6);
	CHECK((P.rho.values - pot.rho.value(0)).abs().maxCoeff() < 1e-6);
	// Scalar bounds are those of the family, not of the sampled box.
	CHECK(P.V_max == doctest::Approx(2.0));
	CHECK(P.V_inf == 2.0);
	CHECK_THROWS_AS(scale_potentials(pot, 0.0), std::invalid_argument);
}

TEST_CASE("make_params samples by radius on both grids")
{
	Potentials const pot{gaussian_well(2.0, 1.0, 1.5), constant_profile(0.5)};
	auto const rg = RadialGrid::make(200, 10.0);
	auto const Pr = make_params(rg, 2.5, 1.0, pot);
	CHECK(Pr.V.values[50] == doctest::Approx(pot.V.value(rg.r(50))));
	CHECK(Pr.x_grad_rho->values.abs().maxCoeff() == 0);
	CHECK(Pr.lambda == doctest::Approx(1.0));
	CHECK(Pr.rho_min == 0.5);

	Potentials const bad{gaussian_well(1.0, 1.5, 1.0), constant_profile(1.0)};
	CHECK_THROWS_AS(make_params(rg, 2.5, 1.0, bad), NonPositivePotential);
}

TEST_CASE("coupled ansatz preserves the norm and the Coulomb energy")
{
	auto const g = GridSpec::make(16, 6.0);
	std::mt19937_64 rng(11);
	auto const z = test::random_bumps(g, rng);
	auto const P = constant_params(g, 3.0, 1.0, 1.0, 0.5);
	auto const e0 = energy(coupled_ansatz(z, 0.0), P);
	for (double s : {0.1, 0.5, 0.9, 1.0})
	{
		auto const e = energy(coupled_ansatz(z, s), P);
		CHECK(e.kinetic == doctest::Approx(e0.kinetic).epsilon(1e-12));
		CHECK(e.external == doctest::Approx(e0.external).epsilon(1e-12));
		CHECK(e.coulomb == doctest::Approx(e0.coulomb).epsilon(1e-12));
	}
	CHECK_THROWS_AS(coupled_ansatz(Field3D::zeros(g), 0.5), ZeroState);
	CHECK_THROWS_AS(coupled_ansatz(z, 1.5), std::invalid_argument);
}

TEST_CASE("cutoff profile")
{
	double const R = 4.0;
	CHECK(cutoff_profile(0.0, R) == 1);
	CHECK(cutoff_profile(R / 2, R) == 1);
	CHECK(cutoff_profile(R, R) == 0);
	CHECK(cutoff_profile(0.75 * R, R) == doctest::Approx(0.5));
	// Quintic smoothstep: peak slope 15/8 per unit of t, with t spanning R/2.
	double max_slope = 0;
	for (int i = 0; i < 4000; ++i)
	{
		double const r = R * i / 4000, h = 1e-6;
		max_slope = std::max(max_slope, std::abs(cutoff_profile(r + h, R) - cutoff_profile(r - h, R)) / (2 * h));
	}
	CHECK(max_slope == doctest::Approx(15.0 / (4 * R)).epsilon(1e-5));
}

TEST_CASE("shift by whole cells")
{
	auto const g = GridSpec::make(16, 8.0);
	auto const f = sample(g, [](Vec3 const & x) { return cutoff_profile(x.norm(), 2.0); });
	auto const s = shift_cells(f, {3, -2, 1});
	CHECK(integrate(g, s.values) == doctest::Approx(integrate(g, f.values)).epsilon(1e-14));
	CHECK(s.values[g.index(8 + 3, 8 - 2, 8 + 1)] == f.values[g.index(8, 8, 8)]);
	CHECK_THROWS_AS(shift_cells(f, {10, 0, 0}), BoxTooSmall);
}

namespace
{
Pair3D compact_bump(GridSpec const & g, double R0)
{
	auto const z = sample(g, [](Vec3 const & x) { return std::exp(-x.squaredNorm()); });
	return cutoff(coupled_ansatz(z, 0.3), R0);
}
}  // namespace

TEST_CASE("multibump local terms are exactly additive")
{
	auto const g = GridSpec::make(48, 12.0);
	double const R0 = 2.0;
	auto const bump = compact_bump(g, R0);
	auto const P = constant_params(g, 2.5, 2.0, 1.0, 0.5);
	auto const f1 = integrate(g, F_beta(bump.u.values, bump.v.values, P.beta, P.p));
	for (int N = 1; N <= 4; ++N)
	{
		MultibumpSpec spec;
		spec.N = N;
		spec.R0 = R0;
		spec.spacing = 5.0;
		auto const mb = build_multibump(bump, spec);
		CHECK(mb.centers.size() == std::size_t(N));
		auto const fN = integrate(g, F_beta(mb.pair.u.values, mb.pair.v.values, P.beta, P.p));
		CHECK(fN == doctest::Approx(N * f1).epsilon(1e-12));

		auto const L = multibump_ledger(mb, bump, P, R0);
		CHECK(std::abs(L.total.power - L.single_sum.power) < 1e-12 * L.single_sum.power);
		CHECK(std::abs(L.total.external - L.single_sum.external) < 1e-12 * L.single_sum.external);
		// The spectral Laplacian is not local; cross kinetic terms are only small.
		CHECK(std::abs(L.total.kinetic - L.single_sum.kinetic) < 1e-4 * L.single_sum.kinetic);
		if (N == 1)
			CHECK(std::abs(L.cross_coulomb) < 1e-12 * L.self_coulomb);
		else
		{
			CHECK(L.cross_coulomb > 0);
			CHECK(L.cross_coulomb <= L.cross_bound);
			CHECK(L.cross_coulomb == doctest::Approx(L.point_charge).epsilon(0.05));
		}
	}
}

TEST_CASE("multibump guards")
{
	auto const g = GridSpec::make(32, 8.0);
	auto const bump = compact_bump(g, 2.0);
	MultibumpSpec spec;
	spec.N = 2;
	spec.R0 = 2.0;
	spec.spacing = 3.0;
	CHECK_THROWS_AS(build_multibump(bump, spec), std::invalid_argument);
	spec.N = 4;
	spec.spacing = 5.0;
	CHECK_THROWS_AS(build_multibump(bump, spec), BoxTooSmall);
	spec.N = 0;
	CHECK_THROWS_AS(build_multibump(bump, spec), std::invalid_argument);
}
