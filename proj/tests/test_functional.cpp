#include "hfsys/functional.hpp"

#include "hfsys/errors.hpp"
#include "hfsys/reference.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hfsys;

namespace
{
// Positive bumps on a floor: |u|^{p/2} is only C^1 at zeros.
Pair3D lifted_pair(GridSpec const & g, std::mt19937_64 & rng)
{
	auto s = test::random_pair(g, rng, true);
	s.u.values += 0.05;
	s.v.values += 0.05;
	return s;
}
}  // namespace

TEST_CASE("parameter validation")
{
	auto const g = GridSpec::make(8, 4.0);
	CHECK_THROWS_AS(constant_params(g, 2.0, 1.0, 1.0, 1.0), std::invalid_argument);
	CHECK_THROWS_AS(constant_params(g, 4.0, 1.0, 1.0, 1.0), std::invalid_argument);
	CHECK_THROWS_AS(constant_params(g, 3.0, 1.0, 0.0, 1.0), NonPositivePotential);
	CHECK_THROWS_AS(constant_params(g, 3.0, 1.0, 1.0, -1.0), NonPositivePotential);
}

TEST_CASE("energy of a Gaussian pair against closed forms")
{
	auto const g = GridSpec::make(48, 8.0);
	auto const P = constant_params(g, 3.0, 0.0, 1.0, 1.0);
	auto const z = sample(g, [](Vec3 const & x) { return std::exp(-x.squaredNorm()); });
	auto const e = energy(Pair3D{z, Field3D::zeros(g)}, P);
	double const pi = std::acos(-1.0);
	CHECK(e.kinetic == doctest::Approx(0.5 * 3 * std::pow(pi, 1.5) / (2 * std::sqrt(2.0))).epsilon(1e-8));
	CHECK(e.external == doctest::Approx(0.5 * std::pow(pi / 2, 1.5)).epsilon(1e-8));
	CHECK(e.power == doctest::Approx(std::pow(pi / 3, 1.5) / 3).epsilon(1e-8));
	CHECK(e.cross == 0);
}

TEST_CASE("first variation matches central differences")
{
	auto const g = GridSpec::make(16, 6.0);
	std::mt19937_64 rng(3);
	for (double p : {2.5, 3.0, 3.5})
		for (double beta : {0.0, 1.0, 5.0})
		{
			auto const P = constant_params(g, p, beta, 1.0, 0.7);
			auto const s = lifted_pair(g, rng);
			auto const w = test::random_pair(g, rng);
			CHECK(gradient_check(s, w, P).relative < 1e-7);
		}
}

TEST_CASE("energy parts are homogeneous along rays")
{
	auto const g = GridSpec::make(16, 6.0);
	std::mt19937_64 rng(4);
	auto const P = constant_params(g, 2.5, 2.0, 1.3, 0.4);
	auto const s = test::random_pair(g, rng);
	auto const e1 = energy(s, P);
	for (double t : {0.3, 2.0})
	{
		auto const et = energy(t * s, P);
		CHECK(et.kinetic == doctest::Approx(t * t * e1.kinetic).epsilon(1e-12));
		CHECK(et.coulomb == doctest::Approx(std::pow(t, 4) * e1.coulomb).epsilon(1e-12));
		CHECK(et.power == doctest::Approx(std::pow(t, 2.5) * e1.power).epsilon(1e-12));
		CHECK(et.cross == doctest::Approx(std::pow(t, 2.5) * e1.cross).epsilon(1e-12));
	}
}

TEST_CASE("gradient at scale equals the gradient at the scaled state")
{
	auto const g = GridSpec::make(16, 6.0);
	std::mt19937_64 rng(8);
	auto const P = constant_params(g, 3.5, 1.0, 1.0, 1.0);
	auto const s = test::random_pair(g, rng);
	auto const a = variation_parts(s, P).gradient_at_scale(1.7);
	auto const b = first_variation(1.7 * s, P);
	CHECK(l2_norm(a - b) < 1e-12 * l2_norm(b));
}

TEST_CASE("Nehari residual is the derivative of the fibering map at 1")
{
	auto const g = GridSpec::make(16, 6.0);
	std::mt19937_64 rng(12);
	auto const P = constant_params(g, 3.0, 2.0, 1.0, 0.5);
	auto const s = test::random_pair(g, rng);
	CHECK(nehari_residual(s, P) == doctest::Approx(inner(first_variation(s, P), s)).epsilon(1e-12));
	double const h = 1e-5;
	double const fd = (energy((1 + h) * s, P).total - energy((1 - h) * s, P).total) / (2 * h);
	CHECK(nehari_residual(s, P) == doctest::Approx(fd).epsilon(1e-7));
	CHECK_THROWS_AS(nehari_residual(Pair3D::zeros(g), P), ZeroState);
}

TEST_CASE("F_beta pointwise")
{
	Array u(3), v(3);
	u << 1, -2, 0;
	v << 1, 1, 3;
	Array const f = F_beta(u, v, 2.0, 3.0);
	CHECK(f[0] == doctest::Approx(1 + 1 + 4));
	CHECK(f[1] == doctest::Approx(8 + 1 + 4 * std::pow(2.0, 1.5)));
	CHECK(f[2] == doctest::Approx(27));
}

TEST_CASE("nontriviality classes")
{
	auto const g = RadialGrid::make(100, 10.0);
	auto const z = sample(g, [](double r) { return std::exp(-r * r); });
	CHECK(classify_nontriviality(PairRadial::zeros(g), 1e-4) == Nontriviality::trivial);
	CHECK(classify_nontriviality(PairRadial{z, RadialField::zeros(g)}, 1e-4) == Nontriviality::semitrivial);
	CHECK(classify_nontriviality(PairRadial{z, {g, 1e-6 * z.values}}, 1e-4) == Nontriviality::semitrivial);
	CHECK(classify_nontriviality(PairRadial{z, {g, 0.1 * z.values}}, 1e-4) == Nontriviality::vectorial);
	CHECK(to_string(Nontriviality::vectorial) == "vectorial");
}

TEST_CASE("identities at a radial solution")
{
	// With beta = 0 and rho tiny the scalar ground state solves the system to high accuracy.
	auto const g = default_radial_grid();
	double const p = 3.0;
	auto const gs = solve_scalar_ground(1.0, 1.0, p, g);
	auto const P = constant_params(g, p, 0.0, 1.0, 1e-12);
	PairRadial const s{gs.w, RadialField::zeros(g)};
	auto const e = energy(s, P);
	CHECK(std::abs(nehari_residual(s, P)) < 1e-8 * e.scale());
	CHECK(std::abs(pohozaev_residual(s, P)) < 1e-8 * pohozaev_scale(s, P));
	auto const a = z_vector_audit(s, P, 1e-8);
	CHECK(a.max_residual() < 1e-8);
	CHECK(a.decomposition_residual < 1e-8);
	CHECK(a.sign_quantity == doctest::Approx(-(p - 2) * (a.z[0] + a.z[1]) + (4 - p) * a.z[3]));
	// At a solution J >= the Pohozaev-Nehari lower estimate, and the bound subtracts a positive mass term.
	CHECK(solution_energy_lower_bound(s, P) < e.total);
	CHECK(I0(gs.w, P) == doctest::Approx(e.total));
}

TEST_CASE("z-vector audit rejects non-solutions")
{
	auto const g = RadialGrid::make(200, 20.0);
	auto const P = constant_params(g, 3.0, 1.0, 1.0, 1.0);
	auto const z = sample(g, [](double r) { return std::exp(-r * r); });
	CHECK_THROWS_AS(z_vector_audit(PairRadial{z, z}, P, 1e-6), NotASolution);
	ParamsRadial Q = P;
	Q.x_grad_V.reset();
	CHECK_THROWS_AS(pohozaev_residual(PairRadial{z, z}, Q), MissingGradientFields);
}

TEST_CASE("radial and cube energies agree for a radial pair")
{
	auto const rg = RadialGrid::make(2000, 12.0);
	auto const g = GridSpec::make(48, 8.0);
	auto const fu = [](double r) { return std::exp(-r * r / 2); };
	auto const fv = [](double r) { return 0.5 * std::exp(-r * r); };
	PairRadial const sr{sample(rg, fu), sample(rg, fv)};
	Pair3D const s3{embed_radial(sr.u, Vec3::Zero(), g), embed_radial(sr.v, Vec3::Zero(), g)};
	auto const er = energy(sr, constant_params(rg, 3.0, 1.5, 1.0, 0.5));
	auto const e3 = energy(s3, constant_params(g, 3.0, 1.5, 1.0, 0.5));
	CHECK(e3.total == doctest::Approx(er.total).epsilon(1e-3));
	CHECK(e3.coulomb == doctest::Approx(er.coulomb).epsilon(5e-3));
}
