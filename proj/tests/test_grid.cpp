#include "hfsys/grid.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hfsys;
using std::numbers::pi;

TEST_CASE("grid spec validation and coordinates")
{
	CHECK_THROWS_AS(GridSpec::make(15, 4.0), std::invalid_argument);
	CHECK_THROWS_AS(GridSpec::make(16, -1.0), std::invalid_argument);
	auto const g = GridSpec::make(16, 4.0);
	CHECK(g.h == doctest::Approx(0.5));
	CHECK(g.coord(0) == doctest::Approx(-3.75));
	CHECK(g.coord(15) == doctest::Approx(3.75));
	CHECK(g.index(1, 2, 3) == (1 * 16 + 2) * 16 + 3);
}

TEST_CASE("gaussian integrals on the cube")
{
	auto const g = GridSpec::make(48, 8.0);
	auto const f = sample(g, [](Vec3 const & x) { return std::exp(-x.squaredNorm()); });
	CHECK(integrate(f) == doctest::Approx(std::pow(pi, 1.5)).epsilon(1e-10));
	// int |grad e^{-r^2}|^2 = 3 pi^{3/2} / (2 sqrt 2)
	CHECK(gradient_sq_integral(f) == doctest::Approx(3 * std::pow(pi, 1.5) / (2 * std::sqrt(2.0))).epsilon(1e-9));
}

TEST_CASE("spectral laplacian of a gaussian")
{
	auto const g = GridSpec::make(48, 7.0);
	auto const f = sample(g, [](Vec3 const & x) { return std::exp(-x.squaredNorm()); });
	auto const exact = sample(g, [](Vec3 const & x) {
		double const r2 = x.squaredNorm();
		return (6 - 4 * r2) * std::exp(-r2);
	});
	Array const lap = neg_laplacian(g, f.values);
	CHECK((lap - exact.values).abs().maxCoeff() < 1e-8);
	CHECK(inner(g, f.values, lap) == doctest::Approx(gradient_sq_integral(f)).epsilon(1e-12));
}

TEST_CASE("shifted inverse laplacian inverts the operator")
{
	std::mt19937_64 rng(7);
	auto const g = GridSpec::make(16, 6.0);
	auto const f = test::random_bumps(g, rng);
	Array const w = shifted_inverse_laplacian(g, f.values, 1.5);
	Array const back = neg_laplacian(g, w) + 1.5 * w;
	CHECK((back - f.values).abs().maxCoeff() < 1e-10 * (1 + f.values.abs().maxCoeff()));

	auto const rg = RadialGrid::make(400, 20.0);
	auto const rf = test::random_radial(rg, rng);
	Array const rw = shifted_inverse_laplacian(rg, rf.values, 0.7);
	Array const rback = neg_laplacian(rg, rw) + 0.7 * rw;
	CHECK((rback - rf.values).abs().maxCoeff() < 1e-9 * (1 + rf.values.abs().maxCoeff()));
}

TEST_CASE("radial grid quadrature and laplacian")
{
	auto const g = RadialGrid::make(2000, 20.0);
	auto const f = sample(g, [](double r) { return std::exp(-r * r); });
	CHECK(integrate(f) == doctest::Approx(std::pow(pi, 1.5)).epsilon(1e-6));
	CHECK(gradient_sq_integral(f) == doctest::Approx(3 * std::pow(pi, 1.5) / (2 * std::sqrt(2.0))).epsilon(1e-5));
	Array const lap = neg_laplacian(g, f.values);
	Array const exact = (6 - 4 * g.radii().square()) * (-g.radii().square()).exp();
	CHECK((lap - exact).abs().maxCoeff() < 1e-6);
}

TEST_CASE("embedding a radial profile preserves integrals")
{
	auto const rg = RadialGrid::make(2000, 20.0);
	auto const g = GridSpec::make(32, 6.0);
	auto const rf = sample(rg, [](double r) { return std::exp(-r * r); });
	auto const f = embed_radial(rf, Vec3(0.3, 0, 0), g);
	CHECK(integrate(f) == doctest::Approx(integrate(rf)).epsilon(1e-4));
	auto const back = rebin_radial(f, Vec3(0.3, 0, 0), RadialGrid::make(100, 5.0));
	CHECK(back.values[10] == doctest::Approx(std::exp(-back.grid.r(10) * back.grid.r(10))).epsilon(0.02));
}

TEST_CASE("center of mass and boundary mass")
{
	auto const g = GridSpec::make(24, 6.0);
	Vec3 const c(1.0, -0.5, 0.25);
	auto const f = sample(g, [&](Vec3 const & x) { return std::exp(-(x - c).squaredNorm()); });
	Pair3D const s{f, Field3D::zeros(g)};
	CHECK((center_of_mass(s) - c).norm() < 1e-8);
	CHECK(boundary_mass(s) < 1e-6);
	CHECK(boundary_mass(s) >= 0);
}

TEST_CASE("pair arithmetic")
{
	std::mt19937_64 rng(3);
	auto const g = GridSpec::make(8, 3.0);
	auto const a = test::random_pair(g, rng);
	auto const b = test::random_pair(g, rng);
	auto const c = axpy(a, 2.0, b);
	CHECK(((c - a) - 2.0 * b).u.values.abs().maxCoeff() < 1e-14);
	CHECK(l2_norm(a - a) == 0);
	CHECK(inner(a, b) == doctest::Approx(inner(b, a)));
}
