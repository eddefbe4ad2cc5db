#include "hfsys/coulomb.hpp"
#include "hfsys/errors.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace hfsys;
using std::numbers::pi;

namespace
{
// Unit cube = 6 pyramids; each contributes (1/8) int_{[-1,1]^2} (1+a^2+b^2)^{-1/2}.
double origin_cell_by_quadrature()
{
	int const n = 400;
	double const h = 2.0 / n;
	double sum = 0;
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
		{
			// 2x2 Gauss-Legendre per cell
			double const o = h / (2 * std::sqrt(3.0));
			for (double da : {-o, o})
				for (double db : {-o, o})
				{
					double const a = -1 + (i + 0.5) * h + da, b = -1 + (j + 0.5) * h + db;
					sum += 1 / std::sqrt(1 + a * a + b * b);
				}
		}
	return 0.75 * sum * h * h / 4;
}

Field3D gaussian_charge_state(GridSpec const & g, double w)
{
	return sample(g, [w](Vec3 const & x) { return std::exp(-x.squaredNorm() / (2 * w * w)); });
}
}  // namespace

TEST_CASE("origin cell integral")
{
	CHECK(kOriginCellIntegral == doctest::Approx(3 * std::log(2 + std::sqrt(3.0)) - pi / 2).epsilon(1e-14));
	CHECK(kOriginCellIntegral == doctest::Approx(origin_cell_by_quadrature()).epsilon(1e-9));
}

TEST_CASE("gaussian charge potential at its centre")
{
	auto const g = GridSpec::make(64, 8.0);
	// Centre the charge on a cell so phi is sampled exactly there.
	Vec3 const c = Vec3::Constant(g.coord(g.n / 2));
	auto const u = sample(g, [&](Vec3 const & x) { return std::exp(-(x - c).squaredNorm() / 2); });
	Pair3D const s{u, Field3D::zeros(g)};
	auto const rho = sample(g, [](Vec3 const &) { return 1.0; });
	auto const res = solve_coulomb(s, rho);
	// charge e^{-r^2}: phi(0) = 2 pi, phi(r) = pi^{3/2} erf(r) / r
	Index const centre = g.index(g.n / 2, g.n / 2, g.n / 2);
	CHECK(res.phi.values[centre] == doctest::Approx(2 * pi).epsilon(0.01));
	Array const r = distance(g, c);
	Array const exact = r.unaryExpr([](double x) { return x < 1e-12 ? 2 * pi : std::pow(pi, 1.5) * std::erf(x) / x; });
	CHECK((res.phi.values - exact).abs().maxCoeff() < 0.01 * 2 * pi);
	// int q phi = (pi^{3/2})^2 sqrt(2/pi) for two unit gaussians
	CHECK(res.energy == doctest::Approx(std::pow(pi, 3) * std::sqrt(2 / pi)).epsilon(5e-3));
}

TEST_CASE("radial shell formula against erf oracle")
{
	auto const g = RadialGrid::make(4000, 40.0);
	auto const q = sample(g, [](double r) { return std::exp(-r * r); });
	auto const phi = solve_coulomb_radial(q);
	Array const exact = std::pow(pi, 1.5) * g.radii().unaryExpr([](double x) { return std::erf(x) / x; });
	CHECK((phi.values - exact).abs().maxCoeff() < 1e-4);
}

TEST_CASE("cube and radial potentials agree")
{
	auto const g = GridSpec::make(48, 8.0);
	auto const rg = RadialGrid::make(4000, 40.0);
	std::function<double(double)> const charges[] = {
		[](double r) { return std::exp(-r * r); },
		[](double r) { return r * r * std::exp(-r * r); },
		[](double r) { return std::exp(-r * r / 2) - 0.5 * std::exp(-r * r); },
	};
	for (auto const & c : charges)
	{
		auto const rq = sample(rg, c);
		auto const q = sample(g, [&](Vec3 const & x) { return c(x.norm()); });
		Array const phi3 = coulomb_potential(g, q.values);
		auto const phir = embed_radial(solve_coulomb_radial(rq), Vec3::Zero(), g);
		double const rel = std::sqrt(integrate(g, (phi3 - phir.values).square()) / integrate(g, phir.values.square()));
		CHECK(rel < 0.01);
	}
}

TEST_CASE("coulomb bilinear form is symmetric and positive")
{
	std::mt19937_64 rng(11);
	auto const g = GridSpec::make(16, 6.0);
	for (int i = 0; i < 5; ++i)
	{
		Array const a = test::random_bumps(g, rng).values;
		Array const b = test::random_bumps(g, rng).values;
		double const ab = coulomb_cross(g, a, b), ba = coulomb_cross(g, b, a);
		CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
		CHECK(coulomb_cross(g, a, a) > 0);
	}
}

TEST_CASE("nonpositive rho is rejected")
{
	auto const g = GridSpec::make(8, 3.0);
	Pair3D const s{gaussian_charge_state(g, 1.0), Field3D::zeros(g)};
	auto rho = sample(g, [](Vec3 const &) { return 1.0; });
	rho.values[5] = 0;
	CHECK_THROWS_AS(solve_coulomb(s, rho), NonPositivePotential);
}

TEST_CASE("splitting inequalities and HLS bound on random pairs")
{
	std::mt19937_64 rng(5);
	auto const g = GridSpec::make(16, 6.0);
	auto const V = sample(g, [](Vec3 const & x) { return 1.0 + 0.5 * std::exp(-x.squaredNorm()); });
	auto const rho = sample(g, [](Vec3 const & x) { return 1.0 + 0.3 * std::exp(-x.squaredNorm() / 4); });
	for (int i = 0; i < 20; ++i)
	{
		auto const s = test::random_pair(g, rng);
		for (auto v : {SplitVariant::lions, SplitVariant::weighted, SplitVariant::appendix})
			CHECK(check_splitting_inequality(s, rho, v).margin() >= 0);
		CHECK(check_hls_bound(s, rho, V, 1.3, 1.0) >= 0);
	}
}
