#include "hfsys/constructions.hpp"

#include "hfsys/bounds.hpp"
#include "hfsys/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hfsys
{
double RadialProfile::value(double r) const
{
	double const s = eps * r;
	double f = far;
	for (auto const & t : terms)
		f -= t.depth * std::exp(-std::pow(std::abs(s - t.radius) / t.width, t.shape));
	return f;
}

double RadialProfile::r_deriv(double r) const
{
	double const s = eps * r;
	double d = 0;
	for (auto const & t : terms)
	{
		double const x = (s - t.radius) / t.width;
		double const ax = std::abs(x);
		if (ax > 0)
			d += t.depth * t.shape * std::pow(ax, t.shape - 1) * (x > 0 ? 1 : -1) / t.width
				* std::exp(-std::pow(ax, t.shape));
	}
	return s * d;
}

namespace
{
double scan_extent(RadialProfile const & f)
{
	double top = 1;
	for (auto const & t : f.terms)
		top = std::max(top, t.radius + 10 * t.width);
	return top;
}

// Minimum of h(s) over s >= 0 for an unscaled profile argument.
double scan_min(std::function<double(double)> const & h, double top, double at_infinity)
{
	int const n = 20000;
	double best = at_infinity;
	int best_i = -1;
	for (int i = 0; i <= n; ++i)
	{
		double const v = h(top * i / n);
		if (v < best)
		{
			best = v;
			best_i = i;
		}
	}
	if (best_i < 0)
		return best;
	double const lo = top * std::max(best_i - 1, 0) / n, hi = top * std::min(best_i + 1, n) / n;
	double const s = golden_section_min(h, lo, hi);
	return std::min(best, h(s));
}

RadialProfile unscaled(RadialProfile f)
{
	f.eps = 1;
	return f;
}
}  // namespace

double RadialProfile::inf() const
{
	auto const f = unscaled(*this);
	return scan_min([&](double s) { return f.value(s); }, scan_extent(f), far);
}

double RadialProfile::sup() const
{
	auto const f = unscaled(*this);
	return -scan_min([&](double s) { return -f.value(s); }, scan_extent(f), -far);
}

std::string RadialProfile::describe() const
{
	std::ostringstream os;
	os.precision(17);
	os << "far=" << far << " eps=" << eps;
	for (auto const & t : terms)
		os << " [depth=" << t.depth << " radius=" << t.radius << " width=" << t.width << " shape=" << t.shape << "]";
	return os.str();
}

RadialProfile constant_profile(double a)
{
	return {a, {}, 1};
}

RadialProfile gaussian_well(double far, double depth, double width, double shape)
{
	if (!(width > 0) || !(shape >= 2))
		throw std::invalid_argument("gaussian_well: need width > 0 and shape >= 2");
	return {far, {{depth, 0, width, shape}}, 1};
}

RadialProfile annular_well(double far, double depth, double radius, double width, double shape)
{
	if (!(width > 0) || !(radius >= 0) || !(shape >= 2))
		throw std::invalid_argument("annular_well: need width > 0, radius >= 0, shape >= 2");
	return {far, {{depth, radius, width, shape}}, 1};
}

Potentials scale_potentials(Potentials const & pot, double eps)
{
	if (!(eps > 0))
		throw std::invalid_argument("scale_potentials: eps must be positive");
	Potentials out = pot;
	out.V.eps *= eps;
	out.rho.eps *= eps;
	return out;
}

double d0_of(RadialProfile const & V)
{
	auto const f = unscaled(V);
	return scan_min([&](double s) { return 2 * f.value(s) + f.r_deriv(s); }, scan_extent(f), 2 * f.far);
}

namespace
{
Array radii_of(GridSpec const & g)
{
	return distance(g);
}

Array radii_of(RadialGrid const & g)
{
	return g.radii();
}
}  // namespace

template <class Grid>
ProblemParams<Grid> make_params(Grid const & g, double p, double beta, Potentials const & pot)
{
	Array const r = radii_of(g);
	auto field = [&](auto && f) { return Field<Grid>{g, r.unaryExpr(f)}; };
	ProblemParams<Grid> P;
	P.p = p;
	P.beta = beta;
	P.V = field([&](double x) { return pot.V.value(x); });
	P.rho = field([&](double x) { return pot.rho.value(x); });
	P.x_grad_V = field([&](double x) { return pot.V.r_deriv(x); });
	P.x_grad_rho = field([&](double x) { return pot.rho.r_deriv(x); });
	P.lambda = pot.V.inf();
	P.V_max = pot.V.sup();
	P.V_inf = pot.V.at_infinity();
	P.rho_min = pot.rho.inf();
	P.rho_max = pot.rho.sup();
	P.rho_inf = pot.rho.at_infinity();
	P.d0 = d0_of(pot.V);
	P.validate();
	return P;
}

template Params3D make_params(GridSpec const &, double, double, Potentials const &);
template ParamsRadial make_params(RadialGrid const &, double, double, Potentials const &);

template <class Grid>
PairState<Grid> coupled_ansatz(Field<Grid> const & z, double s)
{
	if (!(s >= 0 && s <= 1))
		throw std::invalid_argument("coupled_ansatz: s must lie in [0, 1]");
	if (z.values.matrix().squaredNorm() == 0)
		throw ZeroState("coupled_ansatz: zero field");
	return {{z.grid, std::sqrt(s) * z.values}, {z.grid, std::sqrt(1 - s) * z.values}};
}

template Pair3D coupled_ansatz(Field3D const &, double);
template PairRadial coupled_ansatz(RadialField const &, double);

double cutoff_profile(double r, double R)
{
	double const t = (r - R / 2) / (R / 2);
	if (t <= 0)
		return 1;
	if (t >= 1)
		return 0;
	return 1 - t * t * t * (10 - 15 * t + 6 * t * t);
}

Field3D cutoff(Field3D const & f, double R, Vec3 const & center)
{
	if (!(R > 0))
		throw std::invalid_argument("cutoff: R must be positive");
	Array const psi = distance(f.grid, center).unaryExpr([R](double r) { return cutoff_profile(r, R); });
	return {f.grid, f.values * psi};
}

Pair3D cutoff(Pair3D const & s, double R, Vec3 const & center)
{
	return {cutoff(s.u, R, center), cutoff(s.v, R, center)};
}

PairRadial cutoff(PairRadial const & s, double R)
{
	if (!(R > 0))
		throw std::invalid_argument("cutoff: R must be positive");
	Array const psi = s.grid().radii().unaryExpr([R](double r) { return cutoff_profile(r, R); });
	return {{s.grid(), s.u.values * psi}, {s.grid(), s.v.values * psi}};
}

Field3D shift_cells(Field3D const & f, std::array<int, 3> const & cells)
{
	GridSpec const & g = f.grid;
	Field3D out = Field3D::zeros(g);
	for (int i = 0; i < g.n; ++i)
		for (int j = 0; j < g.n; ++j)
			for (int k = 0; k < g.n; ++k)
			{
				double const v = f.values[g.index(i, j, k)];
				int const a = i + cells[0], b = j + cells[1], c = k + cells[2];
				if (a < 0 || a >= g.n || b < 0 || b >= g.n || c < 0 || c >= g.n)
				{
					if (v != 0)
						throw BoxTooSmall("shift_cells: support leaves the box");
					continue;
				}
				out.values[g.index(a, b, c)] = v;
			}
	return out;
}

Pair3D shift_cells(Pair3D const & s, std::array<int, 3> const & cells)
{
	return {shift_cells(s.u, cells), shift_cells(s.v, cells)};
}

Multibump build_multibump(Pair3D const & bump, MultibumpSpec const & spec)
{
	if (spec.N < 1)
		throw std::invalid_argument("build_multibump: N must be >= 1");
	if (!(spec.R0 > 0))
		throw std::invalid_argument("build_multibump: R0 must be positive");
	GridSpec const & g = bump.grid();
	Multibump mb;
	mb.spacing = spec.spacing > 0 ? spec.spacing : std::pow(double(spec.N), 3);
	if (spec.N > 1 && !(mb.spacing > 2 * spec.R0))
		throw std::invalid_argument("build_multibump: spacing must exceed 2 R0 for disjoint supports");
	Vec3 const e = spec.e.normalized();
	mb.pair = Pair3D::zeros(g);
	for (int i = 0; i < spec.N; ++i)
	{
		Vec3 const c = spec.x0 + (i - 0.5 * (spec.N - 1)) * mb.spacing * e;
		std::array<int, 3> cells{};
		Vec3 snapped;
		for (int d = 0; d < 3; ++d)
		{
			cells[d] = int(std::lround(c[d] / g.h));
			snapped[d] = cells[d] * g.h;
			if (std::abs(snapped[d]) + spec.R0 > g.L)
				throw BoxTooSmall("build_multibump: bump support leaves the box");
		}
		mb.pair = mb.pair + shift_cells(bump, cells);
		mb.centers.push_back(snapped);
		mb.cells.push_back(cells);
	}
	return mb;
}

MultibumpLedger multibump_ledger(Multibump const & mb, Pair3D const & bump, Params3D const & P, double R0)
{
	GridSpec const & g = bump.grid();
	MultibumpLedger L;
	L.total = energy(mb.pair, P);
	std::vector<double> Q;
	for (auto const & cells : mb.cells)
	{
		Pair3D const b = shift_cells(bump, cells);
		auto const e = energy(b, P);
		L.single_sum.kinetic += e.kinetic;
		L.single_sum.external += e.external;
		L.single_sum.coulomb += e.coulomb;
		L.single_sum.power += e.power;
		L.single_sum.cross += e.cross;
		L.single_sum.total += e.total;
		Q.push_back(integrate(g, P.rho.values * (b.u.values.square() + b.v.values.square())));
	}
	L.self_coulomb = L.single_sum.coulomb;
	L.cross_coulomb = L.total.coulomb - L.self_coulomb;
	std::size_t const N = mb.centers.size();
	for (std::size_t i = 0; i < N; ++i)
		for (std::size_t j = 0; j < N; ++j)
			if (i != j)
				L.point_charge += 0.25 * Q[i] * Q[j] / (mb.centers[i] - mb.centers[j]).norm();
	double const M = integrate(g, bump.u.values.square() + bump.v.values.square());
	if (N > 1)
		L.cross_bound = 0.25 * P.rho_max * P.rho_max * double(N * N - N) * M * M / (mb.spacing - 2 * R0);
	auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
	L.additivity_residual = std::max({rel(L.total.kinetic, L.single_sum.kinetic),
		rel(L.total.external, L.single_sum.external), rel(L.total.power, L.single_sum.power),
		L.single_sum.cross != 0 ? rel(L.total.cross, L.single_sum.cross) : 0.0});
	return L;
}

double sublevel_measure(Potentials const & pot, double p, double level, double r_max, int points)
{
	auto const weight = [&](double r) { return std::pow(pot.V.value(r), 3 - p) * std::pow(pot.rho.value(r), p - 2); };
	if (std::pow(pot.V.at_infinity(), 3 - p) * std::pow(pot.rho.at_infinity(), p - 2) < level)
		return std::numeric_limits<double>::infinity();
	double const dr = r_max / points;
	double sum = 0;
	for (int i = 0; i < points; ++i)
	{
		double const r = (i + 0.5) * dr;
		if (weight(r) < level)
			sum += 4 * std::numbers::pi * r * r * dr;
	}
	return sum;
}

Field3D random_bumps(GridSpec const & g, std::mt19937_64 & rng, int count, bool positive)
{
	std::uniform_real_distribution<double> pos(-0.35 * g.L, 0.35 * g.L);
	std::uniform_real_distribution<double> width(0.6, 1.6);
	std::uniform_real_distribution<double> amp(positive ? 0.2 : -1.0, 1.0);
	Field3D f = Field3D::zeros(g);
	for (int b = 0; b < count; ++b)
	{
		Vec3 const c(pos(rng), pos(rng), pos(rng));
		double const w = width(rng), a = amp(rng);
		f.values += a * (-(distance(g, c).square()) / (w * w)).exp();
	}
	return f;
}

Pair3D random_pair(GridSpec const & g, std::mt19937_64 & rng, bool positive)
{
	auto u = random_bumps(g, rng, 3, positive);
	return {std::move(u), random_bumps(g, rng, 3, positive)};
}

RadialField random_radial(RadialGrid const & g, std::mt19937_64 & rng, bool positive)
{
	std::uniform_real_distribution<double> centre(0.0, 0.3 * g.R);
	std::uniform_real_distribution<double> width(0.5, 2.0);
	std::uniform_real_distribution<double> amp(positive ? 0.2 : -1.0, 1.0);
	RadialField f = RadialField::zeros(g);
	for (int b = 0; b < 3; ++b)
	{
		double const c = centre(rng), w = width(rng), a = amp(rng);
		f.values += a * (-((g.radii() - c).square()) / (w * w)).exp();
	}
	return f;
}
}  // namespace hfsys
