#include "hfsys/coulomb.hpp"

#include "hfsys/errors.hpp"
#include "fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

namespace hfsys
{
using detail::cplx;
using detail::CubeFft;
using detail::FftBuffer;
using std::numbers::pi;

namespace
{
// Real spectrum of the padded kernel, pre-scaled by h^3 / (2n)^3.
std::vector<double> const & kernel_spectrum(GridSpec const & g)
{
	static std::map<std::pair<int, double>, std::unique_ptr<std::vector<double>>> cache;
	static std::mutex mutex;
	std::lock_guard lock{mutex};
	auto & slot = cache[{g.n, g.h}];
	if (slot)
		return *slot;

	int const N = 2 * g.n;
	auto const & fft = CubeFft::get(N);
	FftBuffer<double> r(fft.real_size());
	FftBuffer<cplx> c(fft.spectrum_size());
	auto wrap = [N](int a) { return a < N / 2 ? a : a - N; };
	for (int a = 0; a < N; ++a)
		for (int b = 0; b < N; ++b)
			for (int d = 0; d < N; ++d)
			{
				double const x = wrap(a), y = wrap(b), z = wrap(d);
				double const rr = std::sqrt(x * x + y * y + z * z);
				r[(std::size_t(a) * N + b) * N + d] =
					rr == 0 ? kOriginCellIntegral / g.h : 1.0 / (rr * g.h);
			}
	fft.forward(r.data(), c.data());
	double const scale = g.cell_volume() / double(fft.real_size());
	auto spec = std::make_unique<std::vector<double>>(fft.spectrum_size());
	for (std::size_t i = 0; i < spec->size(); ++i)
		(*spec)[i] = c[i].real() * scale;
	slot = std::move(spec);
	return *slot;
}
}  // namespace

Array coulomb_potential(GridSpec const & g, Array const & charge)
{
	int const n = g.n, N = 2 * n;
	auto const & fft = CubeFft::get(N);
	auto const & kernel = kernel_spectrum(g);
	FftBuffer<double> r(fft.real_size());
	FftBuffer<cplx> c(fft.spectrum_size());
	std::fill(r.data(), r.data() + r.size(), 0.0);
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
			std::copy_n(&charge[g.index(i, j, 0)], n, &r[(std::size_t(i) * N + j) * N]);
	fft.forward(r.data(), c.data());
	for (std::size_t i = 0; i < c.size(); ++i)
		c[i] *= kernel[i];
	fft.backward(c.data(), r.data());
	Array out(g.size());
	for (int i = 0; i < n; ++i)
		for (int j = 0; j < n; ++j)
			std::copy_n(&r[(std::size_t(i) * N + j) * N], n, &out[g.index(i, j, 0)]);
	return out;
}

Array coulomb_potential(RadialGrid const & g, Array const & charge)
{
	int const m = g.m;
	double const dr = g.dr;
	Array const r = g.radii();
	Array out(m);
	// Inner part: (4 pi / r) sum_{j<i} r_j^2 dr c_j; outer part: 4 pi sum_{j>i} r_j dr c_j.
	double inner_sum = 0;
	for (int i = 0; i < m; ++i)
	{
		out[i] = 4 * pi * inner_sum / r[i];
		inner_sum += r[i] * r[i] * dr * charge[i];
	}
	double outer_sum = 0;
	for (int i = m - 1; i >= 0; --i)
	{
		out[i] += 4 * pi * outer_sum;
		outer_sum += r[i] * dr * charge[i];
	}
	// Self cell: int over the cell of s^2 / max(r, s) ds.
	Array const self = 4 * pi * (r * dr - dr * dr / 8 + dr * dr * dr / (24 * r));
	return out + self * charge;
}

template <class Grid>
CoulombResult<Grid> solve_coulomb(PairState<Grid> const & s, Field<Grid> const & rho)
{
	if (rho.values.minCoeff() <= 0)
		throw NonPositivePotential("solve_coulomb: rho must be positive");
	Grid const & g = s.grid();
	Array const q = rho.values * (s.u.values.square() + s.v.values.square());
	Field<Grid> phi{g, coulomb_potential(g, q)};
	double const energy = integrate(g, q * phi.values);
	return {std::move(phi), energy};
}

template CoulombResult<GridSpec> solve_coulomb(Pair3D const &, Field3D const &);
template CoulombResult<RadialGrid> solve_coulomb(PairRadial const &, RadialField const &);

RadialField solve_coulomb_radial(RadialField const & q)
{
	return {q.grid, coulomb_potential(q.grid, q.values)};
}

SplitWeights split_weights(SplitVariant v)
{
	switch (v)
	{
	case SplitVariant::lions:
		return {std::numbers::sqrt2, 1.0};
	case SplitVariant::weighted:
		return {1.0 / std::sqrt(8.0), 0.25};
	case SplitVariant::appendix:
		return {0.5, 0.5};
	}
	return {0, 1};
}

template <class Grid>
SplittingResidual check_splitting_inequality(
	PairState<Grid> const & s, Field<Grid> const & rho, double K, double t)
{
	auto const coul = solve_coulomb(s, rho);
	Grid const & g = s.grid();
	Array const rq = rho.values * (s.u.values.square() + s.v.values.square());
	double const tail = K * K / (4 * t) * coul.energy;
	SplittingResidual out;
	out.lhs_u = K * integrate(g, rq * s.u.values.abs());
	out.rhs_u = t * gradient_sq_integral(s.u) + tail;
	out.lhs_v = K * integrate(g, rq * s.v.values.abs());
	out.rhs_v = t * gradient_sq_integral(s.v) + tail;
	return out;
}

template SplittingResidual check_splitting_inequality(
	Pair3D const &, Field3D const &, double, double);
template SplittingResidual check_splitting_inequality(
	PairRadial const &, RadialField const &, double, double);

template <class Grid>
double check_hls_bound(
	PairState<Grid> const & s,
	Field<Grid> const & rho,
	Field<Grid> const & V,
	double rho_max,
	double lambda)
{
	double const norm = norm_V(s, V);
	double const constant =
		16 * std::cbrt(2.0) * rho_max * rho_max / (3 * std::sqrt(3.0) * pi * std::pow(lambda, 1.5));
	return constant * std::pow(norm, 4) - solve_coulomb(s, rho).energy;
}

template double check_hls_bound(
	Pair3D const &, Field3D const &, Field3D const &, double, double);
template double check_hls_bound(
	PairRadial const &, RadialField const &, RadialField const &, double, double);
}  // namespace hfsys
