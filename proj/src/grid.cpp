#include "hfsys/grid.hpp"

#include "hfsys/errors.hpp"
#include "fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hfsys
{
using detail::cplx;
using detail::CubeFft;
using detail::FftBuffer;
using detail::SineFft;
using std::numbers::pi;

GridSpec GridSpec::make(int n, double L)
{
	if (n < 8 || n % 2 != 0)
		throw std::invalid_argument("GridSpec: n must be even and >= 8, got " + std::to_string(n));
	if (!(L > 0))
		throw std::invalid_argument("GridSpec: L must be positive");
	return {n, L, 2 * L / n};
}

RadialGrid RadialGrid::make(int m, double R)
{
	if (m < 4)
		throw std::invalid_argument("RadialGrid: m must be >= 4");
	if (!(R > 0))
		throw std::invalid_argument("RadialGrid: R must be positive");
	return {m, R, R / m};
}

Array RadialGrid::radii() const
{
	return (Array::LinSpaced(m, 0, m - 1) + 0.5) * dr;
}

Array RadialGrid::weights() const
{
	return 4 * pi * radii().square() * dr;
}

Field3D sample(GridSpec const & g, std::function<double(Vec3 const &)> const & f)
{
	Field3D out = Field3D::zeros(g);
	for (int i = 0; i < g.n; ++i)
		for (int j = 0; j < g.n; ++j)
			for (int k = 0; k < g.n; ++k)
				out.values[g.index(i, j, k)] = f(Vec3{g.coord(i), g.coord(j), g.coord(k)});
	return out;
}

RadialField sample(RadialGrid const & g, std::function<double(double)> const & f)
{
	RadialField out = RadialField::zeros(g);
	for (int i = 0; i < g.m; ++i)
		out.values[i] = f(g.r(i));
	return out;
}

Array distance(GridSpec const & g, Vec3 const & center)
{
	return sample(g, [&](Vec3 const & x) { return (x - center).norm(); }).values;
}

double integrate(GridSpec const & g, Array const & values)
{
	return values.sum() * g.cell_volume();
}

double integrate(RadialGrid const & g, Array const & values)
{
	return (values * g.weights()).sum();
}

namespace
{
// Squared wavenumber per axis index; the Nyquist mode keeps (pi/h)^2.
Array axis_k2(GridSpec const & g)
{
	Array k2(g.n);
	double const dk = 2 * pi / (g.n * g.h);
	for (int i = 0; i < g.n; ++i)
	{
		int const m = i <= g.n / 2 ? i : i - g.n;
		k2[i] = (m * dk) * (m * dk);
	}
	return k2;
}

template <class Mult>
Array apply_spectral(GridSpec const & g, Array const & f, Mult && mult)
{
	auto const & fft = CubeFft::get(g.n);
	FftBuffer<double> r(fft.real_size());
	FftBuffer<cplx> c(fft.spectrum_size());
	std::copy(f.data(), f.data() + f.size(), r.data());
	fft.forward(r.data(), c.data());
	Array const k2 = axis_k2(g);
	int const nz = g.n / 2 + 1;
	double const norm = 1.0 / double(fft.real_size());
	for (int i = 0; i < g.n; ++i)
		for (int j = 0; j < g.n; ++j)
			for (int k = 0; k < nz; ++k)
				c[(std::size_t(i) * g.n + j) * nz + k] *= mult(k2[i] + k2[j] + k2[k]) * norm;
	fft.backward(c.data(), r.data());
	Array out(f.size());
	std::copy(r.data(), r.data() + f.size(), out.data());
	return out;
}

template <class Mult>
Array apply_sine(RadialGrid const & g, Array const & y, Mult && mult)
{
	auto const & fft = SineFft::get(g.m);
	FftBuffer<double> a(g.m), b(g.m);
	std::copy(y.data(), y.data() + g.m, a.data());
	fft.forward(a.data(), b.data());
	for (int k = 0; k < g.m; ++k)
	{
		double const kappa = (k + 1) * pi / g.R;
		b[k] *= mult(kappa * kappa) / (2.0 * g.m);
	}
	fft.backward(b.data(), a.data());
	Array out(g.m);
	std::copy(a.data(), a.data() + g.m, out.data());
	return out;
}
}  // namespace

Array neg_laplacian(GridSpec const & g, Array const & f)
{
	return apply_spectral(g, f, [](double k2) { return k2; });
}

Array neg_laplacian(RadialGrid const & g, Array const & f)
{
	Array const r = g.radii();
	return apply_sine(g, r * f, [](double k2) { return k2; }) / r;
}

double gradient_sq_integral(GridSpec const & g, Array const & f)
{
	auto const & fft = CubeFft::get(g.n);
	FftBuffer<double> r(fft.real_size());
	FftBuffer<cplx> c(fft.spectrum_size());
	std::copy(f.data(), f.data() + f.size(), r.data());
	fft.forward(r.data(), c.data());
	Array const k2 = axis_k2(g);
	int const nz = g.n / 2 + 1;
	double sum = 0;
	for (int i = 0; i < g.n; ++i)
		for (int j = 0; j < g.n; ++j)
			for (int k = 0; k < nz; ++k)
			{
				double const w = (k == 0 || k == g.n / 2) ? 1.0 : 2.0;
				sum += w * (k2[i] + k2[j] + k2[k]) * std::norm(c[(std::size_t(i) * g.n + j) * nz + k]);
			}
	return sum * g.cell_volume() / double(fft.real_size());
}

double gradient_sq_integral(RadialGrid const & g, Array const & f)
{
	return inner(g, f, neg_laplacian(g, f));
}

Array shifted_inverse_laplacian(GridSpec const & g, Array const & f, double shift)
{
	return apply_spectral(g, f, [shift](double k2) { return 1.0 / (k2 + shift); });
}

Array shifted_inverse_laplacian(RadialGrid const & g, Array const & f, double shift)
{
	Array const r = g.radii();
	return apply_sine(g, r * f, [shift](double k2) { return 1.0 / (k2 + shift); }) / r;
}

template <class Grid>
double norm_V(PairState<Grid> const & s, Field<Grid> const & V)
{
	if (V.values.minCoeff() <= 0)
		throw NonPositivePotential("norm_V: potential must be positive");
	Grid const & g = s.grid();
	double const sq = gradient_sq_integral(s.u) + gradient_sq_integral(s.v)
		+ integrate(g, V.values * (s.u.values.square() + s.v.values.square()));
	return std::sqrt(std::max(sq, 0.0));
}

template double norm_V(Pair3D const &, Field3D const &);
template double norm_V(PairRadial const &, RadialField const &);

Field3D embed_radial(RadialField const & f, Vec3 const & center, GridSpec const & g)
{
	RadialGrid const & rg = f.grid;
	return sample(g, [&](Vec3 const & x) {
		double const r = (x - center).norm();
		if (r >= rg.R)
			return 0.0;
		double const t = r / rg.dr - 0.5;
		if (t <= 0)
			return f.values[0];
		int const i = int(t);
		double const frac = t - i;
		double const hi = i + 1 < rg.m ? f.values[i + 1] : 0.0;
		return (1 - frac) * f.values[i] + frac * hi;
	});
}

RadialField rebin_radial(Field3D const & f, Vec3 const & center, RadialGrid const & rg)
{
	Array sum = Array::Zero(rg.m);
	Array count = Array::Zero(rg.m);
	GridSpec const & g = f.grid;
	for (int i = 0; i < g.n; ++i)
		for (int j = 0; j < g.n; ++j)
			for (int k = 0; k < g.n; ++k)
			{
				double const r = (Vec3{g.coord(i), g.coord(j), g.coord(k)} - center).norm();
				int const b = int(r / rg.dr);
				if (b < rg.m)
				{
					sum[b] += f.values[g.index(i, j, k)];
					count[b] += 1;
				}
			}
	RadialField out = RadialField::zeros(rg);
	int last = -1;
	for (int b = 0; b < rg.m; ++b)
	{
		if (count[b] == 0)
			continue;
		out.values[b] = sum[b] / count[b];
		if (last >= 0 && b - last > 1)
			for (int q = last + 1; q < b; ++q)
			{
				double const w = double(q - last) / (b - last);
				out.values[q] = (1 - w) * out.values[last] + w * out.values[b];
			}
		else if (last < 0)
			for (int q = 0; q < b; ++q)
				out.values[q] = out.values[b];
		last = b;
	}
	return out;
}

double boundary_mass(Pair3D const & s)
{
	GridSpec const & g = s.grid();
	Array const r = distance(g);
	Array const mask = (r > 0.8 * g.L).cast<double>();
	return integrate(g, mask * (s.u.values.square() + s.v.values.square()));
}

double boundary_mass(PairRadial const & s)
{
	RadialGrid const & g = s.grid();
	Array const mask = (g.radii() > 0.8 * g.R).cast<double>();
	return integrate(g, mask * (s.u.values.square() + s.v.values.square()));
}

Vec3 center_of_mass(Pair3D const & s)
{
	GridSpec const & g = s.grid();
	Array const q = s.u.values.square() + s.v.values.square();
	double const mass = q.sum();
	if (mass <= 0)
		throw ZeroState("center_of_mass: zero state");
	Vec3 c = Vec3::Zero();
	for (int i = 0; i < g.n; ++i)
		for (int j = 0; j < g.n; ++j)
			for (int k = 0; k < g.n; ++k)
				c += q[g.index(i, j, k)] * Vec3{g.coord(i), g.coord(j), g.coord(k)};
	return c / mass;
}
}  // namespace hfsys
