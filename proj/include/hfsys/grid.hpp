#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>

namespace hfsys
{
using Array = Eigen::ArrayXd;
using Vec3 = Eigen::Vector3d;
using Index = Eigen::Index;

/// Cell-centred cube [-L, L]^3 with n points per axis; x_i = -L + (i+1/2) h.
struct GridSpec
{
	int n = 0;
	double L = 0;
	double h = 0;

	/// Throws std::invalid_argument unless n >= 8, n even, L > 0.
	static GridSpec make(int n, double L);

	Index size() const { return Index(n) * n * n; }
	double coord(int i) const { return -L + (i + 0.5) * h; }
	double cell_volume() const { return h * h * h; }
	Index index(int i, int j, int k) const { return (Index(i) * n + j) * n + k; }

	bool operator==(GridSpec const &) const = default;
};

/// Midpoint radial grid r_i = (i+1/2) dr, dr = R/m, quadrature weight 4 pi r^2 dr.
struct RadialGrid
{
	int m = 0;
	double R = 0;
	double dr = 0;

	static RadialGrid make(int m, double R);

	Index size() const { return m; }
	double r(int i) const { return (i + 0.5) * dr; }
	Array radii() const;
	Array weights() const;

	bool operator==(RadialGrid const &) const = default;
};

template <class Grid>
struct Field
{
	Grid grid;
	Array values;

	static Field zeros(Grid const & g) { return {g, Array::Zero(g.size())}; }
};

using Field3D = Field<GridSpec>;
using RadialField = Field<RadialGrid>;

/// The unknown (u, v). Both components live on the same grid.
template <class Grid>
struct PairState
{
	Field<Grid> u;
	Field<Grid> v;

	Grid const & grid() const { return u.grid; }
	static PairState zeros(Grid const & g) { return {Field<Grid>::zeros(g), Field<Grid>::zeros(g)}; }
};

using Pair3D = PairState<GridSpec>;
using PairRadial = PairState<RadialGrid>;

// Sampling.
Field3D sample(GridSpec const & g, std::function<double(Vec3 const &)> const & f);
RadialField sample(RadialGrid const & g, std::function<double(double)> const & f);
/// |x - center| at every grid point.
Array distance(GridSpec const & g, Vec3 const & center = Vec3::Zero());

// Quadrature.
double integrate(GridSpec const & g, Array const & values);
double integrate(RadialGrid const & g, Array const & values);
template <class Grid>
double integrate(Field<Grid> const & f)
{
	return integrate(f.grid, f.values);
}
template <class Grid>
double inner(Grid const & g, Array const & a, Array const & b)
{
	return integrate(g, a * b);
}
template <class Grid>
double inner(PairState<Grid> const & a, PairState<Grid> const & b)
{
	return inner(a.grid(), a.u.values, b.u.values) + inner(a.grid(), a.v.values, b.v.values);
}
template <class Grid>
double l2_norm(PairState<Grid> const & s)
{
	return std::sqrt(inner(s, s));
}

// Spectral differential operators.
/// -Laplacian; Fourier on the periodic box, sine series of r*f on the ray.
Array neg_laplacian(GridSpec const & g, Array const & f);
Array neg_laplacian(RadialGrid const & g, Array const & f);
/// Integral of |grad f|^2, equal to <f, -Lap f>.
double gradient_sq_integral(GridSpec const & g, Array const & f);
double gradient_sq_integral(RadialGrid const & g, Array const & f);
template <class Grid>
double gradient_sq_integral(Field<Grid> const & f)
{
	return gradient_sq_integral(f.grid, f.values);
}
/// Solves (-Lap + shift) x = f spectrally (shift > 0).
Array shifted_inverse_laplacian(GridSpec const & g, Array const & f, double shift);
Array shifted_inverse_laplacian(RadialGrid const & g, Array const & f, double shift);

/// (int |grad u|^2 + |grad v|^2 + V (u^2 + v^2))^{1/2}. Throws NonPositivePotential if min V <= 0.
template <class Grid>
double norm_V(PairState<Grid> const & s, Field<Grid> const & V);

/// Samples f(|x - center|) with linear interpolation in r; zero beyond R.
Field3D embed_radial(RadialField const & f, Vec3 const & center, GridSpec const & g);
/// Shell averages of a cube field around `center` onto a radial grid (empty shells interpolated).
RadialField rebin_radial(Field3D const & f, Vec3 const & center, RadialGrid const & g);

/// Integral of u^2 + v^2 over |x| > 0.8 L (cube) or r > 0.8 R (ray).
double boundary_mass(Pair3D const & s);
double boundary_mass(PairRadial const & s);

/// Integral of x (u^2 + v^2) divided by the mass.
Vec3 center_of_mass(Pair3D const & s);

// Pair arithmetic.
template <class Grid>
PairState<Grid> operator+(PairState<Grid> a, PairState<Grid> const & b)
{
	a.u.values += b.u.values;
	a.v.values += b.v.values;
	return a;
}
template <class Grid>
PairState<Grid> operator-(PairState<Grid> a, PairState<Grid> const & b)
{
	a.u.values -= b.u.values;
	a.v.values -= b.v.values;
	return a;
}
template <class Grid>
PairState<Grid> operator*(double t, PairState<Grid> a)
{
	a.u.values *= t;
	a.v.values *= t;
	return a;
}
/// a + t b
template <class Grid>
PairState<Grid> axpy(PairState<Grid> const & a, double t, PairState<Grid> const & b)
{
	PairState<Grid> out = a;
	out.u.values += t * b.u.values;
	out.v.values += t * b.v.values;
	return out;
}
}  // namespace hfsys
