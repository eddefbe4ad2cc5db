#pragma once

#include "hfsys/grid.hpp"

#include <algorithm>

namespace hfsys
{
/// Integral of 1/|x| over the unit cube centred at the origin.
/// Closed form 3 ln(2 + sqrt 3) - pi/2; the test suite re-derives it by quadrature.
inline constexpr double kOriginCellIntegral = 2.380077363979553;

template <class Grid>
struct CoulombResult
{
	Field<Grid> phi;  ///< phi(x) = int rho(y) q(y) / |x - y| dy
	double energy;  ///< int rho phi q
};

/// Free-space potential of a charge density: int c(y)/|x-y| dy.
/// Cube: zero-padded 2n convolution, origin cell uses the cell average of 1/|x|.
/// Ray: shell formula with the self cell integrated exactly.
Array coulomb_potential(GridSpec const & g, Array const & charge);
Array coulomb_potential(RadialGrid const & g, Array const & charge);

/// Charge q = rho (u^2 + v^2). Throws NonPositivePotential if min rho <= 0.
template <class Grid>
CoulombResult<Grid> solve_coulomb(PairState<Grid> const & s, Field<Grid> const & rho);

inline CoulombResult<GridSpec> solve_coulomb_3d(Pair3D const & s, Field3D const & rho)
{
	return solve_coulomb(s, rho);
}

/// Shell-theorem potential of a radial charge.
RadialField solve_coulomb_radial(RadialField const & q);

/// Symmetric bilinear form int c1 * potential(c2).
template <class Grid>
double coulomb_cross(Grid const & g, Array const & c1, Array const & c2)
{
	return integrate(g, c1 * coulomb_potential(g, c2));
}

/// Young-weighted Lions splitting: K int rho q |w| <= t int |grad w|^2 + K^2/(4t) int rho phi q,
/// for w = u and w = v, q = u^2 + v^2.
struct SplittingResidual
{
	double lhs_u = 0, rhs_u = 0;
	double lhs_v = 0, rhs_v = 0;

	double margin() const { return std::min(rhs_u - lhs_u, rhs_v - lhs_v); }
	double scale() const { return std::max({lhs_u, rhs_u, lhs_v, rhs_v, 0.0}); }
};

/// Named coefficient choices (K, t). With rho == k:
///   lions:      sqrt2 k int q|u| <= int|grad u|^2 + (k/2) int phi_k q
///   weighted:   (1/sqrt8) int rho q|u| <= (1/4) int|grad u|^2 + (1/8) int rho phi q
///   appendix:   (k/2) int q|u| <= (1/2) int|grad u|^2 + (k/8) int phi_k q
enum class SplitVariant
{
	lions,
	weighted,
	appendix
};

struct SplitWeights
{
	double K;
	double t;
};
SplitWeights split_weights(SplitVariant v);

template <class Grid>
SplittingResidual check_splitting_inequality(
	PairState<Grid> const & s, Field<Grid> const & rho, double K, double t);

template <class Grid>
SplittingResidual check_splitting_inequality(
	PairState<Grid> const & s, Field<Grid> const & rho, SplitVariant v)
{
	auto const w = split_weights(v);
	return check_splitting_inequality(s, rho, w.K, w.t);
}

/// (16 2^{1/3} rho_max^2 / (3 sqrt3 pi lambda^{3/2})) ||(u,v)||^4 - int rho phi q, with the V-norm.
template <class Grid>
double check_hls_bound(
	PairState<Grid> const & s,
	Field<Grid> const & rho,
	Field<Grid> const & V,
	double rho_max,
	double lambda);
}  // namespace hfsys
