#pragma once

#include "hfsys/functional.hpp"

#include <array>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace hfsys
{
// Analytic radial potential families.

/// depth * exp(-|(r - radius) / width|^shape); radius 0 gives a well at the origin,
/// shape > 2 a flat-bottomed one.
struct GaussianTerm
{
	double depth = 0;
	double radius = 0;
	double width = 1;
	double shape = 2;
};

/// f(r) = far - sum of terms, with r f'(r) in closed form.
struct RadialProfile
{
	double far = 1;
	std::vector<GaussianTerm> terms;
	double eps = 1;  ///< evaluated at eps r

	double value(double r) const;
	/// r f'(r) of the scaled profile.
	double r_deriv(double r) const;
	/// inf and sup over r >= 0 (scan plus golden refinement).
	double inf() const;
	double sup() const;
	double at_infinity() const { return far; }
	std::string describe() const;
};

RadialProfile constant_profile(double a);
/// far - depth exp(-|r / width|^shape)
RadialProfile gaussian_well(double far, double depth, double width, double shape = 2);
/// far - depth exp(-|(r - radius) / width|^shape)
RadialProfile annular_well(double far, double depth, double radius, double width, double shape = 2);

struct Potentials
{
	RadialProfile V;
	RadialProfile rho;
};

/// V(eps x), rho(eps x).
Potentials scale_potentials(Potentials const & pot, double eps);

/// inf over r of 2 V + r V'.
double d0_of(RadialProfile const & V);

/// Samples V, rho and their x.grad fields; scalar bounds come from the profiles.
template <class Grid>
ProblemParams<Grid> make_params(Grid const & g, double p, double beta, Potentials const & pot);

/// Lebesgue measure of {x : V^{3-p} rho^{p-2} < level} for radial profiles (radial quadrature out to
/// r_max); +inf if the far field lies in the set.
double sublevel_measure(Potentials const & pot, double p, double level, double r_max = 200, int points = 200000);

// Test-function builders.

/// (sqrt(s) z, sqrt(1-s) z). Throws ZeroState for z == 0, std::invalid_argument for s outside [0, 1].
template <class Grid>
PairState<Grid> coupled_ansatz(Field<Grid> const & z, double s);

/// 1 on r <= R/2, 0 on r >= R, quintic smoothstep in between.
double cutoff_profile(double r, double R);

Field3D cutoff(Field3D const & f, double R, Vec3 const & center = Vec3::Zero());
Pair3D cutoff(Pair3D const & s, double R, Vec3 const & center = Vec3::Zero());
PairRadial cutoff(PairRadial const & s, double R);

/// Shift by whole cells with zero fill. Throws BoxTooSmall if nonzero values leave the box.
Field3D shift_cells(Field3D const & f, std::array<int, 3> const & cells);
Pair3D shift_cells(Pair3D const & s, std::array<int, 3> const & cells);

struct MultibumpSpec
{
	int N = 1;
	double R0 = 1;  ///< support radius of the single bump
	Vec3 e = Vec3::UnitX();
	Vec3 x0 = Vec3::Zero();  ///< centre of the row of bumps
	double spacing = 0;  ///< 0: N^3
};

struct Multibump
{
	Pair3D pair;
	std::vector<Vec3> centers;
	std::vector<std::array<int, 3>> cells;  ///< shift of each copy
	double spacing = 0;
};

/// N copies of a bump centred at the origin, placed at x0 + (i - (N-1)/2) spacing e,
/// snapped to whole cells. Throws std::invalid_argument if spacing <= 2 R0, BoxTooSmall
/// if a support leaves the box.
Multibump build_multibump(Pair3D const & bump, MultibumpSpec const & spec);

/// Energy ledger of a multibump state against its single bumps.
struct MultibumpLedger
{
	EnergyBreakdown total;
	EnergyBreakdown single_sum;  ///< each translated bump evaluated alone, summed
	double self_coulomb = 0;
	double cross_coulomb = 0;  ///< total.coulomb - self_coulomb
	double point_charge = 0;  ///< (1/4) sum_{i != j} Q_i Q_j / |c_i - c_j|, Q_i = int rho q_i
	double cross_bound = 0;  ///< (1/4) rho_max^2 (N^2 - N) M^2 / (spacing - 2 R0)
	double additivity_residual = 0;  ///< relative misfit of the local terms
};

MultibumpLedger multibump_ledger(Multibump const & mb, Pair3D const & bump, Params3D const & P, double R0);

// Random states for property checks.

/// Sum of Gaussians with random centres in the inner 70% of the box, widths in [0.6, 1.6],
/// amplitudes in [-1, 1] (or [0.2, 1] when positive).
Field3D random_bumps(GridSpec const & g, std::mt19937_64 & rng, int count = 3, bool positive = false);
Pair3D random_pair(GridSpec const & g, std::mt19937_64 & rng, bool positive = false);
/// Three Gaussian shells with centres in [0, 0.3 R] and widths in [0.5, 2].
RadialField random_radial(RadialGrid const & g, std::mt19937_64 & rng, bool positive = false);
}  // namespace hfsys
