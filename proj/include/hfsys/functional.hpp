#pragma once

#include "hfsys/coulomb.hpp"
#include "hfsys/grid.hpp"

#include <array>
#include <optional>
#include <string>

namespace hfsys
{
/// Exponent, coupling and sampled potentials. The scalars are the analytic
/// bounds of the potential family, not grid extrema.
template <class Grid>
struct ProblemParams
{
	double p = 3;
	double beta = 0;
	Field<Grid> V;
	Field<Grid> rho;
	std::optional<Field<Grid>> x_grad_V;  ///< <grad V(x), x>
	std::optional<Field<Grid>> x_grad_rho;  ///< <grad rho(x), x>
	double lambda = 0;  ///< inf V
	double V_max = 0;
	double V_inf = 0;
	double rho_min = 0;
	double rho_max = 0;
	double rho_inf = 0;
	double d0 = 0;

	Grid const & grid() const { return V.grid; }
	/// Throws std::invalid_argument / NonPositivePotential on violated invariants.
	void validate() const;
};

using Params3D = ProblemParams<GridSpec>;
using ParamsRadial = ProblemParams<RadialGrid>;

/// Constant potentials V == a, rho == b (no radial structure needed).
template <class Grid>
ProblemParams<Grid> constant_params(Grid const & g, double p, double beta, double a, double b);

struct EnergyBreakdown
{
	double kinetic = 0;  ///< (1/2) int |grad u|^2 + |grad v|^2
	double external = 0;  ///< (1/2) int V (u^2 + v^2)
	double coulomb = 0;  ///< (1/4) int rho phi (u^2 + v^2)
	double power = 0;  ///< (1/p) int |u|^p + |v|^p
	double cross = 0;  ///< (2 beta / p) int |u|^{p/2} |v|^{p/2}
	double total = 0;

	double scale() const { return kinetic + external + coulomb + std::abs(power) + std::abs(cross); }
};

template <class Grid>
EnergyBreakdown energy(PairState<Grid> const & s, ProblemParams<Grid> const & P);

/// L2 gradient of J split by homogeneity: gradient = linear + coulomb - nonlinear.
template <class Grid>
struct VariationParts
{
	PairState<Grid> linear;  ///< (-Lap + V) s, degree 1
	PairState<Grid> coulomb;  ///< rho phi s, degree 3
	PairState<Grid> nonlinear;  ///< F_beta'(s) / p, degree p - 1
	EnergyBreakdown energy;
	double p = 3;

	PairState<Grid> gradient() const { return linear + coulomb - nonlinear; }
	/// Gradient of J at t s, from the parts at s.
	PairState<Grid> gradient_at_scale(double t) const;
	/// Sum of the L2 norms of the three parts.
	double scale() const;
};

template <class Grid>
VariationParts<Grid> variation_parts(PairState<Grid> const & s, ProblemParams<Grid> const & P);

/// The L2 gradient pair; |u|^{p/2-2} u is read as sign(u)|u|^{p/2-1}.
template <class Grid>
PairState<Grid> first_variation(PairState<Grid> const & s, ProblemParams<Grid> const & P);

/// <J'(s), s> = A + B - C. Throws ZeroState.
template <class Grid>
double nehari_residual(PairState<Grid> const & s, ProblemParams<Grid> const & P);

/// LHS - RHS of the Pohozaev identity. Throws MissingGradientFields.
template <class Grid>
double pohozaev_residual(PairState<Grid> const & s, ProblemParams<Grid> const & P);
/// Sum of absolute values of the Pohozaev terms.
template <class Grid>
double pohozaev_scale(PairState<Grid> const & s, ProblemParams<Grid> const & P);

struct ZVectorAudit
{
	std::array<double, 6> z{};  ///< kinetic, V-mass, x.gradV-mass, coulomb, x.grad rho-coulomb, F
	double theta = 0;  ///< J
	std::array<double, 3> residuals{};  ///< energy, Nehari, Pohozaev rows (relative)
	double t = 0, s = 0, r = 0;  ///< coordinates in the general solution
	double decomposition_residual = 0;  ///< relative misfit of z1, z2, z6 against (theta, t, s, r)
	double sign_quantity = 0;  ///< -(p-2)(z1+z2) + (4-p) z4
	double sign_from_t = 0;  ///< -2 p theta + (p-2)(4-p) t
	double max_residual() const;
};

/// Throws NotASolution if a row residual exceeds 10 * grad_tol.
template <class Grid>
ZVectorAudit z_vector_audit(PairState<Grid> const & s, ProblemParams<Grid> const & P, double grad_tol);

enum class Nontriviality
{
	trivial,
	semitrivial,
	vectorial
};
std::string to_string(Nontriviality c);

template <class Grid>
Nontriviality classify_nontriviality(PairState<Grid> const & s, double tol);

/// J(s) - d0 (p-2) / (2 (6-p)) int (u^2 + v^2).
template <class Grid>
double solution_energy_lower_bound(PairState<Grid> const & s, ProblemParams<Grid> const & P);

/// Functional of a single field with v = 0 and beta irrelevant.
template <class Grid>
double I0(Field<Grid> const & z, ProblemParams<Grid> const & P);

/// [||s||_V^2 + int rho phi q - int |u|^p + |v|^p] / [2 int |u|^{p/2}|v|^{p/2}] with its L2 gradient.
/// A nontrivial solution has this value equal to beta.
template <class Grid>
struct NonexistenceQuotient
{
	double value = 0;
	double numerator = 0;
	double denominator = 0;
	PairState<Grid> gradient;
};

/// value is +inf when the denominator vanishes (gradient then left empty).
template <class Grid>
NonexistenceQuotient<Grid> nonexistence_quotient(PairState<Grid> const & s, ProblemParams<Grid> const & P);

struct GradientCheck
{
	double analytic = 0;  ///< <J'(s), w>
	double finite_diff = 0;  ///< central difference of J along w
	double relative = 0;  ///< |analytic - finite_diff| / (||J'(s)|| ||w||)
};

/// Central-difference check of the first variation along w with step h.
template <class Grid>
GradientCheck gradient_check(PairState<Grid> const & s, PairState<Grid> const & w, ProblemParams<Grid> const & P,
	double h = 1e-5);

/// F_beta(u, v) pointwise.
Array F_beta(Array const & u, Array const & v, double beta, double p);
}  // namespace hfsys
