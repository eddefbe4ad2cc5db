#pragma once

#include "hfsys/functional.hpp"

#include <optional>
#include <string>

namespace hfsys
{
/// phi(t) = A t^2/2 + B t^4/4 - C t^p/p along the ray t -> t s.
struct FiberingCoefficients
{
	double A = 0;  ///< ||(u,v)||^2
	double B = 0;  ///< int rho phi (u^2 + v^2)
	double C = 0;  ///< int F_beta

	double phi(double t, double p) const;
	double dphi(double t, double p) const;
	double d2phi(double t, double p) const;
	double scale() const { return A + B + std::abs(C); }
};

FiberingCoefficients coefficients(EnergyBreakdown const & e, double p);

/// Throws ZeroState for s == 0.
template <class Grid>
FiberingCoefficients coefficients(PairState<Grid> const & s, ProblemParams<Grid> const & P);

struct FiberingRoots
{
	std::optional<double> t_minus;
	std::optional<double> t_plus;
	double t_dip = 0;
	double dip_value = 0;  ///< eta(t_dip) + B
	bool degenerate = false;  ///< |dip_value| below 1e-9 of its scale
};

/// eta(t) = A t^-2 - C t^{p-4}; the roots of phi' solve eta(t) = -B.
double eta(FiberingCoefficients const & c, double t, double p);

/// Throws NoPositivePower if C <= 0, std::invalid_argument if A <= 0 or p outside (2, 4).
FiberingRoots find_roots(FiberingCoefficients const & c, double p);

enum class NehariClass
{
	Nminus,
	Nzero,
	Nplus,
	NotOnNehari
};
std::string to_string(NehariClass c);

/// The two second-variation forms at t = 1 on the Nehari manifold:
/// q1 = -(p-2)A + (4-p)B and q2 = -2A + (4-p)C.
struct SecondVariation
{
	double q1;
	double q2;
};
SecondVariation second_variation(FiberingCoefficients const & c, double p);

NehariClass classify(FiberingCoefficients const & c, double p, double tol);

template <class Grid>
NehariClass classify(PairState<Grid> const & s, ProblemParams<Grid> const & P, double tol)
{
	return classify(coefficients(s, P), P.p, tol);
}

enum class Branch
{
	minus,
	plus
};

/// Scale t with t s on the requested branch. Throws RootAbsent (also when degenerate).
double nehari_scale(FiberingCoefficients const & c, double p, Branch branch);

template <class Grid>
PairState<Grid> project_to_nehari(PairState<Grid> const & s, ProblemParams<Grid> const & P, Branch branch)
{
	return nehari_scale(coefficients(s, P), P.p, branch) * s;
}

enum class Filtration
{
	N1,
	N2,
	outside
};
std::string to_string(Filtration f);

/// Membership from the energy level and the norm threshold. Throws std::invalid_argument off N.
Filtration filtration_member(FiberingCoefficients const & c, double energy, double p, double lambda, double rho_max,
	double tol = 1e-8);

template <class Grid>
Filtration filtration_member(PairState<Grid> const & s, ProblemParams<Grid> const & P, double tol = 1e-8)
{
	auto const e = energy(s, P);
	return filtration_member(coefficients(e, P.p), e.total, P.p, P.lambda, P.rho_max, tol);
}
}  // namespace hfsys
