#include "hfsys/fibering.hpp"

#include "hfsys/bounds.hpp"
#include "hfsys/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace hfsys
{
double FiberingCoefficients::phi(double t, double p) const
{
	return 0.5 * A * t * t + 0.25 * B * t * t * t * t - C * std::pow(t, p) / p;
}

double FiberingCoefficients::dphi(double t, double p) const
{
	return A * t + B * t * t * t - C * std::pow(t, p - 1);
}

double FiberingCoefficients::d2phi(double t, double p) const
{
	return A + 3 * B * t * t - (p - 1) * C * std::pow(t, p - 2);
}

FiberingCoefficients coefficients(EnergyBreakdown const & e, double p)
{
	return {2 * (e.kinetic + e.external), 4 * e.coulomb, p * (e.power + e.cross)};
}

template <class Grid>
FiberingCoefficients coefficients(PairState<Grid> const & s, ProblemParams<Grid> const & P)
{
	if (s.u.values.matrix().squaredNorm() == 0 && s.v.values.matrix().squaredNorm() == 0)
		throw ZeroState("coefficients: zero state");
	return coefficients(energy(s, P), P.p);
}

template FiberingCoefficients coefficients(Pair3D const &, Params3D const &);
template FiberingCoefficients coefficients(PairRadial const &, ParamsRadial const &);

double eta(FiberingCoefficients const & c, double t, double p)
{
	return c.A / (t * t) - c.C * std::pow(t, p - 4);
}

namespace
{
// g(lo) and g(hi) have opposite signs.
template <class G>
double bisect_root(G && g, double lo, double hi)
{
	bool const lo_pos = g(lo) > 0;
	for (int it = 0; it < 200; ++it)
	{
		double const mid = 0.5 * (lo + hi);
		if (mid <= lo || mid >= hi)
			break;
		((g(mid) > 0) == lo_pos ? lo : hi) = mid;
	}
	return 0.5 * (lo + hi);
}
}  // namespace

FiberingRoots find_roots(FiberingCoefficients const & c, double p)
{
	if (!(p > 2 && p < 4))
		throw std::invalid_argument("find_roots: p must lie in (2, 4)");
	if (!(c.A > 0) || c.B < 0)
		throw std::invalid_argument("find_roots: need A > 0 and B >= 0");
	if (!(c.C > 0))
		throw NoPositivePower("find_roots: C <= 0, the ray never meets the Nehari manifold");

	FiberingRoots r;
	r.t_dip = std::pow(2 * c.A / ((4 - p) * c.C), 1 / (p - 2));
	double const e_dip = eta(c, r.t_dip, p);
	r.dip_value = e_dip + c.B;
	double const dip_scale = c.A / (r.t_dip * r.t_dip) + c.C * std::pow(r.t_dip, p - 4) + c.B;
	auto g = [&](double t) { return eta(c, t, p) + c.B; };

	if (c.B == 0)
	{
		r.t_minus = std::pow(c.A / c.C, 1 / (p - 2));
		return r;
	}
	if (std::abs(r.dip_value) < 1e-9 * dip_scale)
	{
		r.degenerate = true;
		return r;
	}
	if (r.dip_value > 0)
		return r;

	double lo = r.t_dip;
	while (g(lo) <= 0)
		lo *= 0.5;
	r.t_minus = bisect_root(g, lo, r.t_dip);

	double hi = r.t_dip;
	while (g(hi) <= 0)
	{
		hi *= 2;
		if (hi > std::ldexp(1.0, 60))
			throw NoConvergence("find_roots: upper root beyond 2^60");
	}
	r.t_plus = bisect_root(g, r.t_dip, hi);
	return r;
}

std::string to_string(NehariClass c)
{
	switch (c)
	{
	case NehariClass::Nminus:
		return "N-";
	case NehariClass::Nzero:
		return "N0";
	case NehariClass::Nplus:
		return "N+";
	case NehariClass::NotOnNehari:
		return "off";
	}
	return "unknown";
}

SecondVariation second_variation(FiberingCoefficients const & c, double p)
{
	return {-(p - 2) * c.A + (4 - p) * c.B, -2 * c.A + (4 - p) * c.C};
}

NehariClass classify(FiberingCoefficients const & c, double p, double tol)
{
	double const scale = c.scale();
	if (std::abs(c.A + c.B - c.C) >= tol * scale)
		return NehariClass::NotOnNehari;
	double const q1 = second_variation(c, p).q1;
	if (std::abs(q1) < tol * scale)
		return NehariClass::Nzero;
	return q1 < 0 ? NehariClass::Nminus : NehariClass::Nplus;
}

double nehari_scale(FiberingCoefficients const & c, double p, Branch branch)
{
	auto const r = find_roots(c, p);
	if (r.degenerate)
		throw RootAbsent("nehari_scale: degenerate contact with N0");
	auto const & t = branch == Branch::minus ? r.t_minus : r.t_plus;
	if (!t)
		throw RootAbsent("nehari_scale: requested root absent");
	return *t;
}

std::string to_string(Filtration f)
{
	switch (f)
	{
	case Filtration::N1:
		return "N1";
	case Filtration::N2:
		return "N2";
	case Filtration::outside:
		return "outside";
	}
	return "unknown";
}

Filtration filtration_member(FiberingCoefficients const & c, double energy, double p, double lambda, double rho_max,
	double tol)
{
	if (std::abs(c.A + c.B - c.C) >= tol * c.scale())
		throw std::invalid_argument("filtration_member: state is not on the Nehari manifold");
	if (!(energy < filtration_level(lambda, rho_max, p)))
		return Filtration::outside;
	double const x = xbar(lambda, rho_max, p);
	if (c.A < x)
		return Filtration::N1;
	if (c.A > x)
		return Filtration::N2;
	return Filtration::outside;
}
}  // namespace hfsys
