#include "hfsys/functional.hpp"

#include "hfsys/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hfsys
{
template <class Grid>
void ProblemParams<Grid>::validate() const
{
	if (!(p > 2 && p < 4))
		throw std::invalid_argument("ProblemParams: p must lie in (2, 4)");
	if (!(V.grid == rho.grid))
		throw std::invalid_argument("ProblemParams: V and rho on different grids");
	if (!(lambda > 0) || V.values.minCoeff() <= 0)
		throw NonPositivePotential("ProblemParams: V must be positive");
	if (!(rho_min > 0) || rho.values.minCoeff() <= 0)
		throw NonPositivePotential("ProblemParams: rho must be positive");
}

template struct ProblemParams<GridSpec>;
template struct ProblemParams<RadialGrid>;

template <class Grid>
ProblemParams<Grid> constant_params(Grid const & g, double p, double beta, double a, double b)
{
	ProblemParams<Grid> P;
	P.p = p;
	P.beta = beta;
	P.V = {g, Array::Constant(g.size(), a)};
	P.rho = {g, Array::Constant(g.size(), b)};
	P.x_grad_V = Field<Grid>::zeros(g);
	P.x_grad_rho = Field<Grid>::zeros(g);
	P.lambda = P.V_max = P.V_inf = a;
	P.rho_min = P.rho_max = P.rho_inf = b;
	P.d0 = 2 * a;
	P.validate();
	return P;
}

template ProblemParams<GridSpec> constant_params(GridSpec const &, double, double, double, double);
template ProblemParams<RadialGrid> constant_params(RadialGrid const &, double, double, double, double);

Array F_beta(Array const & u, Array const & v, double beta, double p)
{
	Array const au = u.abs(), av = v.abs();
	return au.pow(p) + av.pow(p) + 2 * beta * (au * av).pow(p / 2);
}

template <class Grid>
EnergyBreakdown energy(PairState<Grid> const & s, ProblemParams<Grid> const & P)
{
	Grid const & g = s.grid();
	Array const q = s.u.values.square() + s.v.values.square();
	Array const au = s.u.values.abs(), av = s.v.values.abs();
	EnergyBreakdown e;
	e.kinetic = 0.5 * (gradient_sq_integral(s.u) + gradient_sq_integral(s.v));
	e.external = 0.5 * integrate(g, P.V.values * q);
	e.coulomb = 0.25 * solve_coulomb(s, P.rho).energy;
	e.power = integrate(g, au.pow(P.p) + av.pow(P.p)) / P.p;
	e.cross = 2 * P.beta / P.p * integrate(g, (au * av).pow(P.p / 2));
	e.total = e.kinetic + e.external + e.coulomb - e.power - e.cross;
	return e;
}

template EnergyBreakdown energy(Pair3D const &, Params3D const &);
template EnergyBreakdown energy(PairRadial const &, ParamsRadial const &);

template <class Grid>
PairState<Grid> VariationParts<Grid>::gradient_at_scale(double t) const
{
	PairState<Grid> out = t * linear;
	out = axpy(out, t * t * t, coulomb);
	return axpy(out, -std::pow(t, p - 1), nonlinear);
}

template <class Grid>
double VariationParts<Grid>::scale() const
{
	return l2_norm(linear) + l2_norm(coulomb) + l2_norm(nonlinear);
}

template struct VariationParts<GridSpec>;
template struct VariationParts<RadialGrid>;

template <class Grid>
VariationParts<Grid> variation_parts(PairState<Grid> const & s, ProblemParams<Grid> const & P)
{
	Grid const & g = s.grid();
	double const p = P.p;
	Array const & u = s.u.values;
	Array const & v = s.v.values;
	Array const au = u.abs(), av = v.abs();
	Array const q = u.square() + v.square();
	auto const coul = solve_coulomb(s, P.rho);
	Array const rphi = P.rho.values * coul.phi.values;

	Array const lap_u = neg_laplacian(g, u);
	Array const lap_v = neg_laplacian(g, v);

	VariationParts<Grid> out;
	out.p = p;
	out.linear = {{g, lap_u + P.V.values * u}, {g, lap_v + P.V.values * v}};
	out.coulomb = {{g, rphi * u}, {g, rphi * v}};
	Array const hu = au.pow(p / 2), hv = av.pow(p / 2);
	out.nonlinear = {
		{g, au.pow(p - 2) * u + P.beta * hv * u.sign() * au.pow(p / 2 - 1)},
		{g, av.pow(p - 2) * v + P.beta * hu * v.sign() * av.pow(p / 2 - 1)}};

	EnergyBreakdown & e = out.energy;
	e.kinetic = 0.5 * (inner(g, u, lap_u) + inner(g, v, lap_v));
	e.external = 0.5 * integrate(g, P.V.values * q);
	e.coulomb = 0.25 * coul.energy;
	e.power = integrate(g, au.pow(p) + av.pow(p)) / p;
	e.cross = 2 * P.beta / p * integrate(g, hu * hv);
	e.total = e.kinetic + e.external + e.coulomb - e.power - e.cross;
	return out;
}

template VariationParts<GridSpec> variation_parts(Pair3D const &, Params3D const &);
template VariationParts<RadialGrid> variation_parts(PairRadial const &, ParamsRadial const &);

template <class Grid>
PairState<Grid> first_variation(PairState<Grid> const & s, ProblemParams<Grid> const & P)
{
	return variation_parts(s, P).gradient();
}

template Pair3D first_variation(Pair3D const &, Params3D const &);
template PairRadial first_variation(PairRadial const &, ParamsRadial const &);

template <class Grid>
double nehari_residual(PairState<Grid> const & s, ProblemParams<Grid> const & P)
{
	if (s.u.values.matrix().squaredNorm() == 0 && s.v.values.matrix().squaredNorm() == 0)
		throw ZeroState("nehari_residual: zero state");
	auto const e = energy(s, P);
	return 2 * (e.kinetic + e.external) + 4 * e.coulomb - P.p * (e.power + e.cross);
}

template double nehari_residual(Pair3D const &, Params3D const &);
template double nehari_residual(PairRadial const &, ParamsRadial const &);

namespace
{
template <class Grid>
std::array<double, 6> z_components(PairState<Grid> const & s, ProblemParams<Grid> const & P)
{
	if (!P.x_grad_V || !P.x_grad_rho)
		throw MissingGradientFields("Pohozaev audit needs <grad V, x> and <grad rho, x>");
	Grid const & g = s.grid();
	Array const q = s.u.values.square() + s.v.values.square();
	auto const coul = solve_coulomb(s, P.rho);
	return {
		gradient_sq_integral(s.u) + gradient_sq_integral(s.v),
		integrate(g, P.V.values * q),
		integrate(g, P.x_grad_V->values * q),
		coul.energy,
		integrate(g, P.x_grad_rho->values * coul.phi.values * q),
		integrate(g, F_beta(s.u.values, s.v.values, P.beta, P.p))};
}

std::array<double, 6> pohozaev_terms(std::array<double, 6> const & z, double p)
{
	return {0.5 * z[0], 1.5 * z[1], 0.5 * z[2], 1.25 * z[3], 0.5 * z[4], -3.0 / p * z[5]};
}

double abs_sum(std::array<double, 6> const & t)
{
	double s = 0;
	for (double x : t)
		s += std::abs(x);
	return s;
}

double sum(std::array<double, 6> const & t)
{
	double s = 0;
	for (double x : t)
		s += x;
	return s;
}
}  // namespace

template <class Grid>
double pohozaev_residual(PairState<Grid> const & s, ProblemParams<Grid> const & P)
{
	return sum(pohozaev_terms(z_components(s, P), P.p));
}

template <class Grid>
double pohozaev_scale(PairState<Grid> const & s, ProblemParams<Grid> const & P)
{
	return abs_sum(pohozaev_terms(z_components(s, P), P.p));
}

template double pohozaev_residual(Pair3D const &, Params3D const &);
template double pohozaev_residual(PairRadial const &, ParamsRadial const &);
template double pohozaev_scale(Pair3D const &, Params3D const &);
template double pohozaev_scale(PairRadial const &, ParamsRadial const &);

double ZVectorAudit::max_residual() const
{
	return std::max({std::abs(residuals[0]), std::abs(residuals[1]), std::abs(residuals[2])});
}

template <class Grid>
ZVectorAudit z_vector_audit(PairState<Grid> const & s, ProblemParams<Grid> const & P, double grad_tol)
{
	double const p = P.p;
	ZVectorAudit a;
	a.z = z_components(s, P);
	auto const & z = a.z;
	a.theta = energy(s, P).total;

	std::array<double, 6> const row1{0.5 * z[0], 0.5 * z[1], 0.25 * z[3], -z[5] / p, -a.theta, 0};
	std::array<double, 6> const row2{z[0], z[1], z[3], -z[5], 0, 0};
	auto const row3 = pohozaev_terms(z, p);
	auto rel = [](std::array<double, 6> const & r) {
		double const sc = abs_sum(r);
		return sc > 0 ? sum(r) / sc : 0.0;
	};
	a.residuals = {rel(row1), rel(row2), rel(row3)};

	a.t = z[3] / (2 * (p - 2));
	a.s = z[2] / 2;
	a.r = z[4] / 2;
	double const th = a.theta;
	double const z1 = 3 * th + (p - 2) * a.t + a.s + a.r;
	double const z2 = (6 - p) / (p - 2) * th - 2 * (p - 3) * a.t - a.s - a.r;
	double const z6 = 2 * p / (p - 2) * th + p * a.t;
	double const sc = std::abs(z[0]) + std::abs(z[1]) + std::abs(z[5]);
	a.decomposition_residual = sc > 0
		? std::max({std::abs(z1 - z[0]), std::abs(z2 - z[1]), std::abs(z6 - z[5])}) / sc
		: 0.0;

	a.sign_quantity = -(p - 2) * (z[0] + z[1]) + (4 - p) * z[3];
	a.sign_from_t = -2 * p * th + (p - 2) * (4 - p) * a.t;

	if (a.max_residual() > 10 * grad_tol)
		throw NotASolution("z_vector_audit: identity residual exceeds tolerance");
	return a;
}

template ZVectorAudit z_vector_audit(Pair3D const &, Params3D const &, double);
template ZVectorAudit z_vector_audit(PairRadial const &, ParamsRadial const &, double);

std::string to_string(Nontriviality c)
{
	switch (c)
	{
	case Nontriviality::trivial:
		return "trivial";
	case Nontriviality::semitrivial:
		return "semitrivial";
	case Nontriviality::vectorial:
		return "vectorial";
	}
	return "unknown";
}

template <class Grid>
Nontriviality classify_nontriviality(PairState<Grid> const & s, double tol)
{
	Grid const & g = s.grid();
	double const nu = std::sqrt(inner(g, s.u.values, s.u.values));
	double const nv = std::sqrt(inner(g, s.v.values, s.v.values));
	double const pair = std::hypot(nu, nv);
	if (pair == 0)
		return Nontriviality::trivial;
	int const live = int(nu >= tol * pair) + int(nv >= tol * pair);
	return live == 2 ? Nontriviality::vectorial : live == 1 ? Nontriviality::semitrivial
															: Nontriviality::trivial;
}

template Nontriviality classify_nontriviality(Pair3D const &, double);
template Nontriviality classify_nontriviality(PairRadial const &, double);

template <class Grid>
double solution_energy_lower_bound(PairState<Grid> const & s, ProblemParams<Grid> const & P)
{
	double const mass = integrate(s.grid(), s.u.values.square() + s.v.values.square());
	return energy(s, P).total - P.d0 * (P.p - 2) / (2 * (6 - P.p)) * mass;
}

template double solution_energy_lower_bound(Pair3D const &, Params3D const &);
template double solution_energy_lower_bound(PairRadial const &, ParamsRadial const &);

template <class Grid>
double I0(Field<Grid> const & z, ProblemParams<Grid> const & P)
{
	return energy(PairState<Grid>{z, Field<Grid>::zeros(z.grid)}, P).total;
}

template double I0(Field3D const &, Params3D const &);
template double I0(RadialField const &, ParamsRadial const &);

template <class Grid>
NonexistenceQuotient<Grid> nonexistence_quotient(PairState<Grid> const & s, ProblemParams<Grid> const & P)
{
	Grid const & g = s.grid();
	double const p = P.p;
	Array const & u = s.u.values;
	Array const & v = s.v.values;
	Array const au = u.abs(), av = v.abs();
	Array const hu = au.pow(p / 2), hv = av.pow(p / 2);

	NonexistenceQuotient<Grid> out;
	out.denominator = 2 * integrate(g, hu * hv);
	if (!(out.denominator > 0))
	{
		out.value = std::numeric_limits<double>::infinity();
		return out;
	}
	auto const coul = solve_coulomb(s, P.rho);
	Array const rphi = P.rho.values * coul.phi.values;
	Array const lu = neg_laplacian(g, u) + P.V.values * u;
	Array const lv = neg_laplacian(g, v) + P.V.values * v;
	out.numerator = inner(g, u, lu) + inner(g, v, lv) + coul.energy - integrate(g, au.pow(p) + av.pow(p));
	out.value = out.numerator / out.denominator;

	Array const dnu = 2 * lu + 4 * rphi * u - p * au.pow(p - 2) * u;
	Array const dnv = 2 * lv + 4 * rphi * v - p * av.pow(p - 2) * v;
	Array const ddu = p * u.sign() * au.pow(p / 2 - 1) * hv;
	Array const ddv = p * v.sign() * av.pow(p / 2 - 1) * hu;
	out.gradient = {{g, (dnu - out.value * ddu) / out.denominator}, {g, (dnv - out.value * ddv) / out.denominator}};
	return out;
}

template NonexistenceQuotient<GridSpec> nonexistence_quotient(Pair3D const &, Params3D const &);
template NonexistenceQuotient<RadialGrid> nonexistence_quotient(PairRadial const &, ParamsRadial const &);

template <class Grid>
GradientCheck gradient_check(PairState<Grid> const & s, PairState<Grid> const & w, ProblemParams<Grid> const & P,
	double h)
{
	auto const grad = first_variation(s, P);
	GradientCheck out;
	out.analytic = inner(grad, w);
	out.finite_diff = (energy(axpy(s, h, w), P).total - energy(axpy(s, -h, w), P).total) / (2 * h);
	double const sc = l2_norm(grad) * l2_norm(w);
	out.relative = sc > 0 ? std::abs(out.analytic - out.finite_diff) / sc : std::abs(out.finite_diff);
	return out;
}

template GradientCheck gradient_check(Pair3D const &, Pair3D const &, Params3D const &, double);
template GradientCheck gradient_check(PairRadial const &, PairRadial const &, ParamsRadial const &, double);
}  // namespace hfsys
