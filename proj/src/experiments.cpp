#include "hfsys/experiments.hpp"

#include "hfsys/bounds.hpp"
#include "hfsys/constructions.hpp"
#include "hfsys/errors.hpp"
#include "hfsys/fibering.hpp"
#include "hfsys/minimize.hpp"
#include "hfsys/reference.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace hfsys
{
namespace
{
std::string fmt(double x)
{
	std::ostringstream os;
	os << std::setprecision(10) << x;
	return os.str();
}

RunRecord start_record(ExperimentConfig const & cfg)
{
	RunRecord r;
	r.experiment = cfg.experiment;
	r.config = cfg.echo();
	r.config_hash = config_hash(cfg);
	return r;
}

// Guards are evaluated before any contract so that contracts inherit the guarded flag.
void guard(RunRecord & r, bool ok, std::string const & what)
{
	r.guard_notes.push_back((ok ? "holds: " : "fails: ") + what);
	if (!ok)
		r.guarded = false;
}

void enforce_guards(RunRecord const & r, ExperimentConfig const & cfg)
{
	if (cfg.strict && !r.guarded)
	{
		std::string msg = cfg.experiment + ": guard violated";
		for (auto const & n : r.guard_notes)
			if (n.rfind("fails", 0) == 0)
				msg += "; " + n;
		throw GuardViolation(msg);
	}
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
	return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RadialField resample(RadialField const & f, RadialGrid const & g)
{
	if (f.grid == g)
		return f;
	RadialGrid const & src = f.grid;
	return sample(g, [&](double r) {
		double const x = r / src.dr - 0.5;
		if (x <= 0)
			return f.values[0];
		int const i = int(x);
		if (i >= src.m - 1)
			return 0.0;
		double const t = x - i;
		return (1 - t) * f.values[i] + t * f.values[i + 1];
	});
}

PairRadial resample(PairRadial const & s, RadialGrid const & g)
{
	return {resample(s.u, g), resample(s.v, g)};
}

Pair3D embed(PairRadial const & s, GridSpec const & g, Vec3 const & c = Vec3::Zero())
{
	return {embed_radial(s.u, c, g), embed_radial(s.v, c, g)};
}

std::string pair_profile_csv(PairRadial const & s)
{
	std::ostringstream os;
	os.precision(17);
	os << "r,u,v\n";
	for (int i = 0; i < s.grid().m; ++i)
		os << s.grid().r(i) << ',' << s.u.values[i] << ',' << s.v.values[i] << '\n';
	return os.str();
}

PairRadial rebin(Pair3D const & s, Vec3 const & c, RadialGrid const & g)
{
	return {rebin_radial(s.u, c, g), rebin_radial(s.v, c, g)};
}

double component_fraction(Pair3D const & s)
{
	double const nu = std::sqrt(inner(s.grid(), s.u.values, s.u.values));
	double const nv = std::sqrt(inner(s.grid(), s.v.values, s.v.values));
	return std::min(nu, nv) / std::hypot(nu, nv);
}

void record_report(RunRecord & r, std::string const & prefix, SolverReport const & rep)
{
	r.diagnostics[prefix + ".iterations"] = rep.iterations;
	r.residuals[prefix + ".relative_grad"] = rep.relative_grad;
	r.classifications[prefix + ".outcome"] = to_string(rep.outcome);
}

// Closed-form constants at the configured potentials.
void fill_constants(RunRecord & r, ExperimentConfig const & cfg)
{
	double const p = cfg.p, beta = cfg.beta;
	double const lambda = cfg.V.inf(), V_max = cfg.V.sup(), V_inf = cfg.V.far;
	double const rho_min = cfg.rho.inf(), rho_max = cfg.rho.sup(), rho_inf = cfg.rho.far;
	auto & c = r.constants;
	c["lambda"] = lambda;
	c["V_max"] = V_max;
	c["V_inf"] = V_inf;
	c["rho_min"] = rho_min;
	c["rho_max"] = rho_max;
	c["rho_inf"] = rho_inf;
	c["d0"] = d0_of(cfg.V);
	c["max_g"] = max_g(beta, p);
	c["argmax_g"] = argmax_g(beta, p);
	c["classification_exponent"] = classification_exponent();
	c["hls_constant"] = hls_constant(lambda, rho_max);
	if (p < 3)
	{
		c["nonexistence_threshold"] = nonexistence_threshold(lambda, rho_min, p);
		c["coercive_upper"] = coercive_upper(V_inf, rho_inf, p);
		c["m_beta_at_infinity"] = m_beta(V_inf, rho_inf, beta, p);
	}
	if (p < 4)
	{
		c["xbar"] = xbar(lambda, rho_max, p);
		c["filtration_level"] = filtration_level(lambda, rho_max, p);
		double const S = sobolev_constant(lambda, p, default_radial_grid()).S;
		c["S"] = S;
		c["gamma"] = gamma_bound(beta, lambda, V_max, rho_max, S, p);
		c["B0"] = B0(lambda, V_max, rho_max, S, p);
		c["beta_1"] = beta_1(lambda, V_max, rho_max, S, p);
		c["alpha_infinity"] = alpha_infinity(beta, lambda, V_max, S, p);
		auto const sw = alpha_minus_sandwich(beta, lambda, rho_max, S, p);
		c["sandwich_lower"] = sw.lower;
		c["sandwich_upper"] = sw.upper;
		c["t_dip_ansatz"] = t_dip_ansatz(p);
	}
}

// ---------------------------------------------------------------------------

RunOutput exp_constants(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	enforce_guards(r, cfg);
	for (auto const & t : constants_table())
	{
		r.constants[t.name] = t.value;
		r.diagnostics[t.name + ".oracle"] = t.oracle_value;
		r.check(t.name + " agrees with its scan oracle",
			std::abs(t.value - t.oracle_value) <= 1e-8 * std::abs(t.value), t.inputs);
	}
	struct Ref
	{
		char const * name;
		double value;
	};
	for (auto const & [name, value] : {Ref{"d_lambda_rho_min", 2.37841}, Ref{"nonexistence_bound", 1.37841},
			 Ref{"coercive_upper", 0.48650}, Ref{"s_c", 1.28000}, Ref{"d_c", 1.81019}, Ref{"g_beta_half", 1.68179},
			 Ref{"classification_exponent", 3.18133}})
		r.check(std::string(name) + " matches its quoted five-decimal value",
			std::abs(r.constants.at(name) - value) <= 1e-5, "reference " + fmt(value));
	fill_constants(r, cfg);
	return {r, {}};
}

RunOutput exp_coulomb(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	enforce_guards(r, cfg);
	double const pi = std::numbers::pi;
	auto const g = GridSpec::make(cfg.n, cfg.L);
	Vec3 const c = Vec3::Constant(g.coord(g.n / 2));
	auto const q = sample(g, [&](Vec3 const & x) { return std::exp(-(x - c).squaredNorm()); });
	Array const phi = coulomb_potential(g, q.values);
	double const phi0 = phi[g.index(g.n / 2, g.n / 2, g.n / 2)];
	r.diagnostics["gaussian_phi0"] = phi0;
	r.residuals["gaussian_phi0_rel"] = std::abs(phi0 - 2 * pi) / (2 * pi);
	r.check("Gaussian charge potential at its centre is 2 pi within 1%", std::abs(phi0 - 2 * pi) < 0.01 * 2 * pi,
		"phi(0) = " + fmt(phi0));

	auto const rg = RadialGrid::make(cfg.m, cfg.R);
	std::pair<char const *, std::function<double(double)>> const charges[] = {
		{"gaussian", [](double x) { return std::exp(-x * x); }},
		{"shell", [](double x) { return x * x * std::exp(-x * x); }},
		{"signed", [](double x) { return std::exp(-x * x / 2) - 0.5 * std::exp(-x * x); }},
	};
	for (auto const & [name, f] : charges)
	{
		Array const phi3 = coulomb_potential(g, sample(g, [&](Vec3 const & x) { return f(x.norm()); }).values);
		auto const phir = embed_radial(solve_coulomb_radial(sample(rg, f)), Vec3::Zero(), g);
		double const rel = std::sqrt(integrate(g, (phi3 - phir.values).square()) / integrate(g, phir.values.square()));
		r.residuals[std::string("cube_vs_radial.") + name] = rel;
		r.check(std::string("cube and shell-theorem potentials agree for the ") + name + " charge", rel < 0.01,
			"L2 relative " + fmt(rel));
	}
	return {r, {}};
}

RunOutput exp_gradient(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	enforce_guards(r, cfg);
	auto const g = GridSpec::make(cfg.n, cfg.L);
	std::mt19937_64 rng(cfg.seed);
	double const ps[] = {2.5, 3.0, 3.5}, betas[] = {0.0, 1.0, 5.0};
	double worst = 0;
	int failures = 0;
	for (int i = 0; i < cfg.cases; ++i)
	{
		auto const P = make_params(g, ps[i % 3], betas[(i / 3) % 3], cfg.potentials());
		// Positive bumps on a floor: |u|^{p/2} is only C^1 at zeros.
		auto s = random_pair(g, rng, true);
		s.u.values += 0.05;
		s.v.values += 0.05;
		auto const w = random_pair(g, rng);
		double const rel = gradient_check(s, w, P).relative;
		worst = std::max(worst, rel);
		failures += rel >= 1e-5;
	}
	r.residuals["gradient_fd_max"] = worst;
	r.diagnostics["gradient_cases"] = cfg.cases;
	r.check("first variation matches central differences in every case", failures == 0,
		std::to_string(failures) + " of " + std::to_string(cfg.cases) + " above 1e-5; worst " + fmt(worst));
	return {r, {}};
}

RunOutput exp_fibering(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	double const p = cfg.p, beta = cfg.beta;
	guard(r, p > 2 && p < 4, "2 < p < 4");
	enforce_guards(r, cfg);

	std::mt19937_64 rng(cfg.seed);
	std::uniform_real_distribution<double> logu(-2, 2), P(2.05, 3.75);
	int both = 0, bad_residual = 0, bad_sign = 0, bad_form = 0;
	double worst_res = 0, worst_form = 0;
	for (int i = 0; i < 300; ++i)
	{
		double const q = P(rng);
		FiberingCoefficients const c{std::exp(logu(rng)), std::exp(logu(rng) - 2), std::exp(logu(rng))};
		auto const roots = find_roots(c, q);
		for (auto t : {roots.t_minus, roots.t_plus})
			if (t)
			{
				double const sc = c.A * *t + c.B * std::pow(*t, 3) + c.C * std::pow(*t, q - 1);
				double const res = std::abs(c.dphi(*t, q)) / sc;
				worst_res = std::max(worst_res, res);
				bad_residual += res >= 1e-12;
			}
		if (!(roots.t_minus && roots.t_plus))
			continue;
		++both;
		bad_sign += !(c.d2phi(*roots.t_minus, q) < 0 && c.d2phi(*roots.t_plus, q) > 0);
		for (double t : {*roots.t_minus, *roots.t_plus})
		{
			FiberingCoefficients const on{c.A * t * t, c.B * std::pow(t, 4), c.C * std::pow(t, q)};
			double const J = on.phi(1, q);
			double const form1 = (q - 2) / (2 * q) * on.A + (q - 4) / (4 * q) * on.B;
			double const form2 = 0.25 * on.A - (4 - q) / (4 * q) * on.C;
			double const dev = std::max(std::abs(J - form1), std::abs(J - form2)) / on.scale();
			worst_form = std::max(worst_form, dev);
			bad_form += dev >= 1e-10;
		}
	}
	r.diagnostics["triples_with_two_roots"] = both;
	r.residuals["root_residual_max"] = worst_res;
	r.residuals["nehari_forms_max"] = worst_form;
	r.check("root residuals below 1e-12 of the scale", bad_residual == 0, "worst " + fmt(worst_res));
	r.check("t- lies on N- and t+ on N+", bad_sign == 0, std::to_string(both) + " two-root triples");
	r.check("energy on the manifold agrees with both reduced forms", bad_form == 0, "worst " + fmt(worst_form));

	// Ansatz ray (sqrt(s) w, sqrt(1-s) w) at the configured potentials.
	auto const rg = RadialGrid::make(cfg.m, cfg.R);
	auto const Pr = make_params(rg, p, beta, cfg.potentials());
	auto const w = solve_scalar_ground(Pr.lambda, Pr.lambda * max_g(beta, p) / Pr.V_max, p, rg);
	double const s = argmax_g(beta, p);
	PairRadial const seed{{rg, std::sqrt(s) * w.w.values}, {rg, std::sqrt(1 - s) * w.w.values}};
	auto const roots = find_roots(coefficients(seed, Pr), p);
	double const t_dip = t_dip_ansatz(p);
	r.diagnostics["ansatz.t_dip_formula"] = t_dip;
	bool const ordered = roots.t_minus && roots.t_plus && *roots.t_minus < t_dip && t_dip < *roots.t_plus;
	if (roots.t_minus)
		r.diagnostics["ansatz.t_minus"] = *roots.t_minus;
	if (roots.t_plus)
		r.diagnostics["ansatz.t_plus"] = *roots.t_plus;
	r.check("ansatz roots bracket (2/(4-p))^{1/(p-2)}", ordered,
		roots.t_minus ? "t- = " + fmt(*roots.t_minus) + ", t+ = " + (roots.t_plus ? fmt(*roots.t_plus) : "none")
					  : "no roots");
	return {r, {}};
}

RunOutput exp_scalar(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	double const p = cfg.p, beta = cfg.beta;
	guard(r, p > 2 && p < 6, "2 < p < 6");
	enforce_guards(r, cfg);
	auto const rg = RadialGrid::make(cfg.m, cfg.R);
	double const lambda = cfg.V.inf(), V_max = cfg.V.sup();
	double const gmax = max_g(beta, p);
	auto const w = solve_scalar_ground(lambda, lambda * gmax / V_max, p, rg);
	// S on the reference grid, the ground state on the configured one.
	auto const S = sobolev_constant(lambda, p, default_radial_grid());
	r.constants["S"] = S.S;
	r.diagnostics["S_coarse"] = S.S_coarse;
	r.residuals["nehari"] = w.nehari_res;
	r.residuals["pohozaev"] = w.pohozaev_res;
	r.energies["direct"] = w.energy;
	double const formula = alpha_infinity(beta, lambda, V_max, S.S, p);
	r.energies["alpha_infinity"] = formula;
	r.check("ground state passes the Nehari audit", std::abs(w.nehari_res) < 1e-6, fmt(w.nehari_res));
	r.check("ground state passes the Pohozaev audit", std::abs(w.pohozaev_res) < 1e-6, fmt(w.pohozaev_res));
	r.check("alpha^infinity formula matches the direct energy within 2%",
		std::abs(formula - w.energy) < 0.02 * std::abs(w.energy), fmt(formula) + " vs " + fmt(w.energy));
	r.check("norm formula matches the direct norm within 2%",
		std::abs(w_beta_norm_sq(gmax, lambda, V_max, S.S, p) - w.norm_sq) < 0.02 * w.norm_sq);
	r.check("ground state is positive and decreasing", [&] {
		for (int i = 1; i < rg.m; ++i)
			if (w.w.values[i] > 1e-10 * w.w.values[0] && !(w.w.values[i] < w.w.values[i - 1]))
				return false;
		return w.w.values.minCoeff() > 0;
	}());
	r.diagnostics["S_grid_delta"] = S.delta();
	return {r, {{"ground_state.csv", profile_csv(w.w)}}};
}

RunOutput exp_inequalities(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	enforce_guards(r, cfg);
	auto const g = GridSpec::make(cfg.n, cfg.L);
	auto const P = make_params(g, cfg.p, cfg.beta, cfg.potentials());
	// The named variants assume rho == k; they are checked with a constant rho at k = rho_min.
	auto const rho_const = Field3D{g, Array::Constant(g.size(), P.rho_min)};
	std::mt19937_64 rng(cfg.seed);
	int bad_split[3] = {0, 0, 0}, bad_general = 0, bad_hls = 0;
	double worst[3] = {0, 0, 0}, worst_general = 0, worst_hls = 0;
	SplitVariant const variants[] = {SplitVariant::lions, SplitVariant::weighted, SplitVariant::appendix};
	char const * names[] = {"lions", "weighted", "appendix"};
	for (int i = 0; i < cfg.samples; ++i)
	{
		auto const s = random_pair(g, rng, i % 2 == 0);
		for (int v = 0; v < 3; ++v)
		{
			auto const res = check_splitting_inequality(s, rho_const, variants[v]);
			double const m = res.margin() / std::max(res.scale(), 1e-300);
			worst[v] = std::min(worst[v], m);
			bad_split[v] += res.margin() < 0;
		}
		auto const gen = check_splitting_inequality(s, P.rho, SplitVariant::weighted);
		worst_general = std::min(worst_general, gen.margin() / std::max(gen.scale(), 1e-300));
		bad_general += gen.margin() < 0;
		double const hls = check_hls_bound(s, P.rho, P.V, P.rho_max, P.lambda);
		worst_hls = std::min(worst_hls, hls);
		bad_hls += hls < 0;
	}
	for (int v = 0; v < 3; ++v)
	{
		r.residuals[std::string("split.") + names[v] + ".min_margin"] = worst[v];
		r.check(std::string("splitting inequality (") + names[v] + ") holds on every pair", bad_split[v] == 0,
			std::to_string(bad_split[v]) + " violations");
	}
	r.residuals["split.variable_rho.min_margin"] = worst_general;
	r.check("weighted splitting with variable rho holds on every pair", bad_general == 0,
		std::to_string(bad_general) + " violations");
	r.residuals["hls.min_margin"] = worst_hls;
	r.check("HLS-type Coulomb bound holds on every pair", bad_hls == 0, std::to_string(bad_hls) + " violations");
	r.diagnostics["pairs"] = cfg.samples;
	return {r, {}};
}

RunOutput exp_audit(ExperimentConfig const & cfg)
{
	// Identity audit: gradient, fibering and Coulomb oracles on one record.
	RunRecord r = start_record(cfg);
	enforce_guards(r, cfg);
	ExperimentConfig sub = cfg;
	sub.n = std::min(cfg.n, 16);
	sub.L = 6;
	sub.cases = std::min(cfg.cases, 18);
	auto merge = [&](RunRecord const & part, std::string const & tag) {
		for (auto c : part.contracts)
		{
			c.name = tag + ": " + c.name;
			r.contracts.push_back(c);
		}
		for (auto const & [k, v] : part.residuals)
			r.residuals[tag + "." + k] = v;
	};
	merge(exp_gradient(sub).record, "gradient");
	ExperimentConfig fib = cfg;
	fib.p = 3.5;
	fib.beta = 20;
	fib.V = gaussian_well(1.0, 0.3, 2.0);
	fib.rho = constant_profile(0.3);
	fib.eps = 1;
	fib.m = 2000;
	fib.R = 30;
	merge(exp_fibering(fib).record, "fibering");
	ExperimentConfig coul = cfg;
	coul.n = 48;
	coul.L = 8;
	coul.m = 4000;
	coul.R = 40;
	merge(exp_coulomb(coul).record, "coulomb");
	return {r, {}};
}

RunOutput exp_nonexistence(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	double const p = cfg.p;
	auto const g = GridSpec::make(cfg.n, cfg.L);
	auto const P = make_params(g, p, cfg.beta, cfg.potentials());
	guard(r, p > 2 && p < 3, "2 < p < 3");
	double const bound = nonexistence_threshold(P.lambda, P.rho_min, p);
	r.constants["quotient_bound"] = bound;
	guard(r, cfg.beta < bound, "beta = " + fmt(cfg.beta) + " < d - 1 = " + fmt(bound));
	enforce_guards(r, cfg);

	std::mt19937_64 rng(cfg.seed);
	double min_random = std::numeric_limits<double>::infinity();
	int violations = 0;
	for (int i = 0; i < cfg.samples; ++i)
	{
		double const q = nonexistence_quotient(random_pair(g, rng, i % 2 == 0), P).value;
		min_random = std::min(min_random, q);
		violations += q < bound;
	}
	double min_descent = std::numeric_limits<double>::infinity();
	int converged = 0;
	for (int i = 0; i < cfg.descents; ++i)
	{
		auto const res = minimize_nonexistence_quotient(random_pair(g, rng, true), P, cfg.solver);
		min_descent = std::min(min_descent, res.value);
		violations += res.value < bound;
		converged += res.report.converged;
		r.diagnostics["descent." + std::to_string(i) + ".value"] = res.value;
	}
	r.energies["quotient_min_random"] = min_random;
	r.energies["quotient_min_descent"] = min_descent;
	r.diagnostics["descents_converged"] = converged;
	r.check("quotient stays above d - 1 on all random pairs and descents", violations == 0,
		std::to_string(violations) + " violations; random min " + fmt(min_random) + ", descent min "
			+ fmt(min_descent));
	r.check("certificate excludes beta", bound > cfg.beta, fmt(bound) + " > " + fmt(cfg.beta));
	return {r, {}};
}

// Lambda-quotient minimiser with its (D3) comparison at the configured potentials.
struct LambdaSetup
{
	QuotientMinimizer q;
	double d3_lhs = 0, d3_rhs = 0;
};

LambdaSetup lambda_setup(ExperimentConfig const & cfg, Potentials const & pot, RunRecord & r)
{
	LambdaSetup out;
	auto const qg = quotient_grid();
	out.q = minimize_quotient_Lambda(cfg.lambda0, cfg.k0, cfg.p, qg);
	r.constants["Lambda"] = out.q.Lambda;
	r.constants["Lambda_lower_bound"] = out.q.lower_bound;
	auto const P = make_params(qg, cfg.p, cfg.beta, pot);
	auto const e = energy(out.q.pair, P);
	auto const e0 = energy(out.q.pair, constant_params(qg, cfg.p, cfg.beta, cfg.lambda0, cfg.k0));
	out.d3_lhs = e.external + e.coulomb;
	out.d3_rhs = e0.external + e0.coulomb;
	r.diagnostics["D3.lhs"] = out.d3_lhs;
	r.diagnostics["D3.rhs"] = out.d3_rhs;
	return out;
}

std::vector<PairRadial> gaussian_seeds(RadialGrid const & g, std::vector<double> const & widths,
	std::vector<double> const & centres = {0.0})
{
	std::vector<PairRadial> seeds;
	for (double c : centres)
		for (double w : widths)
		{
			auto const f = sample(g, [=](double x) { return 2 * std::exp(-(x - c) * (x - c) / (w * w)); });
			seeds.push_back(coupled_ansatz(f, 0.5));
		}
	return seeds;
}

RunOutput exp_coercive(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	double const p = cfg.p, beta = cfg.beta;
	auto const pot = cfg.potentials();
	guard(r, p > 2 && p < 3, "2 < p < 3");
	auto const upper = coercive_upper(pot.V.far, pot.rho.far, p);
	auto const lam = lambda_setup(cfg, pot, r);
	guard(r, !lam.q.unbounded && lam.q.Lambda < beta,
		"Lambda(lambda0, k0) = " + fmt(lam.q.Lambda) + " < beta = " + fmt(beta));
	guard(r, beta < upper, "beta < coercive upper " + fmt(upper));
	guard(r, lam.d3_lhs < lam.d3_rhs, "(D3) at the Lambda minimiser: " + fmt(lam.d3_lhs) + " < " + fmt(lam.d3_rhs));
	double const level = std::pow(2.0, (6 - p) / 2) / p * std::pow(p - 2, p - 2) * std::pow(3 - p, 3 - p) * (1 + beta);
	double const measure = sublevel_measure(pot, p, level);
	r.constants["sublevel_measure"] = measure;
	enforce_guards(r, cfg);
	r.deviations.push_back("radial seed stage uses the inverse-Laplacian preconditioner");

	// Radial stage: best of coupled Gaussians and the Lambda minimiser.
	auto const rg = RadialGrid::make(cfg.m, cfg.R);
	auto const Pr = make_params(rg, p, beta, pot);
	auto seeds = gaussian_seeds(rg, {2.0, 4.0, 8.0});
	seeds.push_back(resample(lam.q.pair, rg));
	SolverConfig radial_cfg = cfg.solver;
	radial_cfg.precondition = true;
	auto const radial = descend_multistart(seeds, Pr, radial_cfg);
	r.energies["radial_min"] = radial.energy.total;
	record_report(r, "radial", radial.report);

	auto const g = GridSpec::make(cfg.n, cfg.L);
	auto const P = make_params(g, p, beta, pot);
	auto const res = descend(embed(radial.state, g), P, cfg.solver);
	record_report(r, "cube", res.report);
	double const J = res.energy.total;
	r.energies["alpha"] = J;
	double const frac = component_fraction(res.state);
	r.diagnostics["min_component_fraction"] = frac;
	r.diagnostics["boundary_mass"] = boundary_mass(res.state);
	double const nehari = nehari_residual(res.state, P) / res.energy.scale();
	double const poh = pohozaev_residual(res.state, P) / pohozaev_scale(res.state, P);
	r.residuals["nehari"] = nehari;
	r.residuals["pohozaev"] = poh;
	r.classifications["nontriviality"] = to_string(classify_nontriviality(res.state, 1e-4));

	r.check("cube descent converged", res.report.converged, to_string(res.report.outcome), true);
	r.check("gradient norm below 1e-6 relative", res.report.relative_grad < 1e-6, fmt(res.report.relative_grad), true);
	r.check("energy trace is monotone", res.report.monotone());
	r.check("global minimiser has negative energy", J < 0, fmt(J));
	r.check("minimiser is vectorial", frac > 1e-4, "smaller component fraction " + fmt(frac));
	r.check("Nehari identity at the minimiser", std::abs(nehari) < 1e-5, fmt(nehari));
	r.check("Pohozaev identity at the minimiser", std::abs(poh) < 1e-3, fmt(poh));
	r.check("sublevel set of the potentials has finite positive measure", measure > 0 && std::isfinite(measure),
		fmt(measure));

	// Ansatz improvement on z = |(u, v)|.
	Field3D const z{g, (res.state.u.values.square() + res.state.v.values.square()).sqrt()};
	double const J_ansatz = energy(coupled_ansatz(z, argmax_g(beta, p)), P).total;
	double const i0 = I0(z, P);
	r.energies["ansatz"] = J_ansatz;
	r.energies["I0"] = i0;
	r.check("coupled ansatz lowers the scalar functional", J_ansatz < i0, fmt(J_ansatz) + " < " + fmt(i0));

	return {r,
		{{"radial_profile.csv", pair_profile_csv(radial.state)},
			{"cube_profile.csv", pair_profile_csv(rebin(res.state, Vec3::Zero(), rg))}}};
}

RunOutput exp_multibump(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	double const p = cfg.p, beta = cfg.beta;
	auto const pot = cfg.potentials();
	guard(r, p > 2 && p < 3, "2 < p < 3");
	auto const qg = quotient_grid();
	auto const q = minimize_quotient_Lambda(cfg.lambda0, cfg.k0, p, qg);
	r.constants["Lambda"] = q.Lambda;
	guard(r, cfg.lambda0 >= pot.V.sup() && cfg.k0 >= pot.rho.sup(), "lambda0 >= V_max and k0 >= rho_max");
	guard(r, !q.unbounded && beta > q.Lambda, "beta > Lambda(lambda0, k0) = " + fmt(q.Lambda));
	enforce_guards(r, cfg);
	r.deviations.push_back("bumps spaced by " + fmt(cfg.spacing) + " instead of N^3");

	auto const g = GridSpec::make(cfg.n, cfg.L);
	auto const P = make_params(g, p, beta, pot);
	auto const bump = cutoff(embed(q.pair, g), cfg.R0);
	double const J1 = energy(bump, constant_params(g, p, beta, cfg.lambda0, cfg.k0)).total;
	r.energies["J_infinity_single"] = J1;
	r.check("cut-off bump keeps negative limit energy", J1 < 0, fmt(J1));

	std::vector<double> JN;
	bool ratio_ok = true, bound_ok = true, additive = true;
	for (int N = 1; N <= cfg.N_max; ++N)
	{
		MultibumpSpec spec;
		spec.N = N;
		spec.R0 = cfg.R0;
		spec.spacing = cfg.spacing;
		auto const mb = build_multibump(bump, spec);
		auto const L = multibump_ledger(mb, bump, P, cfg.R0);
		std::string const k = "N" + std::to_string(N);
		JN.push_back(L.total.total);
		r.energies[k + ".J"] = L.total.total;
		r.diagnostics[k + ".cross_coulomb"] = L.cross_coulomb;
		r.diagnostics[k + ".point_charge"] = L.point_charge;
		r.diagnostics[k + ".cross_bound"] = L.cross_bound;
		r.residuals[k + ".power_additivity"] = std::abs(L.total.power - L.single_sum.power) / L.single_sum.power;
		additive = additive && std::abs(L.total.power - L.single_sum.power) < 1e-10 * L.single_sum.power
			&& std::abs(L.total.cross - L.single_sum.cross) < 1e-10 * L.single_sum.cross;
		if (N > 1)
		{
			double const ratio = L.cross_coulomb / L.point_charge;
			r.diagnostics[k + ".cross_over_point"] = ratio;
			ratio_ok = ratio_ok && ratio > 0.5 && ratio < 2;
			bound_ok = bound_ok && L.cross_coulomb <= L.cross_bound;
		}
	}
	bool decreasing = true;
	for (std::size_t i = 1; i < JN.size(); ++i)
		decreasing = decreasing && JN[i] < JN[i - 1];
	r.check("J(w_N) strictly decreasing in N", decreasing);
	r.check("J(w_N) falls by more than half a single bump energy",
		JN.size() >= 2 && JN.back() < JN.front() - 0.5 * std::abs(J1), fmt(JN.back()) + " vs " + fmt(JN.front()));
	r.check("cross Coulomb within a factor 2 of the point-charge value", ratio_ok);
	r.check("cross Coulomb below the pairwise bound", bound_ok);
	r.check("power and coupling terms are exactly additive", additive);
	return {r, {}};
}

// Lemma 3.6 ansatz on the cube, ready for nehari_minimize.
struct NehariSetup
{
	Pair3D seed;
	double S = 0;
	double gamma = 0;
};

NehariSetup nehari_setup(ExperimentConfig const & cfg, Potentials const & pot, GridSpec const & g)
{
	auto const rg = RadialGrid::make(cfg.m, cfg.R);
	double const p = cfg.p, beta = cfg.beta;
	double const lambda = pot.V.inf(), V_max = pot.V.sup();
	auto const w = solve_scalar_ground(lambda, lambda * max_g(beta, p) / V_max, p, rg);
	double const s = argmax_g(beta, p);
	PairRadial const ansatz{{rg, std::sqrt(s) * w.w.values}, {rg, std::sqrt(1 - s) * w.w.values}};
	NehariSetup out;
	out.seed = embed(ansatz, g);
	out.S = sobolev_constant(lambda, p, default_radial_grid()).S;
	out.gamma = gamma_bound(beta, lambda, V_max, pot.rho.sup(), out.S, p);
	return out;
}

void nehari_checks(RunRecord & r, NehariResult<GridSpec> const & res, Params3D const & P, std::string const & tag)
{
	record_report(r, tag, res.report);
	r.check(tag + ": Nehari minimisation converged", res.report.converged, to_string(res.report.outcome), true);
	r.check(tag + ": gradient norm below 1e-6 relative", res.report.relative_grad < 1e-6,
		fmt(res.report.relative_grad), true);
	r.check(tag + ": energy trace is monotone", res.report.monotone());
	r.classifications[tag + ".nehari"] = to_string(res.nehari_class);
	r.classifications[tag + ".filtration"] = to_string(res.filtration);
	r.classifications[tag + ".nontriviality"] = to_string(classify_nontriviality(res.state, 1e-4));
	r.residuals[tag + ".nehari"] = nehari_residual(res.state, P) / res.energy.scale();
}

RunOutput exp_nehari(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	double const p = cfg.p, beta = cfg.beta;
	auto const pot = cfg.potentials();
	guard(r, p > 2 && p < 4, "2 < p < 4");
	guard(r, p > classification_exponent(), "p > (1 + sqrt 73)/3");
	auto const g = GridSpec::make(cfg.n, cfg.L);
	auto const P = make_params(g, p, beta, pot);
	auto const setup = nehari_setup(cfg, pot, g);
	auto const sw = alpha_minus_sandwich(beta, P.lambda, P.rho_max, setup.S, p);
	r.constants["S"] = setup.S;
	r.constants["sandwich_lower"] = sw.lower;
	r.constants["sandwich_upper"] = sw.upper;
	r.constants["gamma"] = setup.gamma;
	double const b1 = beta_1(P.lambda, P.V_max, P.rho_max, setup.S, p);
	r.constants["beta_1"] = b1;
	r.classifications["beta_vs_beta_1"] = beta >= b1 ? "above" : "below";
	guard(r, sw.lower < sw.upper, "sandwich non-empty");
	enforce_guards(r, cfg);

	auto const seed_c = coefficients(setup.seed, P);
	auto const seed_roots = find_roots(seed_c, p);
	if (seed_roots.t_minus)
	{
		double const J_seed = seed_c.phi(*seed_roots.t_minus, p);
		r.energies["seed_on_N1"] = J_seed;
		r.check("ansatz seed on N- lies below gamma(beta)", J_seed < setup.gamma,
			fmt(J_seed) + " < " + fmt(setup.gamma));
	}
	else
		r.check("ansatz seed ray has a t- root", false);

	auto const res = nehari_minimize(setup.seed, P, cfg.solver);
	r.energies["alpha_minus"] = res.alpha_minus;
	nehari_checks(r, res, P, "nehari");
	r.check("minimiser is on N-", res.nehari_class == NehariClass::Nminus);
	r.check("minimiser is in the filtration N1", res.filtration == Filtration::N1);
	r.check("minimiser is vectorial", classify_nontriviality(res.state, 1e-4) == Nontriviality::vectorial);
	r.check("sandwich bounds hold", sw.lower < res.alpha_minus && res.alpha_minus < sw.upper,
		fmt(sw.lower) + " < " + fmt(res.alpha_minus) + " < " + fmt(sw.upper));
	try
	{
		auto const z = z_vector_audit(res.state, P, 1e-4);
		for (int i = 0; i < 3; ++i)
			r.residuals["z_vector." + std::to_string(i)] = z.residuals[i];
		r.diagnostics["z_vector.sign_quantity"] = z.sign_quantity;
		r.check("z-vector identities hold within 1e-3", z.max_residual() < 1e-3, fmt(z.max_residual()));
		r.check("classification quantity is negative (N- branch)", z.sign_quantity < 0, fmt(z.sign_quantity));
	}
	catch (NotASolution const & e)
	{
		r.check("z-vector identities hold within 1e-3", false, e.what());
	}
	auto const rg = RadialGrid::make(cfg.m, cfg.R);
	return {r, {{"cube_profile.csv", pair_profile_csv(rebin(res.state, Vec3::Zero(), rg))}}};
}

RunOutput exp_limit(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	double const p = cfg.p, beta = cfg.beta;
	auto const pot = cfg.potentials();
	guard(r, p > 2 && p < 4, "2 < p < 4");
	bool const d4 = std::abs(pot.V.sup() - pot.V.far) < 1e-12 && std::abs(pot.rho.sup() - pot.rho.far) < 1e-12
		&& (pot.V.inf() < pot.V.far || pot.rho.inf() < pot.rho.far);
	guard(r, d4, "(D4): V_max = V_inf, rho_max = rho_inf, strict somewhere");
	enforce_guards(r, cfg);

	auto const g = GridSpec::make(cfg.n, cfg.L);
	Potentials const flat{constant_profile(pot.V.far), constant_profile(pot.rho.far)};
	auto const P = make_params(g, p, beta, pot);
	auto const Pf = make_params(g, p, beta, flat);
	auto const res = nehari_minimize(nehari_setup(cfg, pot, g).seed, P, cfg.solver);
	auto const resf = nehari_minimize(nehari_setup(cfg, flat, g).seed, Pf, cfg.solver);
	nehari_checks(r, res, P, "well");
	nehari_checks(r, resf, Pf, "constant");
	r.energies["alpha_minus"] = res.alpha_minus;
	r.energies["alpha_minus_infinity"] = resf.alpha_minus;
	double const gap = resf.alpha_minus - res.alpha_minus;
	r.diagnostics["gap"] = gap;
	r.check("well lowers alpha^- below the constant-potential value by more than 1e-3 relative",
		gap > 1e-3 * std::abs(resf.alpha_minus), fmt(res.alpha_minus) + " vs " + fmt(resf.alpha_minus));
	return {r, {}};
}

RunOutput exp_symmetry(ExperimentConfig const & cfg)
{
	RunRecord r = start_record(cfg);
	double const p = cfg.p, beta = cfg.beta;
	auto const pot = cfg.potentials();
	double const lambda = cfg.V.inf(), rho_min = cfg.rho.inf();
	guard(r, p > 2 && p < 3, "2 < p < 3");
	double const Vx = cfg.V.value(cfg.x0), rx = cfg.rho.value(cfg.x0);
	r.diagnostics["V(x0)"] = Vx;
	r.diagnostics["rho(x0)"] = rx;
	guard(r, lambda < Vx && Vx < cfg.lambda0 && rho_min < rx && rx < cfg.k0, "(D8): x0 in D");
	auto const lam = lambda_setup(cfg, {constant_profile(Vx), constant_profile(rx)}, r);
	guard(r, !lam.q.unbounded && lam.q.Lambda < beta, "Lambda(lambda0, k0) = " + fmt(lam.q.Lambda) + " < beta");
	double const upper = coercive_upper(cfg.V.far, cfg.rho.far, p);
	guard(r, beta < upper, "beta < coercive upper " + fmt(upper));
	enforce_guards(r, cfg);
	r.deviations.push_back("radial searches use the inverse-Laplacian preconditioner");

	SolverConfig radial_cfg = cfg.solver;
	radial_cfg.precondition = true;
	auto const rg = RadialGrid::make(cfg.m, cfg.R);
	// Centred bumps and shells, so that ring-shaped radial states are searched too.
	auto const seeds = gaussian_seeds(rg, {1.0, 2.0, 4.0}, {0.0, 0.1 * cfg.R, 0.25 * cfg.R, cfg.x0 / cfg.eps});

	// K: radial infimum with V == inf V, rho == inf rho; bounds the radial infimum below.
	auto const flat = descend_multistart(seeds, constant_params(rg, p, beta, lambda, rho_min), radial_cfg);
	double const K = -flat.energy.total;
	r.constants["K"] = K;
	record_report(r, "K", flat.report);
	auto const radial = descend_multistart(seeds, make_params(rg, p, beta, pot), radial_cfg);
	double const delta = radial.energy.total;
	r.energies["delta"] = delta;
	record_report(r, "radial", radial.report);

	// Remark on the translated Lambda minimiser at x0 / eps.
	auto const g = GridSpec::make(cfg.n, cfg.L);
	auto const P = make_params(g, p, beta, pot);
	Vec3 const shift(cfg.x0 / cfg.eps, 0, 0);
	auto const qr = resample(lam.q.pair, rg);
	Pair3D const translated = embed(qr, g, shift);
	auto const et = energy(translated, P);
	auto const e0 = energy(translated, constant_params(g, p, beta, cfg.lambda0, cfg.k0));
	r.check("translated minimiser sees V below lambda0", et.external < e0.external,
		fmt(et.external) + " < " + fmt(e0.external));
	r.check("translated minimiser sees rho below k0", et.coulomb < e0.coulomb,
		fmt(et.coulomb) + " < " + fmt(e0.coulomb));

	Pair3D with_centre = embed(radial.state, g) + translated;
	auto const full = descend_multistart(std::vector<Pair3D>{translated, with_centre}, P, cfg.solver);
	double const alpha = full.energy.total;
	r.energies["alpha"] = alpha;
	record_report(r, "cube", full.report);
	Vec3 const com = center_of_mass(full.state);
	r.diagnostics["com_distance"] = com.norm();
	r.diagnostics["com_cells"] = com.norm() / g.h;
	r.diagnostics["boundary_mass"] = boundary_mass(full.state);
	r.classifications["nontriviality"] = to_string(classify_nontriviality(full.state, 1e-4));

	r.check("cube descent converged", full.report.converged, to_string(full.report.outcome), true);
	r.check("radial descents converged", radial.report.converged && flat.report.converged, "", true);
	r.check("radial minimum is at least -K", delta >= -K, fmt(delta) + " >= " + fmt(-K));
	r.check("full minimum lies below -K with a gap above 1e-3 relative", alpha < -K - 1e-3 * K,
		fmt(alpha) + " < " + fmt(-K));
	r.check("minimiser centre of mass is more than two cells from the origin", com.norm() > 2 * g.h,
		fmt(com.norm() / g.h) + " cells");
	r.check("minimiser is vectorial", component_fraction(full.state) > 1e-4);
	return {r,
		{{"radial_profile.csv", pair_profile_csv(radial.state)},
			{"cube_profile_about_com.csv", pair_profile_csv(rebin(full.state, com, rg))}}};
}

using Pipeline = RunOutput (*)(ExperimentConfig const &);

std::vector<std::pair<std::string, Pipeline>> const & pipelines()
{
	static std::vector<std::pair<std::string, Pipeline>> const table{
		{"constants", exp_constants},
		{"coulomb", exp_coulomb},
		{"gradient", exp_gradient},
		{"fibering", exp_fibering},
		{"scalar", exp_scalar},
		{"inequalities", exp_inequalities},
		{"audit", exp_audit},
		{"nonexistence", exp_nonexistence},
		{"coercive", exp_coercive},
		{"multibump", exp_multibump},
		{"nehari", exp_nehari},
		{"limit", exp_limit},
		{"symmetry", exp_symmetry},
	};
	return table;
}
}  // namespace

std::vector<std::string> experiment_names()
{
	std::vector<std::string> out;
	for (auto const & [name, f] : pipelines())
		out.push_back(name);
	return out;
}

RunOutput run_experiment(ExperimentConfig const & cfg)
{
	for (auto const & [name, f] : pipelines())
		if (name == cfg.experiment)
		{
			auto const t0 = std::chrono::steady_clock::now();
			RunOutput out = f(cfg);
			out.record.wall_time = seconds_since(t0);
			return out;
		}
	throw ConfigError("unknown experiment '" + cfg.experiment + "'");
}

void write_outputs(RunOutput const & out, std::string const & dir)
{
	std::filesystem::create_directories(dir);
	std::ofstream(std::filesystem::path(dir) / "record.json") << to_json(out.record) << '\n';
	for (auto const & [name, text] : out.files)
		std::ofstream(std::filesystem::path(dir) / name) << text;
}

std::vector<RunOutput> run_sweep(ExperimentConfig const & cfg, int threads)
{
	std::vector<ExperimentConfig> points{cfg};
	points.front().sweep.clear();
	for (auto const & [key, values] : cfg.sweep)
	{
		std::vector<ExperimentConfig> next;
		for (auto const & base : points)
			for (double v : values)
			{
				ExperimentConfig c = base;
				if (key == "p")
					c.p = v;
				else if (key == "beta")
					c.beta = v;
				else
					c.eps = v;
				next.push_back(c);
			}
		points = std::move(next);
	}

	std::vector<RunOutput> results(points.size());
	std::vector<std::exception_ptr> errors(points.size());
	std::atomic<std::size_t> next{0};
	auto worker = [&] {
		for (std::size_t i = next++; i < points.size(); i = next++)
		{
			try
			{
				results[i] = run_experiment(points[i]);
			}
			catch (...)
			{
				errors[i] = std::current_exception();
			}
		}
	};
	int const n = std::max(1, std::min<int>(threads > 0 ? threads : int(std::thread::hardware_concurrency()),
		int(points.size())));
	std::vector<std::thread> pool;
	for (int t = 0; t < n; ++t)
		pool.emplace_back(worker);
	for (auto & t : pool)
		t.join();
	for (auto const & e : errors)
		if (e)
			std::rethrow_exception(e);
	return results;
}

std::string sweep_csv(std::vector<RunOutput> const & runs)
{
	std::ostringstream os;
	os.precision(17);
	os << "p,beta,eps,alpha,alpha_minus,delta,classifications,passed,exit_code\n";
	auto cfg_value = [](RunRecord const & r, std::string const & key) {
		for (auto const & [k, v] : r.config)
			if (k == key)
				return v;
		return std::string{};
	};
	auto energy_value = [](RunRecord const & r, std::string const & key) {
		auto const it = r.energies.find(key);
		if (it == r.energies.end())
			return std::string{};
		std::ostringstream s;
		s.precision(17);
		s << it->second;
		return s.str();
	};
	for (auto const & run : runs)
	{
		auto const & r = run.record;
		std::string cls;
		for (auto const & [k, v] : r.classifications)
			cls += (cls.empty() ? "" : ";") + k + "=" + v;
		os << cfg_value(r, "p") << ',' << cfg_value(r, "beta") << ',' << cfg_value(r, "eps") << ','
		   << energy_value(r, "alpha") << ',' << energy_value(r, "alpha_minus") << ',' << energy_value(r, "delta")
		   << ',' << cls << ',' << (r.passed() ? "true" : "false") << ',' << r.exit_code() << '\n';
	}
	return os.str();
}
}  // namespace hfsys
