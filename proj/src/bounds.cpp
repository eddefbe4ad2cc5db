#include "hfsys/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hfsys
{
ThresholdReport make_report(std::string name, std::string inputs, double value, double oracle)
{
	return {std::move(name), std::move(inputs), value, oracle,
		std::abs(value - oracle) < 1e-8 * (1 + std::abs(value))};
}

double golden_section_min(std::function<double(double)> const & f, double lo, double hi, double tol)
{
	double const invphi = (std::sqrt(5.0) - 1) / 2;
	double a = lo, b = hi;
	double c = b - invphi * (b - a);
	double d = a + invphi * (b - a);
	double fc = f(c), fd = f(d);
	for (int it = 0; it < 400 && (b - a) > tol * (1 + std::abs(a) + std::abs(b)); ++it)
	{
		if (fc < fd)
		{
			b = d;
			d = c;
			fd = fc;
			c = b - invphi * (b - a);
			fc = f(c);
		}
		else
		{
			a = c;
			c = d;
			fc = fd;
			d = a + invphi * (b - a);
			fd = f(d);
		}
	}
	return fc < fd ? c : d;
}

double scan_min_value(std::function<double(double)> const & f, double lo, double hi)
{
	int const count = 4001;
	double const la = std::log(lo), lb = std::log(hi);
	double const step = (lb - la) / (count - 1);
	int best = 0;
	double best_val = std::numeric_limits<double>::infinity();
	for (int i = 0; i < count; ++i)
	{
		double const val = f(std::exp(la + i * step));
		if (val < best_val)
		{
			best_val = val;
			best = i;
		}
	}
	double const a = la + std::max(best - 1, 0) * step;
	double const b = la + std::min(best + 1, count - 1) * step;
	double const x = golden_section_min([&](double t) { return f(std::exp(t)); }, a, b, 1e-15);
	return std::min(best_val, f(std::exp(x)));
}

double argmax_g(double beta, double p)
{
	if (beta >= (p - 2) / 2)
		return 0.5;
	auto neg = [&](double s) { return -g_beta(s, beta, p); };
	int const count = 2001;
	int best = 0;
	for (int i = 1; i < count; ++i)
		if (neg(0.5 * i / (count - 1)) < neg(0.5 * best / (count - 1)))
			best = i;
	double const a = 0.5 * std::max(best - 1, 0) / (count - 1);
	double const b = 0.5 * std::min(best + 1, count - 1) / (count - 1);
	return golden_section_min(neg, a, b, 1e-15);
}

namespace
{
void check_fcd(double c, double beta, double p)
{
	if (!(c > 0) || !(beta > -1) || !(p > 2 && p < 3))
		throw std::invalid_argument("f_cd: need c > 0, beta > -1, 2 < p < 3");
}

template <class F>
double bisect(F && f, double lo, double hi)
{
	double flo = f(lo);
	for (int it = 0; it < 200; ++it)
	{
		double const mid = 0.5 * (lo + hi);
		if (mid <= lo || mid >= hi)
			break;
		double const fm = f(mid);
		if ((fm > 0) == (flo > 0))
		{
			lo = mid;
			flo = fm;
		}
		else
			hi = mid;
	}
	return 0.5 * (lo + hi);
}
}  // namespace

FcdConstants f_cd_constants(double c, double beta, double p)
{
	check_fcd(c, beta, p);
	return {f_cd_d_c(c, beta, p), f_cd_s_c(c, beta, p)};
}

std::optional<FcdInterval> f_cd_interval(double c, double d, double beta, double p)
{
	auto const k = f_cd_constants(c, beta, p);
	if (d >= k.d_c)
		return std::nullopt;
	auto f = [&](double s) { return f_cd(s, c, d, beta, p); };
	double const eta = d <= 0 ? 0.0 : bisect(f, 0.0, k.s_c);
	double hi = 2 * k.s_c;
	while (f(hi) <= 0)
		hi *= 2;
	return FcdInterval{eta, bisect(f, k.s_c, hi)};
}

ThresholdReport pointwise_min_constant(double theta, double k, double p, PointwiseVariant v)
{
	if (!(theta > 0) || !(k > 0) || !(p > 2 && p < 3))
		throw std::invalid_argument("pointwise_min_constant: need theta, k > 0 and 2 < p < 3");
	double const value = pointwise_min_closed(theta, k, p, v);
	double oracle;
	std::string name;
	if (v == PointwiseVariant::lions)
	{
		name = "d_lions";
		oracle = scan_min_value([&](double s) {
			return (theta * s * s + std::sqrt(2.0) * k * s * s * s) / std::pow(s, p);
		});
	}
	else
	{
		name = "d_appendix";
		oracle = p * scan_min_value([&](double s) {
			return (theta * s * s + k * s * s * s) / std::pow(s, p);
		});
	}
	std::ostringstream in;
	in << "theta=" << theta << ";k=" << k << ";p=" << p;
	return make_report(name, in.str(), value, oracle);
}

double m_beta(double V, double rho, double beta, double p)
{
	auto const iv = f_cd_interval(rho, V, beta, p);
	if (!iv)
		return 0.0;
	auto h = [&](double s) { return s * s * f_cd(s, rho, V, beta, p); };
	double const lo = std::max(iv->eta, 1e-300);
	double const s = golden_section_min(h, lo, iv->xi, 1e-15);
	return std::min(h(s), 0.0);
}

double m_beta_scan(double V, double rho, double beta, double p)
{
	double const val = scan_min_value([&](double s) {
		return V * s * s / 4 + rho * s * s * s / std::sqrt(8.0) - (1 + beta) / p * std::pow(s, p);
	}, 1e-12, 1e60);
	return std::min(val, 0.0);
}

double beta_hat_ratio(double beta, double lambda, double V_max, double rho_max, double d0, double S, double p)
{
	double const pi = std::numbers::pi;
	double const h = 16 * std::cbrt(2.0) * rho_max * rho_max / (3 * std::sqrt(3.0) * pi);
	double const A = h * h * std::pow(2 * (6 - p) / (d0 * (p - 2)), 3);
	double const g = gamma_bound(beta, lambda, V_max, rho_max, S, p);
	return A * g * g * (4 - p) * (4 - p) / (4 * p * (p - 2));
}

double beta_hat(double lambda, double V_max, double rho_max, double d0, double S, double p)
{
	if (p >= classification_exponent())
		throw NotApplicable("beta_hat: classification holds for every beta when p >= (1+sqrt73)/3");
	auto ratio = [&](double b) { return beta_hat_ratio(b, lambda, V_max, rho_max, d0, S, p); };
	double lo = (p - 2) / 2;
	if (ratio(lo) < 1)
		return lo;
	double hi = lo + 1;
	while (ratio(hi) >= 1)
	{
		lo = hi;
		hi *= 2;
		if (hi > 1e300)
			throw NoConvergence("beta_hat: no bracket");
	}
	for (int it = 0; it < 400 && hi - lo > 1e-13 * hi; ++it)
	{
		double const mid = 0.5 * (lo + hi);
		(ratio(mid) < 1 ? hi : lo) = mid;
	}
	return hi;
}

Sandwich alpha_minus_sandwich(double beta, double lambda, double rho_max, double S, double p)
{
	double const g = max_g(beta, p);
	double const Sp = std::pow(S, p);
	double const lower = (p - 2) / (4 * p) * std::pow(Sp / g, 2 / (p - 2));
	double const upper = std::min(
		filtration_level(lambda, rho_max, p), (p - 2) / (2 * p) * std::pow(S, 2 * p / (p - 2)));
	return {lower, upper};
}

std::vector<ThresholdReport> constants_table()
{
	std::vector<ThresholdReport> out;
	double const p = 2.5;

	auto lions = pointwise_min_constant(1, 1, p, PointwiseVariant::lions);
	lions.name = "d_lambda_rho_min";
	out.push_back(lions);
	out.push_back(make_report("nonexistence_bound", lions.inputs, lions.value - 1, lions.oracle_value - 1));

	auto app = pointwise_min_constant(1, 1, p, PointwiseVariant::appendix);
	out.push_back(app);
	out.push_back(make_report("lambda_lower_bound", app.inputs, lambda_lower_bound(1.0, 1.0, p),
		app.oracle_value / 2 - 1));

	// Largest beta with a nonnegative pointwise minimum at (V, rho) = (1, 1).
	double const window = p * scan_min_value([&](double s) {
		return std::pow(s, 2 - p) / 4 + std::pow(s, 3 - p) / std::sqrt(8.0);
	}) - 1;
	out.push_back(make_report("coercive_upper", "V_inf=1;rho_inf=1;p=2.5", coercive_upper(1.0, 1.0, p), window));

	double const c = 1, beta = 1;
	auto const k = f_cd_constants(c, beta, p);
	double const s_oracle = bisect(
		[&](double s) { return c / std::sqrt(8.0) - (1 + beta) * (p - 2) / p * std::pow(s, p - 3); },
		1e-8, 1e8);
	out.push_back(make_report("s_c", "c=1;beta=1;p=2.5", k.s_c, s_oracle));
	double const d_oracle = -4 * scan_min_value([&](double s) { return f_cd(s, c, 0.0, beta, p); });
	out.push_back(make_report("d_c", "c=1;beta=1;p=2.5", k.d_c, d_oracle));

	double const g_half = std::pow(2.0, -(p - 2) / 2) * (1 + beta);
	double const g_oracle = -scan_min_value([&](double s) { return -g_beta(s, beta, p); }, 1e-8, 1 - 1e-12);
	out.push_back(make_report("g_beta_half", "beta=1;p=2.5", g_half, g_oracle));

	double const p4 = 3.5;
	double const xb = xbar(1.0, 1.0, p4);
	out.push_back(make_report("xbar", "lambda=1;rho_max=1;p=3.5", xb,
		4 * p4 / (p4 - 2) * filtration_level(1.0, 1.0, p4)));
	out.push_back(make_report("classification_exponent", "", classification_exponent(),
		bisect([](double q) { return 3 * q * q - 2 * q - 24; }, 2.0, 4.0)));
	return out;
}
}  // namespace hfsys
