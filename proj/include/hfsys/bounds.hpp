#pragma once

#include "hfsys/errors.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace hfsys
{
/// A closed-form constant next to an independent 1D oracle.
struct ThresholdReport
{
	std::string name;
	std::string inputs;
	double value = 0;
	double oracle_value = 0;
	bool agree = false;
};

/// |value - oracle| < 1e-8 (1 + |value|).
ThresholdReport make_report(std::string name, std::string inputs, double value, double oracle);

// 1D minimisation utilities.

/// Golden-section minimum of a unimodal f on [lo, hi]; returns the abscissa.
double golden_section_min(std::function<double(double)> const & f, double lo, double hi, double tol = 1e-14);
/// Minimum value over s in [lo, hi] of f: a log-spaced scan brackets the best point,
/// then golden section in log s refines it.
double scan_min_value(std::function<double(double)> const & f, double lo = 1e-8, double hi = 1e8);

// Lemma-style scalar functions, templated on the scalar type.

template <class T>
T g_beta(T s, T beta, T p)
{
	using std::pow;
	return pow(s, p / 2) + pow(1 - s, p / 2) + 2 * beta * pow(s, p / 4) * pow(1 - s, p / 4);
}

/// Maximiser of g_beta on [0, 1/2] (symmetric about 1/2); exactly 1/2 when beta >= (p-2)/2.
double argmax_g(double beta, double p);
inline double max_g(double beta, double p)
{
	return g_beta(argmax_g(beta, p), beta, p);
}

template <class T>
T f_cd(T s, T c, T d, T beta, T p)
{
	using std::pow;
	using std::sqrt;
	return d / 4 + sqrt(T(1) / 8) * c * s - (1 + beta) / p * pow(s, p - 2);
}

struct FcdConstants
{
	double d_c;
	double s_c;
};

template <class T>
T f_cd_s_c(T c, T beta, T p)
{
	using std::pow;
	using std::sqrt;
	return pow(sqrt(T(8)) * (1 + beta) * (p - 2) / (p * c), 1 / (3 - p));
}

template <class T>
T f_cd_d_c(T c, T beta, T p)
{
	using std::pow;
	using std::sqrt;
	return (3 - p) * pow(4 * (1 + beta) / p, 1 / (3 - p))
		* pow((p - 2) / (sqrt(T(2)) * c), (p - 2) / (3 - p));
}

/// Requires c > 0, beta > 0 (well, > -1), 2 < p < 3.
FcdConstants f_cd_constants(double c, double beta, double p);

struct FcdInterval
{
	double eta;
	double xi;
};
/// Interval where f_{c,d} < 0, present iff d < d_c.
std::optional<FcdInterval> f_cd_interval(double c, double d, double beta, double p);

enum class PointwiseVariant
{
	lions,  ///< min_s (theta s^2 + sqrt2 k s^3) / s^p
	appendix  ///< p min_s (theta s^2 + k s^3) / s^p
};

template <class T>
T pointwise_min_closed(T theta, T k, T p, PointwiseVariant v)
{
	using std::pow;
	T const base = pow(theta / (3 - p), 3 - p) * pow(k / (p - 2), p - 2);
	return v == PointwiseVariant::lions ? pow(T(2), (p - 2) / 2) * base : p * base;
}

ThresholdReport pointwise_min_constant(double theta, double k, double p, PointwiseVariant v);

/// Lower bound for the nonexistence threshold: d_{lambda, rho_min} - 1.
template <class T>
T nonexistence_threshold(T lambda, T rho_min, T p)
{
	return pointwise_min_closed(lambda, rho_min, p, PointwiseVariant::lions) - 1;
}

/// Lower bound of the quotient Lambda(theta, k): (p/2)(theta/(3-p))^{3-p}(k/(p-2))^{p-2} - 1.
template <class T>
T lambda_lower_bound(T theta, T k, T p)
{
	return pointwise_min_closed(theta, k, p, PointwiseVariant::appendix) / 2 - 1;
}

template <class T>
T coercive_upper(T V_inf, T rho_inf, T p)
{
	using std::pow;
	return p / pow(T(2), (6 - p) / 2) * pow(V_inf / (3 - p), 3 - p) * pow(rho_inf / (p - 2), p - 2) - 1;
}

/// (2^{(6-p)/2}/p)(3-p)^{3-p}(p-2)^{p-2}(1+beta)
template <class T>
T l25_rhs(T beta, T p)
{
	using std::pow;
	return pow(T(2), (6 - p) / 2) / p * pow(3 - p, 3 - p) * pow(p - 2, p - 2) * (1 + beta);
}

inline bool l25_threshold_check(double a, double b, double beta, double p)
{
	return std::pow(a, 3 - p) * std::pow(b, p - 2) >= l25_rhs(beta, p);
}

/// inf_{s>=0} (V s^2/4 + rho s^3/sqrt8 - (1+beta) s^p / p); zero unless V < d_c(rho).
double m_beta(double V, double rho, double beta, double p);
/// Same infimum by a plain scan, for cross-checks.
double m_beta_scan(double V, double rho, double beta, double p);

template <class T>
T xbar(T lambda, T rho_max, T p)
{
	using std::pow;
	T const pi = std::numbers::pi_v<T>;
	return 3 * std::sqrt(T(3)) * pi * (p - 2) * pow(lambda, T(1.5))
		/ (16 * std::cbrt(T(2)) * (4 - p) * rho_max * rho_max);
}

template <class T>
T filtration_level(T lambda, T rho_max, T p)
{
	using std::pow;
	T const pi = std::numbers::pi_v<T>;
	return 3 * std::sqrt(T(3)) * pi * (p - 2) * (p - 2) * pow(lambda, T(1.5))
		/ (64 * std::cbrt(T(2)) * p * (4 - p) * rho_max * rho_max);
}

/// 16 2^{1/3} rho_max^2 / (3 sqrt3 pi lambda^{3/2})
template <class T>
T hls_constant(T lambda, T rho_max)
{
	T const pi = std::numbers::pi_v<T>;
	return 16 * std::cbrt(T(2)) * rho_max * rho_max / (3 * std::sqrt(T(3)) * pi * std::pow(lambda, T(1.5)));
}

template <class T>
T gamma_bound(T beta, T lambda, T V_max, T rho_max, T S, T p)
{
	using std::pow;
	T const pi = std::numbers::pi_v<T>;
	T const base = V_max * pow(S, p) / (lambda * (1 + beta));
	return 2 * V_max * (p - 2) / (p * lambda) * pow(base, 2 / (p - 2))
		+ 16 * std::cbrt(T(2)) * rho_max * rho_max * V_max / (3 * std::sqrt(T(3)) * pi * pow(lambda, T(2.5)))
		* pow(2 / (4 - p), 4 / (p - 2)) * pow(base, 4 / (p - 2));
}

/// (1 + sqrt 73) / 3
inline double classification_exponent()
{
	return (1 + std::sqrt(73.0)) / 3;
}

/// A gamma^2 (4-p)^2 / (4 p (p-2)); the condition holds when this is < 1.
double beta_hat_ratio(double beta, double lambda, double V_max, double rho_max, double d0, double S, double p);

/// Smallest beta >= (p-2)/2 with ratio < 1. Throws NotApplicable if p >= (1+sqrt73)/3.
double beta_hat(double lambda, double V_max, double rho_max, double d0, double S, double p);

/// B0 of the t-ordering argument; beta_1 = max{(p-2)/2, B0}.
template <class T>
T B0(T lambda, T V_max, T rho_max, T S, T p)
{
	using std::pow;
	T const pi = std::numbers::pi_v<T>;
	return 2 * V_max * pow(S, p) / (lambda * pow(4 - p, (4 - p) / 2))
		* pow(32 * std::cbrt(T(2)) * rho_max * rho_max / (3 * std::sqrt(T(3)) * pi * pow(lambda, T(1.5))), (p - 2) / 2)
		* pow(lambda / ((p - 2) * V_max), (p - 2) / 2)
		- 1;
}

inline double beta_1(double lambda, double V_max, double rho_max, double S, double p)
{
	return std::max((p - 2) / 2, B0(lambda, V_max, rho_max, S, p));
}

/// ||w_beta||_lambda^2 = (V_max S^p / (lambda g))^{2/(p-2)}
inline double w_beta_norm_sq(double g, double lambda, double V_max, double S, double p)
{
	return std::pow(V_max * std::pow(S, p) / (lambda * g), 2 / (p - 2));
}

/// alpha^infinity = (p-2)/(2p) ||w_beta||^2
inline double alpha_infinity(double beta, double lambda, double V_max, double S, double p)
{
	return (p - 2) / (2 * p) * w_beta_norm_sq(max_g(beta, p), lambda, V_max, S, p);
}

/// (2/(4-p))^{1/(p-2)}, the minimum point of eta_0.
inline double t_dip_ansatz(double p)
{
	return std::pow(2 / (4 - p), 1 / (p - 2));
}

/// Bounds around alpha^-: lower = (p-2)/(4p) C^{-2/(p-2)} with C = max g / S^p,
/// upper = min{filtration level, (p-2)/(2p) S^{2p/(p-2)}}.
struct Sandwich
{
	double lower;
	double upper;
};
Sandwich alpha_minus_sandwich(double beta, double lambda, double rho_max, double S, double p);

/// Every shipped constant with its oracle (reference inputs).
std::vector<ThresholdReport> constants_table();
}  // namespace hfsys
