#include "hfsys/config.hpp"

#include "hfsys/errors.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace hfsys
{
namespace
{
std::string trim(std::string const & s)
{
	auto const b = s.find_first_not_of(" \t\r");
	if (b == std::string::npos)
		return {};
	auto const e = s.find_last_not_of(" \t\r");
	return s.substr(b, e - b + 1);
}

std::string fmt(double x)
{
	std::ostringstream os;
	os << std::setprecision(17) << x;
	return os.str();
}

double to_double(std::string const & key, std::string const & s)
{
	double x = 0;
	auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
	if (ec != std::errc{} || ptr != s.data() + s.size())
		throw ConfigError("config: '" + key + "' expects a number, got '" + s + "'");
	return x;
}

long long to_int(std::string const & key, std::string const & s)
{
	long long x = 0;
	auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
	if (ec != std::errc{} || ptr != s.data() + s.size())
		throw ConfigError("config: '" + key + "' expects an integer, got '" + s + "'");
	return x;
}

bool to_bool(std::string const & key, std::string const & s)
{
	if (s == "true" || s == "1")
		return true;
	if (s == "false" || s == "0")
		return false;
	throw ConfigError("config: '" + key + "' expects true or false, got '" + s + "'");
}

std::vector<double> to_list(std::string const & key, std::string const & s)
{
	std::vector<double> out;
	std::stringstream ss(s);
	std::string item;
	while (std::getline(ss, item, ','))
		out.push_back(to_double(key, trim(item)));
	if (out.empty())
		throw ConfigError("config: '" + key + "' expects a comma-separated list");
	return out;
}

GaussianTerm to_term(std::string const & key, std::string const & s)
{
	auto const v = to_list(key, s);
	if (v.size() != 4)
		throw ConfigError("config: '" + key + "' expects depth,radius,width,shape");
	if (!(v[2] > 0) || !(v[3] >= 2) || !(v[1] >= 0))
		throw ConfigError("config: '" + key + "' needs width > 0, radius >= 0, shape >= 2");
	return {v[0], v[1], v[2], v[3]};
}

std::string bool_str(bool b)
{
	return b ? "true" : "false";
}

void echo_profile(std::vector<std::pair<std::string, std::string>> & out, std::string const & name,
	RadialProfile const & f)
{
	out.emplace_back(name + ".far", fmt(f.far));
	for (auto const & t : f.terms)
		out.emplace_back(name + ".well", fmt(t.depth) + "," + fmt(t.radius) + "," + fmt(t.width) + "," + fmt(t.shape));
}
}  // namespace

void apply_setting(ExperimentConfig & c, std::string const & key, std::string const & v)
{
	if (key == "experiment")
		c.experiment = v;
	else if (key == "p")
		c.p = to_double(key, v);
	else if (key == "beta")
		c.beta = to_double(key, v);
	else if (key == "eps")
		c.eps = to_double(key, v);
	else if (key == "V.far")
		c.V.far = to_double(key, v);
	else if (key == "V.well")
		c.V.terms.push_back(to_term(key, v));
	else if (key == "rho.far")
		c.rho.far = to_double(key, v);
	else if (key == "rho.well")
		c.rho.terms.push_back(to_term(key, v));
	else if (key == "n")
		c.n = int(to_int(key, v));
	else if (key == "L")
		c.L = to_double(key, v);
	else if (key == "m")
		c.m = int(to_int(key, v));
	else if (key == "R")
		c.R = to_double(key, v);
	else if (key == "max_iters")
		c.solver.max_iters = int(to_int(key, v));
	else if (key == "grad_tol")
		c.solver.grad_tol = to_double(key, v);
	else if (key == "c1")
		c.solver.c1 = to_double(key, v);
	else if (key == "backtrack")
		c.solver.backtrack = to_double(key, v);
	else if (key == "initial_step")
		c.solver.initial_step = to_double(key, v);
	else if (key == "memory")
		c.solver.memory = int(to_int(key, v));
	else if (key == "quasi_newton")
		c.solver.quasi_newton = to_bool(key, v);
	else if (key == "precondition")
		c.solver.precondition = to_bool(key, v);
	else if (key == "nonneg_projection")
		c.solver.nonneg_projection = to_bool(key, v);
	else if (key == "divergence_factor")
		c.solver.divergence_factor = to_double(key, v);
	else if (key == "seed")
	{
		auto const x = to_int(key, v);
		if (x < 0)
			throw ConfigError("config: seed must be nonnegative");
		c.seed = std::uint64_t(x);
	}
	else if (key == "out")
		c.out = v;
	else if (key == "strict")
		c.strict = to_bool(key, v);
	else if (key == "samples")
		c.samples = int(to_int(key, v));
	else if (key == "descents")
		c.descents = int(to_int(key, v));
	else if (key == "cases")
		c.cases = int(to_int(key, v));
	else if (key == "N_max")
		c.N_max = int(to_int(key, v));
	else if (key == "spacing")
		c.spacing = to_double(key, v);
	else if (key == "R0")
		c.R0 = to_double(key, v);
	else if (key == "lambda0")
		c.lambda0 = to_double(key, v);
	else if (key == "k0")
		c.k0 = to_double(key, v);
	else if (key == "x0")
		c.x0 = to_double(key, v);
	else if (key == "sweep.p" || key == "sweep.beta" || key == "sweep.eps")
		c.sweep[key.substr(6)] = to_list(key, v);
	else
		throw ConfigError("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config(std::string const & text)
{
	ExperimentConfig c;
	std::set<std::string> seen;
	std::istringstream in(text);
	std::string line;
	int lineno = 0;
	while (std::getline(in, line))
	{
		++lineno;
		auto const hash = line.find('#');
		if (hash != std::string::npos)
			line.erase(hash);
		line = trim(line);
		if (line.empty())
			continue;
		auto const eq = line.find('=');
		if (eq == std::string::npos)
			throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
		std::string const key = trim(line.substr(0, eq));
		std::string const value = trim(line.substr(eq + 1));
		bool const repeatable = key == "V.well" || key == "rho.well";
		if (!repeatable && !seen.insert(key).second)
			throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
		apply_setting(c, key, value);
	}
	if (c.experiment.empty())
		throw ConfigError("config: missing 'experiment'");
	if (!(c.eps > 0) || c.n < 4 || !(c.L > 0) || c.m < 8 || !(c.R > 0))
		throw ConfigError("config: eps, L, R must be positive, n >= 4, m >= 8");
	try
	{
		c.solver.validate();
	}
	catch (std::invalid_argument const & e)
	{
		throw ConfigError(std::string("config: ") + e.what());
	}
	return c;
}

ExperimentConfig load_config(std::string const & path)
{
	std::ifstream f(path);
	if (!f)
		throw ConfigError("config: cannot open '" + path + "'");
	std::stringstream ss;
	ss << f.rdbuf();
	return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const
{
	std::vector<std::pair<std::string, std::string>> out{
		{"experiment", experiment},
		{"p", fmt(p)},
		{"beta", fmt(beta)},
		{"eps", fmt(eps)},
	};
	echo_profile(out, "V", V);
	echo_profile(out, "rho", rho);
	std::vector<std::pair<std::string, std::string>> const rest{
		{"n", std::to_string(n)},
		{"L", fmt(L)},
		{"m", std::to_string(m)},
		{"R", fmt(R)},
		{"max_iters", std::to_string(solver.max_iters)},
		{"grad_tol", fmt(solver.grad_tol)},
		{"c1", fmt(solver.c1)},
		{"backtrack", fmt(solver.backtrack)},
		{"initial_step", fmt(solver.initial_step)},
		{"memory", std::to_string(solver.memory)},
		{"quasi_newton", bool_str(solver.quasi_newton)},
		{"precondition", bool_str(solver.precondition)},
		{"nonneg_projection", bool_str(solver.nonneg_projection)},
		{"divergence_factor", fmt(solver.divergence_factor)},
		{"seed", std::to_string(seed)},
		{"strict", bool_str(strict)},
		{"samples", std::to_string(samples)},
		{"descents", std::to_string(descents)},
		{"cases", std::to_string(cases)},
		{"N_max", std::to_string(N_max)},
		{"spacing", fmt(spacing)},
		{"R0", fmt(R0)},
		{"lambda0", fmt(lambda0)},
		{"k0", fmt(k0)},
		{"x0", fmt(x0)},
	};
	out.insert(out.end(), rest.begin(), rest.end());
	for (auto const & [k, vals] : sweep)
	{
		std::string s;
		for (std::size_t i = 0; i < vals.size(); ++i)
			s += (i ? "," : "") + fmt(vals[i]);
		out.emplace_back("sweep." + k, s);
	}
	return out;
}

Potentials ExperimentConfig::potentials() const
{
	return scale_potentials({V, rho}, eps);
}

std::string config_hash(ExperimentConfig const & cfg)
{
	std::uint64_t h = 1469598103934665603ull;
	for (auto const & [k, v] : cfg.echo())
		for (char ch : k + "=" + v + "\n")
		{
			h ^= std::uint8_t(ch);
			h *= 1099511628211ull;
		}
	std::ostringstream os;
	os << std::hex << std::setw(16) << std::setfill('0') << h;
	return os.str();
}
}  // namespace hfsys
