#include "hfsys/record.hpp"

#include "hfsys/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace hfsys
{
using json = nlohmann::ordered_json;

void RunRecord::check(std::string name, bool ok, std::string detail, bool convergence)
{
	contracts.push_back({std::move(name), ok, guarded, convergence, std::move(detail)});
}

bool RunRecord::passed() const
{
	for (auto const & c : contracts)
		if (c.asserted && !c.passed)
			return false;
	return true;
}

int RunRecord::exit_code() const
{
	int code = 0;
	for (auto const & c : contracts)
		if (c.asserted && !c.passed)
		{
			if (c.convergence)
				return 4;
			code = 1;
		}
	return code;
}

namespace
{
json number(double x)
{
	if (std::isnan(x))
		return "nan";
	if (std::isinf(x))
		return x > 0 ? "inf" : "-inf";
	return x;
}

double number_from(json const & j)
{
	if (j.is_number())
		return j.get<double>();
	auto const s = j.get<std::string>();
	if (s == "nan")
		return std::numeric_limits<double>::quiet_NaN();
	if (s == "inf")
		return std::numeric_limits<double>::infinity();
	if (s == "-inf")
		return -std::numeric_limits<double>::infinity();
	throw ConfigError("record: bad number '" + s + "'");
}

json number_map(std::map<std::string, double> const & m)
{
	json j = json::object();
	for (auto const & [k, v] : m)
		j[k] = number(v);
	return j;
}

std::map<std::string, double> number_map_from(json const & j)
{
	std::map<std::string, double> m;
	for (auto const & [k, v] : j.items())
		m[k] = number_from(v);
	return m;
}
}  // namespace

std::string to_json(RunRecord const & r)
{
	json j;
	j["schema_version"] = r.schema_version;
	j["experiment"] = r.experiment;
	json cfg = json::array();
	for (auto const & [k, v] : r.config)
		cfg.push_back({k, v});
	j["config"] = cfg;
	j["config_hash"] = r.config_hash;
	j["guarded"] = r.guarded;
	j["guard_notes"] = r.guard_notes;
	j["deviations"] = r.deviations;
	j["constants"] = number_map(r.constants);
	j["energies"] = number_map(r.energies);
	j["residuals"] = number_map(r.residuals);
	j["diagnostics"] = number_map(r.diagnostics);
	j["classifications"] = r.classifications;
	json cs = json::array();
	for (auto const & c : r.contracts)
		cs.push_back({{"name", c.name}, {"passed", c.passed}, {"asserted", c.asserted},
			{"convergence", c.convergence}, {"detail", c.detail}});
	j["contracts"] = cs;
	j["passed"] = r.passed();
	j["wall_time"] = r.wall_time;
	return j.dump(2);
}

RunRecord record_from_json(std::string const & text)
{
	json j;
	try
	{
		j = json::parse(text);
	}
	catch (json::exception const & e)
	{
		throw ConfigError(std::string("record: ") + e.what());
	}
	if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
		throw ConfigError("record: missing schema_version");
	if (j["schema_version"].get<int>() != kSchemaVersion)
		throw ConfigError("record: unsupported schema version " + j["schema_version"].dump());
	try
	{
		RunRecord r;
		r.schema_version = j["schema_version"].get<int>();
		r.experiment = j.at("experiment").get<std::string>();
		for (auto const & kv : j.at("config"))
			r.config.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
		r.config_hash = j.at("config_hash").get<std::string>();
		r.guarded = j.at("guarded").get<bool>();
		r.guard_notes = j.at("guard_notes").get<std::vector<std::string>>();
		r.deviations = j.at("deviations").get<std::vector<std::string>>();
		r.constants = number_map_from(j.at("constants"));
		r.energies = number_map_from(j.at("energies"));
		r.residuals = number_map_from(j.at("residuals"));
		r.diagnostics = number_map_from(j.at("diagnostics"));
		r.classifications = j.at("classifications").get<std::map<std::string, std::string>>();
		for (auto const & c : j.at("contracts"))
			r.contracts.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
				c.at("asserted").get<bool>(), c.at("convergence").get<bool>(), c.at("detail").get<std::string>()});
		r.wall_time = j.at("wall_time").get<double>();
		return r;
	}
	catch (json::exception const & e)
	{
		throw ConfigError(std::string("record: ") + e.what());
	}
}
}  // namespace hfsys
