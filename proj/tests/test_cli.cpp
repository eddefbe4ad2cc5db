#include "hfsys/config.hpp"
#include "hfsys/errors.hpp"
#include "hfsys/experiments.hpp"
#include "hfsys/record.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace hfsys;

TEST_CASE("config parsing")
{
	auto const cfg = parse_config(R"(
# comment line
experiment = coercive
p = 2.5   # trailing comment
beta = 2
V.far = 2.5
V.well = 2.35,0,7,8
V.well = 0.1,3,1,2
rho.far = 0.5
precondition = true
sweep.beta = 1,2,3
seed = 42
)");
	CHECK(cfg.experiment == "coercive");
	CHECK(cfg.p == 2.5);
	CHECK(cfg.beta == 2);
	REQUIRE(cfg.V.terms.size() == 2);
	CHECK(cfg.V.terms[1].radius == 3);
	CHECK(cfg.rho.far == 0.5);
	CHECK(cfg.rho.terms.empty());
	CHECK(cfg.solver.precondition);
	CHECK(cfg.seed == 42);
	CHECK(cfg.sweep.at("beta") == std::vector<double>{1, 2, 3});
}

TEST_CASE("config errors")
{
	CHECK_THROWS_AS(parse_config("p = 2.5\n"), ConfigError);
	CHECK_THROWS_AS(parse_config("experiment = x\nbogus = 1\n"), ConfigError);
	CHECK_THROWS_AS(parse_config("experiment = x\np = 2.5\np = 3\n"), ConfigError);
	CHECK_THROWS_AS(parse_config("experiment = x\np = two\n"), ConfigError);
	CHECK_THROWS_AS(parse_config("experiment = x\nn = 3.5\n"), ConfigError);
	CHECK_THROWS_AS(parse_config("experiment = x\nV.well = 1,0,2\n"), ConfigError);
	CHECK_THROWS_AS(parse_config("experiment = x\nV.well = 1,0,-2,2\n"), ConfigError);
	CHECK_THROWS_AS(parse_config("experiment = x\nstrict = maybe\n"), ConfigError);
	CHECK_THROWS_AS(parse_config("experiment = x\nno equals sign\n"), ConfigError);
	CHECK_THROWS_AS(parse_config("experiment = x\ngrad_tol = -1\n"), ConfigError);
	CHECK_THROWS_AS(parse_config("experiment = x\nseed = -3\n"), ConfigError);
	CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), ConfigError);
	CHECK_THROWS_AS(run_experiment(parse_config("experiment = nothing\n")), ConfigError);
}

TEST_CASE("config echo round-trips and drives the hash")
{
	auto const a = parse_config("experiment = limit\nV.well = 0.3,0,2,2\nbeta = 20\n");
	std::string text;
	for (auto const & [k, v] : a.echo())
		text += k + " = " + v + "\n";
	auto const b = parse_config(text);
	CHECK(b.echo() == a.echo());
	CHECK(config_hash(a) == config_hash(b));
	CHECK(config_hash(a).size() == 16);

	auto c = a;
	c.beta = 20.000000001;
	CHECK(config_hash(c) != config_hash(a));
	c = a;
	c.out = "elsewhere";
	CHECK(config_hash(c) == config_hash(a));
}

TEST_CASE("record JSON round-trip")
{
	RunRecord r;
	r.experiment = "demo";
	r.config = {{"p", "2.5"}, {"beta", "1"}};
	r.config_hash = "0123456789abcdef";
	r.guard_notes = {"holds: something"};
	r.deviations = {"a deviation"};
	r.constants["x"] = 0.1 + 0.2;
	r.constants["inf"] = std::numeric_limits<double>::infinity();
	r.energies["alpha"] = -66.78304087123456;
	r.residuals["tiny"] = 1e-300;
	r.diagnostics["minus_inf"] = -std::numeric_limits<double>::infinity();
	r.classifications["nehari"] = "N-";
	r.check("first", true, "ok");
	r.check("second", false, "bad", true);
	r.wall_time = 1.25;

	auto const back = record_from_json(to_json(r));
	CHECK(back == r);
	CHECK(to_json(back) == to_json(r));
	CHECK(back.exit_code() == 4);

	auto nan_record = r;
	nan_record.residuals["nan"] = std::numeric_limits<double>::quiet_NaN();
	CHECK(std::isnan(record_from_json(to_json(nan_record)).residuals.at("nan")));
}

TEST_CASE("record loader rejects unknown schema versions and malformed text")
{
	RunRecord r;
	r.experiment = "demo";
	auto text = to_json(r);
	auto const pos = text.find("\"schema_version\": 1");
	REQUIRE(pos != std::string::npos);
	text.replace(pos, 19, "\"schema_version\": 99");
	CHECK_THROWS_AS(record_from_json(text), ConfigError);
	CHECK_THROWS_AS(record_from_json("{ not json"), ConfigError);
	CHECK_THROWS_AS(record_from_json("{\"schema_version\": 1}"), ConfigError);
}

TEST_CASE("exit codes")
{
	RunRecord r;
	CHECK(r.exit_code() == 0);
	r.check("a", true);
	CHECK(r.exit_code() == 0);
	r.check("b", false);
	CHECK(r.exit_code() == 1);
	r.check("c", false, "", true);
	CHECK(r.exit_code() == 4);

	RunRecord unguarded;
	unguarded.guarded = false;
	unguarded.check("observation", false);
	CHECK(unguarded.passed());
	CHECK(unguarded.exit_code() == 0);
	CHECK_FALSE(unguarded.contracts[0].asserted);
}

TEST_CASE("runs are deterministic apart from wall time")
{
	auto cfg = parse_config("experiment = gradient\nn = 16\nL = 6\ncases = 9\nseed = 3\n");
	auto a = run_experiment(cfg).record;
	auto b = run_experiment(cfg).record;
	a.wall_time = b.wall_time = 0;
	CHECK(to_json(a) == to_json(b));
	CHECK(a.passed());

	cfg.seed = 4;
	auto c = run_experiment(cfg).record;
	c.wall_time = 0;
	CHECK(c.config_hash != a.config_hash);
	CHECK(c.residuals != a.residuals);
}

TEST_CASE("constants experiment")
{
	auto const out = run_experiment(parse_config("experiment = constants\n"));
	CHECK(out.record.passed());
	CHECK(out.record.contracts.size() >= 10);
	CHECK(out.record.constants.at("nonexistence_bound") == doctest::Approx(1.37841).epsilon(1e-5));
}

TEST_CASE("strict mode turns a guard failure into GuardViolation")
{
	auto cfg = parse_config("experiment = nonexistence\nbeta = 2\nn = 16\nL = 6\nsamples = 5\ndescents = 0\n");
	auto const loose = run_experiment(cfg).record;
	CHECK_FALSE(loose.guarded);
	for (auto const & c : loose.contracts)
		CHECK_FALSE(c.asserted);
	CHECK(loose.exit_code() == 0);
	cfg.strict = true;
	CHECK_THROWS_AS(run_experiment(cfg), GuardViolation);
}

TEST_CASE("sweep keeps point order and writes the aggregate table")
{
	auto const cfg = parse_config(
		"experiment = fibering\np = 3.5\nbeta = 20\nm = 400\nR = 30\nsweep.beta = 5,20\nsweep.p = 3.2,3.5\n");
	auto const runs = run_sweep(cfg, 2);
	REQUIRE(runs.size() == 4);
	auto value = [](RunRecord const & r, std::string const & key) {
		for (auto const & [k, v] : r.config)
			if (k == key)
				return std::stod(v);
		return -1.0;
	};
	CHECK(value(runs[0].record, "beta") == 5);
	CHECK(value(runs[0].record, "p") == 3.2);
	CHECK(value(runs[1].record, "p") == 3.5);
	CHECK(value(runs[2].record, "beta") == 20);

	auto const csv = sweep_csv(runs);
	std::istringstream in(csv);
	std::string line;
	std::getline(in, line);
	CHECK(line == "p,beta,eps,alpha,alpha_minus,delta,classifications,passed,exit_code");
	int rows = 0;
	while (std::getline(in, line))
		++rows;
	CHECK(rows == 4);
}

TEST_CASE("outputs are written to the run directory")
{
	auto const dir = std::filesystem::temp_directory_path() / "hfsys_test_outputs";
	std::filesystem::remove_all(dir);
	auto const out = run_experiment(parse_config("experiment = scalar\np = 3\nm = 400\nR = 30\n"));
	write_outputs(out, dir.string());
	REQUIRE(std::filesystem::exists(dir / "record.json"));
	REQUIRE(std::filesystem::exists(dir / "ground_state.csv"));
	std::ifstream f(dir / "record.json");
	std::stringstream ss;
	ss << f.rdbuf();
	CHECK(record_from_json(ss.str()) == out.record);
	std::ifstream g(dir / "ground_state.csv");
	std::string header;
	std::getline(g, header);
	CHECK(header == "r,value");
	std::filesystem::remove_all(dir);
}
