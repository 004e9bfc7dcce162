#include "doctest.h"

#include "maslov/common.hpp"
#include "run.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace maslov::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / "maslov_cli_unit";
    fs::create_directories(d);
    return d / name;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
    RunConfig c = RunConfig::from_json(json::parse(R"({"command": "scan", "potential": "ac_system",
        "params": {"c": -1}, "grid_x": 3, "x_infty": 1.5})"));
    CHECK(c.command == "scan");
    CHECK(c.params.at("c") == -1.0);
    CHECK(c.grid_x == 3);
    CHECK(c.x_infty_set);
    CHECK(c.x_infty == 1.5);
    CHECK_FALSE(c.lambda_infty_set);
    CHECK(c.to_json()["x_infty"] == 1.5);
    CHECK_FALSE(c.to_json().contains("lambda_infty"));

    CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"colour": 1})")), maslov::ValidationError);
    CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"grid_x": "many"})")), maslov::ValidationError);
    CHECK_THROWS_AS(RunConfig::from_json(json::parse(R"({"params": {"c": "x"}})")), maslov::ValidationError);
    CHECK_THROWS_AS(RunConfig::from_json(json::parse("[1, 2]")), maslov::ValidationError);
}

TEST_CASE("validation") {
    RunConfig c;
    CHECK_NOTHROW(c.validate());
    c.command = "integrate";
    CHECK_THROWS_AS(c.validate(), maslov::ValidationError);
    c = {};
    c.lambda_min = 1.0;
    c.lambda_max = 0.0;
    CHECK_THROWS_AS(c.validate(), maslov::ValidationError);
    c = {};
    c.potential = "tabulated";
    CHECK_THROWS_AS(c.validate(), maslov::ValidationError);
    c = {};
    c.rtol = -1;
    CHECK_THROWS_AS(c.validate(), maslov::ValidationError);
    c = {};
    c.target = "sideways";
    CHECK_THROWS_AS(c.validate(), maslov::ValidationError);
}

TEST_CASE("exit codes") {
    RunConfig c;
    RunArtifact a = run(c);
    CHECK(a.exit_code == 0);
    CHECK(a.accepted);
    CHECK(a.summary["summary"]["morse_index"] == 1);
    CHECK(a.summary["summary"]["principal_maslov"] == -1);
    CHECK(a.summary["version"] == "1.0.0");
    CHECK(a.summary["potential"]["name"] == "ac_pulse");

    c.potential = "nowhere";
    CHECK(run(c).exit_code == 2);

    c = {};
    c.potential = "constant";
    c.params["v"] = 0.0;
    a = run(c);
    CHECK(a.exit_code == 2);
    CHECK(a.reason.rfind("domain:", 0) == 0);

    c = {};
    c.params["c"] = 1.0;
    CHECK(run(c).exit_code == 2);

    c = {};
    c.potential = "constant";
    c.n = 2;
    c.params["v"] = 1.5;
    a = run(c);
    CHECK(a.exit_code == 0);
    CHECK(a.summary["summary"]["morse_index"] == 0);

    c = {};
    c.potential = "tabulated";
    c.table = scratch("absent.csv").string();
    CHECK(run(c).exit_code == 2);
}

TEST_CASE("box writes one csv row per crossing") {
    RunConfig c;
    c.command = "box";
    RunArtifact a = run(c);
    CHECK(a.exit_code == 0);
    std::istringstream in(a.csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "edge,param,multiplicity,direction,contribution");
    int rows = 0, plus = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.rfind("gammaplus,", 0) == 0) ++plus;
    }
    CHECK(plus == 1);
    CHECK(rows >= 3);
    CHECK(a.summary["diagnostics"].contains("crossings"));
}

TEST_CASE("scan csv shape") {
    RunConfig c;
    c.command = "scan";
    c.grid_x = 3;
    c.grid_lambda = 6;
    c.x_min = -3;
    c.x_max = 3;
    c.lambda_min = -2;
    c.lambda_max = 0.5;
    RunArtifact a = run(c);
    REQUIRE(a.exit_code == 0);
    CHECK(a.csv.find('\r') == std::string::npos);
    std::istringstream in(a.csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,tau,lambda,angle_index,angle,crossing,direction");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 18);
    CHECK(a.summary["summary"]["rows"] == 18);
}

TEST_CASE("angles command") {
    RunConfig c;
    c.command = "angles";
    RunArtifact a = run(c);
    CHECK(a.exit_code == 0);
    CHECK(a.summary["summary"]["principal_maslov"] == -1);
    CHECK(a.csv.rfind("x,tau,angle_index,angle\n", 0) == 0);
}

TEST_CASE("output is byte for byte reproducible") {
    RunConfig c;
    c.command = "box";
    c.potential = "ac_system";
    c.summary_path = scratch("a.json").string();
    c.csv_path = scratch("a.csv").string();
    emit(c, run(c));
    std::string json1 = slurp(c.summary_path), csv1 = slurp(c.csv_path);
    emit(c, run(c));
    CHECK(slurp(c.summary_path) == json1);
    CHECK(slurp(c.csv_path) == csv1);
    CHECK(slurp(c.summary_path).find('\r') == std::string::npos);
}

TEST_CASE("exported table reloads to the same integers") {
    RunConfig c;
    c.potential = "ac_system";
    c.export_table = scratch("export.csv").string();
    RunArtifact a = run(c);
    REQUIRE(a.exit_code == 0);
    RunConfig t;
    t.potential = "tabulated";
    t.table = c.export_table;
    RunArtifact b = run(t);
    REQUIRE(b.exit_code == 0);
    for (const char* k : {"morse_index", "principal_maslov", "flow_gamma0", "flow_gammaplus", "flow_gammainf",
                          "flow_gammaminus", "kappa", "kernel_dimension"})
        CHECK(a.summary["summary"][k] == b.summary["summary"][k]);
    CHECK(b.summary["potential"]["tail_heuristic"] == true);
}

TEST_CASE("number formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-2.0) == "-2");
}

}
