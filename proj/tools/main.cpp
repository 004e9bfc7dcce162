#include "CLI11.hpp"
#include "run.hpp"

#include "maslov/common.hpp"

#include <fstream>
#include <iostream>

using maslov::cli::json;

namespace {

enum class Kind { text, real, integer };

struct Flag {
    const char* name;
    Kind kind;
    const char* help;
};

const Flag kFlags[] = {
    {"potential", Kind::text, "constant | ac_pulse | ac_system | tabulated"},
    {"table", Kind::text, "tabulated potential CSV"},
    {"n", Kind::integer, "system dimension (constant potential)"},
    {"s", Kind::real, "convection speed"},
    {"lambda-min", Kind::real, "scan lambda range start"},
    {"lambda-max", Kind::real, "scan lambda range end"},
    {"x-min", Kind::real, "scan x range start"},
    {"x-max", Kind::real, "scan x range end"},
    {"grid-x", Kind::integer, "scan x nodes"},
    {"grid-lambda", Kind::integer, "scan lambda nodes"},
    {"target", Kind::text, "at_x_infty | asymptotic"},
    {"x-infty", Kind::real, "right edge of the box"},
    {"lambda-infty", Kind::real, "depth of the box"},
    {"half-width", Kind::real, "truncation L"},
    {"rtol", Kind::real, "integrator relative tolerance"},
    {"atol", Kind::real, "integrator absolute tolerance"},
    {"angle-tol", Kind::real, "snap tolerance at -1"},
    {"zero-shift", Kind::real, "top shelf sits at lambda = -zero_shift"},
    {"margin", Kind::real, "lambda_infty margin below the spectral floor"},
    {"lambda-samples", Kind::integer, "initial samples per lambda shelf"},
    {"sample-count", Kind::integer, "x steps are capped at 2L / sample_count"},
    {"summary", Kind::text, "summary JSON path (default stdout)"},
    {"csv", Kind::text, "CSV output path"},
    {"export-table", Kind::text, "write the potential as a table CSV"},
    {"seed", Kind::integer, "seed for the check suites"},
    {"threads", Kind::integer, "worker threads (default MASLOV_THREADS)"},
};

std::string key_of(const std::string& flag) {
    std::string k = flag;
    for (char& ch : k)
        if (ch == '-') ch = '_';
    if (k == "summary") return "summary_path";
    if (k == "csv") return "csv_path";
    return k;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Morse index of Schrodinger operators on the line via the Maslov box"};
    app.require_subcommand(1);
    std::string config_path;
    std::vector<std::string> params;
    std::map<std::string, std::string> values;
    std::map<std::string, std::vector<CLI::Option*>> options;

    for (const char* name : {"morse", "scan", "box", "angles", "check"}) {
        CLI::App* sub = app.add_subcommand(name, std::string("run ") + name);
        sub->add_option("--config", config_path, "JSON run configuration; flags override it");
        sub->add_option("--param", params, "potential parameter k=v (repeatable)");
        for (const Flag& f : kFlags)
            options[f.name].push_back(sub->add_option(std::string("--") + f.name, values[f.name], f.help));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    maslov::cli::RunConfig config;
    try {
        json j = json::object();
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw maslov::ValidationError("cannot open config " + config_path);
            try {
                j = json::parse(in);
            } catch (const json::exception& e) {
                throw maslov::ValidationError(std::string("config is not valid JSON: ") + e.what());
            }
            if (!j.is_object()) throw maslov::ValidationError("config must be a JSON object");
        }
        j["command"] = app.get_subcommands().front()->get_name();
        for (const Flag& f : kFlags) {
            bool given = false;
            for (CLI::Option* o : options[f.name]) given = given || o->count() > 0;
            if (!given) continue;
            const std::string& v = values[f.name];
            try {
                if (f.kind == Kind::text) j[key_of(f.name)] = v;
                else if (f.kind == Kind::real) j[key_of(f.name)] = std::stod(v);
                else j[key_of(f.name)] = std::stoll(v);
            } catch (const std::exception&) {
                throw maslov::ValidationError(std::string("--") + f.name + " expects a number");
            }
        }
        for (const std::string& p : params) {
            auto eq = p.find('=');
            if (eq == std::string::npos || eq == 0) throw maslov::ValidationError("--param expects k=v, got '" + p + "'");
            try {
                j["params"][p.substr(0, eq)] = std::stod(p.substr(eq + 1));
            } catch (const std::exception&) {
                throw maslov::ValidationError("--param value is not a number: '" + p + "'");
            }
        }
        config = maslov::cli::RunConfig::from_json(j);
    } catch (const maslov::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    maslov::cli::RunArtifact artifact = maslov::cli::run(config);
    try {
        maslov::cli::emit(config, artifact);
    } catch (const maslov::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (!artifact.reason.empty()) std::cerr << (artifact.accepted ? "note: " : "rejected: ") << artifact.reason << "\n";
    return artifact.exit_code;
}
