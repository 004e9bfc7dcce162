#include "run.hpp"

#include "maslov/checks.hpp"
#include "maslov/maslov.hpp"
#include "maslov/potentials.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace maslov::cli {

namespace {

const char* kVersion = "1.0.0";

template <class T>
void read(const json& j, const char* key, T& out) {
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("config key '") + key + "' has the wrong type");
    }
}

std::vector<double> linspace(double a, double b, int m) {
    std::vector<double> v(m);
    for (int k = 0; k < m; ++k) v[k] = a + (b - a) * k / (m - 1);
    v.back() = b;
    return v;
}

PotentialSpec build_potential(const RunConfig& c) {
    std::set<std::string> allowed;
    if (c.potential == "constant") allowed = {"v"};
    if (c.potential == "ac_system") allowed = {"c"};
    for (const auto& [k, v] : c.params)
        if (!allowed.count(k)) throw ValidationError("potential '" + c.potential + "' has no parameter '" + k + "'");
    auto param = [&](const char* k, double d) {
        auto it = c.params.find(k);
        return it == c.params.end() ? d : it->second;
    };
    if (c.potential == "constant") {
        int n = c.n > 0 ? c.n : 1;
        return constant_potential(Matrix(param("v", 1.0) * Matrix::Identity(n, n)), c.s);
    }
    if (c.potential == "ac_pulse") return ac_pulse(c.s);
    if (c.potential == "ac_system") return ac_system(param("c", -1.0), c.s);
    return load_tabulated_csv(c.table, c.s);
}

BoxOptions box_options(const RunConfig& c) {
    BoxOptions o;
    o.evolution.half_width = c.half_width;
    o.evolution.rtol = c.rtol;
    o.evolution.atol = c.atol;
    o.evolution.sample_count = c.sample_count;
    o.angle_tol = c.angle_tol;
    o.zero_shift = c.zero_shift;
    o.margin = c.margin;
    o.lambda_samples = c.lambda_samples;
    if (c.x_infty_set) o.x_infty = c.x_infty;
    if (c.lambda_infty_set) o.lambda_infty = c.lambda_infty;
    return o;
}

json crossings_json(const std::vector<CrossingRecord>& v) {
    json a = json::array();
    for (const CrossingRecord& r : v)
        a.push_back({{"param", r.param}, {"multiplicity", r.multiplicity}, {"direction", r.direction},
                     {"contribution", r.contribution}});
    return a;
}

json report_json(const MaslovBoxReport& r, bool with_crossings) {
    json s = {{"morse_index", r.morse_index},
              {"principal_maslov", r.principal_maslov},
              {"kappa", r.kappa},
              {"kernel_dimension", r.kernel_dimension},
              {"flow_gamma0", r.flow_gamma0},
              {"flow_gammaplus", r.flow_gammaplus},
              {"flow_gammainf", r.flow_gammainf},
              {"flow_gammaminus", r.flow_gammaminus},
              {"homotopy_sum", r.homotopy_sum}};
    json d = {{"x_infty", r.x_infty},
              {"lambda_infty", r.lambda_infty},
              {"half_width", r.half_width},
              {"lambda_top", r.lambda_top},
              {"nu_min", r.bounds.nu_min},
              {"sup_norm", r.bounds.sup_norm},
              {"point_spectrum_floor", r.bounds.point_spectrum_floor}};
    if (with_crossings) {
        d["crossings"] = {{"principal", crossings_json(r.crossings_principal)},
                          {"gamma0", crossings_json(r.crossings_gamma0)},
                          {"gammaplus", crossings_json(r.crossings_gammaplus)},
                          {"gammainf", crossings_json(r.crossings_gammainf)},
                          {"gammaminus", crossings_json(r.crossings_gammaminus)}};
    }
    return {{"summary", s}, {"diagnostics", d}, {"retry_log", r.retry_log}};
}

std::string box_csv(const MaslovBoxReport& r) {
    std::ostringstream os;
    os << "edge,param,multiplicity,direction,contribution\n";
    auto rows = [&](const char* edge, const std::vector<CrossingRecord>& v) {
        for (const CrossingRecord& c : v)
            os << edge << "," << format_double(c.param) << "," << c.multiplicity << "," << c.direction << ","
               << c.contribution << "\n";
    };
    rows("principal", r.crossings_principal);
    rows("gamma0", r.crossings_gamma0);
    rows("gammaplus", r.crossings_gammaplus);
    rows("gammainf", r.crossings_gammainf);
    rows("gammaminus", r.crossings_gammaminus);
    return os.str();
}

RunArtifact run_box(const RunConfig& c, const PotentialSpec& pot, bool box) {
    MaslovBoxReport r = morse_index(pot, box_options(c));
    RunArtifact a;
    a.summary = report_json(r, box);
    a.accepted = r.accepted;
    a.reason = r.reason;
    a.exit_code = r.accepted ? 0 : 3;
    if (box) a.csv = box_csv(r);
    return a;
}

RunArtifact run_scan(const RunConfig& c, const PotentialSpec& pot) {
    ScanOptions so;
    so.box = box_options(c);
    so.mode = c.target == "asymptotic" ? TargetMode::asymptotic : TargetMode::at_x_infty;
    so.threads = c.threads;
    double L = resolve_half_width(pot, so.box.evolution);
    if (!c.x_infty_set) so.box.x_infty = default_x_infty(pot, L);
    std::vector<ScanRow> rows =
        crossing_scan(pot, linspace(c.x_min, c.x_max, c.grid_x), linspace(c.lambda_min, c.lambda_max, c.grid_lambda), so);
    std::ostringstream os;
    os << "x,tau,lambda,angle_index,angle,crossing,direction\n";
    json loci = json::array();
    for (const ScanRow& r : rows) {
        os << format_double(r.x) << "," << format_double(r.tau) << "," << format_double(r.lambda) << "," << r.angle_index
           << "," << format_double(r.angle) << "," << r.crossing << "," << r.direction << "\n";
        if (r.crossing > 0) loci.push_back({{"x", r.x}, {"lambda", r.lambda}, {"count", r.crossing}, {"direction", r.direction}});
    }
    RunArtifact a;
    a.csv = os.str();
    a.accepted = true;
    a.summary = {{"summary", {{"rows", rows.size()}, {"crossings", loci}}},
                 {"diagnostics", {{"x_infty", so.box.x_infty}, {"half_width", L}, {"target", c.target}}}};
    return a;
}

RunArtifact run_angles(const RunConfig& c, const PotentialSpec& pot) {
    BoxContext ctx = make_box_context(pot, box_options(c));
    EdgeResult e = principal_path(ctx);
    std::ostringstream os;
    os << "x,tau,angle_index,angle\n";
    for (std::size_t k = 0; k < e.path.size(); ++k)
        for (std::size_t i = 0; i < e.path.angles[k].size(); ++i)
            os << format_double(e.path.params[k]) << "," << format_double(compactify(e.path.params[k])) << "," << i << ","
               << format_double(e.path.angles[k][i]) << "\n";
    RunArtifact a;
    a.csv = os.str();
    a.accepted = true;
    a.summary = {{"summary", {{"principal_maslov", e.flow.flow}, {"samples", e.path.size()}}},
                 {"diagnostics", {{"lambda", ctx.lambda_top}, {"half_width", ctx.opts.evolution.half_width},
                                  {"endpoint_log", e.flow.endpoint_log}}}};
    return a;
}

RunArtifact run_check(const RunConfig& c) {
    RunArtifact a;
    json suites = json::array();
    bool ok = true;
    for (const SuiteResult& s : run_invariant_suites(c.seed)) {
        suites.push_back({{"name", s.name}, {"passed", s.passed}, {"worst", s.worst}, {"tolerance", s.tolerance},
                          {"cases", s.cases}});
        if (!s.passed) {
            ok = false;
            a.reason += (a.reason.empty() ? "" : "; ") + s.name + " failed";
        }
    }
    a.summary = {{"summary", {{"suites", suites}, {"all_passed", ok}}}};
    a.accepted = ok;
    a.exit_code = ok ? 0 : 3;
    return a;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunConfig RunConfig::from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    RunConfig c;
    for (const auto& [key, val] : j.items()) {
        const char* k = key.c_str();
        if (key == "command") read(j, k, c.command);
        else if (key == "potential") read(j, k, c.potential);
        else if (key == "params") {
            if (!val.is_object()) throw ValidationError("params must be an object");
            for (const auto& [pk, pv] : val.items()) {
                if (!pv.is_number()) throw ValidationError("param '" + pk + "' must be a number");
                c.params[pk] = pv.get<double>();
            }
        }
        else if (key == "table") read(j, k, c.table);
        else if (key == "n") read(j, k, c.n);
        else if (key == "s") read(j, k, c.s);
        else if (key == "lambda_min") read(j, k, c.lambda_min);
        else if (key == "lambda_max") read(j, k, c.lambda_max);
        else if (key == "x_min") read(j, k, c.x_min);
        else if (key == "x_max") read(j, k, c.x_max);
        else if (key == "grid_x") read(j, k, c.grid_x);
        else if (key == "grid_lambda") read(j, k, c.grid_lambda);
        else if (key == "target") read(j, k, c.target);
        else if (key == "x_infty") { read(j, k, c.x_infty); c.x_infty_set = true; }
        else if (key == "lambda_infty") { read(j, k, c.lambda_infty); c.lambda_infty_set = true; }
        else if (key == "half_width") read(j, k, c.half_width);
        else if (key == "rtol") read(j, k, c.rtol);
        else if (key == "atol") read(j, k, c.atol);
        else if (key == "angle_tol") read(j, k, c.angle_tol);
        else if (key == "zero_shift") read(j, k, c.zero_shift);
        else if (key == "margin") read(j, k, c.margin);
        else if (key == "lambda_samples") read(j, k, c.lambda_samples);
        else if (key == "sample_count") read(j, k, c.sample_count);
        else if (key == "summary_path") read(j, k, c.summary_path);
        else if (key == "csv_path") read(j, k, c.csv_path);
        else if (key == "export_table") read(j, k, c.export_table);
        else if (key == "seed") read(j, k, c.seed);
        else if (key == "threads") read(j, k, c.threads);
        else throw ValidationError("unknown config key '" + key + "'");
    }
    return c;
}

json RunConfig::to_json() const {
    json j = {{"command", command},     {"potential", potential},   {"params", params},
              {"table", table},         {"n", n},                   {"s", s},
              {"lambda_min", lambda_min}, {"lambda_max", lambda_max}, {"x_min", x_min},
              {"x_max", x_max},         {"grid_x", grid_x},         {"grid_lambda", grid_lambda},
              {"target", target},       {"half_width", half_width}, {"rtol", rtol},
              {"atol", atol},           {"angle_tol", angle_tol},   {"zero_shift", zero_shift},
              {"margin", margin},       {"lambda_samples", lambda_samples}, {"sample_count", sample_count},
              {"seed", seed}};
    if (x_infty_set) j["x_infty"] = x_infty;
    if (lambda_infty_set) j["lambda_infty"] = lambda_infty;
    return j;
}

void RunConfig::validate() const {
    static const std::set<std::string> commands{"morse", "scan", "box", "angles", "check"};
    static const std::set<std::string> potentials{"constant", "ac_pulse", "ac_system", "tabulated"};
    if (!commands.count(command)) throw ValidationError("unknown command '" + command + "'");
    if (!potentials.count(potential)) throw ValidationError("unknown potential '" + potential + "'");
    if (potential == "tabulated" && table.empty()) throw ValidationError("tabulated potential needs a table path");
    if (!(lambda_min < lambda_max)) throw ValidationError("lambda range is empty");
    if (!(x_min < x_max)) throw ValidationError("x range is empty");
    if (grid_x < 2 || grid_lambda < 2) throw ValidationError("grid sizes must be at least 2");
    if (!(rtol > 0) || !(atol > 0) || !(angle_tol > 0) || !(zero_shift > 0) || !(margin > 0))
        throw ValidationError("tolerances must be positive");
    if (half_width < 0) throw ValidationError("half_width must be positive (or 0 for automatic)");
    if (lambda_samples < 2 || sample_count < 2) throw ValidationError("sample counts must be at least 2");
    if (target != "at_x_infty" && target != "asymptotic") throw ValidationError("target must be at_x_infty or asymptotic");
    if (n < 0) throw ValidationError("n must be positive");
    if (!std::isfinite(s)) throw ValidationError("s must be finite");
    if (threads < 0) throw ValidationError("threads must be nonnegative");
}

RunArtifact run(const RunConfig& config) {
    RunArtifact a;
    try {
        config.validate();
        if (config.command == "check") {
            a = run_check(config);
        } else {
            PotentialSpec pot = build_potential(config);
            if (config.n > 0 && config.n != pot.n())
                throw ValidationError("config n = " + std::to_string(config.n) + " but the potential has n = " +
                                      std::to_string(pot.n()));
            if (!config.export_table.empty()) {
                double L = resolve_half_width(pot, box_options(config).evolution);
                write_table_csv(sample_potential(pot, -L - 2.0, L + 2.0, 0.01), config.export_table);
            }
            if (config.command == "morse") a = run_box(config, pot, false);
            else if (config.command == "box") a = run_box(config, pot, true);
            else if (config.command == "scan") a = run_scan(config, pot);
            else a = run_angles(config, pot);
            a.summary["potential"] = {{"name", pot.name()}, {"n", pot.n()}, {"s", pot.s()}, {"params", pot.params},
                                      {"tail_rate", pot.tail_rate()}, {"tail_heuristic", pot.tail_heuristic()}};
        }
    } catch (const ValidationError& e) {
        a = {2, false, std::string("config: ") + e.what(), json::object(), ""};
    } catch (const DomainError& e) {
        a = {2, false, std::string("domain: ") + e.what(), json::object(), ""};
    } catch (const NumericalError& e) {
        a = {3, false, std::string("numerical: ") + e.what(), json::object(), ""};
    }
    a.summary["command"] = config.command;
    a.summary["config"] = config.to_json();
    a.summary["version"] = kVersion;
    a.summary["accepted"] = a.accepted;
    a.summary["reason"] = a.reason;
    return a;
}

void emit(const RunConfig& config, const RunArtifact& a) {
    std::string text = a.summary.dump(2) + "\n";
    if (config.summary_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(config.summary_path, std::ios::binary);
        if (!out || !(out << text)) throw Error("cannot write " + config.summary_path);
    }
    if (!config.csv_path.empty() && !a.csv.empty()) {
        std::ofstream out(config.csv_path, std::ios::binary);
        if (!out || !(out << a.csv)) throw Error("cannot write " + config.csv_path);
    }
}

} // namespace maslov::cli
