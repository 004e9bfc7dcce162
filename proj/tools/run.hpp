#pragma once

#include "json.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace maslov::cli {

using nlohmann::json;

struct RunConfig {
    std::string command = "morse";
    std::string potential = "ac_pulse";
    std::map<std::string, double> params;
    std::string table; // tabulated CSV, used when potential == "tabulated"
    int n = 0;         // 0: take it from the potential
    double s = 0.0;
    double lambda_min = -2.0;
    double lambda_max = 0.5;
    double x_min = -6.0;
    double x_max = 6.0;
    int grid_x = 25;
    int grid_lambda = 60;
    std::string target = "at_x_infty";
    double x_infty = 0.0;
    bool x_infty_set = false;
    double lambda_infty = 0.0;
    bool lambda_infty_set = false;
    double half_width = 0.0;
    double rtol = 1e-10;
    double atol = 1e-12;
    double angle_tol = 1e-8;
    double zero_shift = 1e-6;
    double margin = 1.0;
    int lambda_samples = 48;
    int sample_count = 400;
    std::string summary_path; // empty: stdout
    std::string csv_path;
    std::string export_table;
    std::uint64_t seed = 1;
    int threads = 0;

    // Keys are the field names above; unknown keys are rejected.
    static RunConfig from_json(const json& j);
    json to_json() const;
    void validate() const;
};

struct RunArtifact {
    int exit_code = 0;
    bool accepted = false;
    std::string reason;
    json summary;
    std::string csv;
};

RunArtifact run(const RunConfig& config);

// Writes summary (and csv when a path is configured). Throws on I/O failure.
void emit(const RunConfig& config, const RunArtifact& artifact);

std::string format_double(double v);

} // namespace maslov::cli
