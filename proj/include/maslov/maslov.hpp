#pragma once

#include "maslov/evolution.hpp"
#include "maslov/lagrangian.hpp"

#include <limits>
#include <string>
#include <vector>

namespace maslov {

// W at each parameter value along a path, with sorted eigen-angles.
struct UnitaryPath {
    std::vector<double> params;
    std::vector<CMatrix> w;
    std::vector<std::vector<double>> angles;

    void push(double param, const CMatrix& m);
    void append(const UnitaryPath& other); // joins; other[0] should equal this->back()
    std::size_t size() const { return params.size(); }
    UnitaryPath slice(std::size_t first, std::size_t last) const; // inclusive
    UnitaryPath reversed() const;
};

struct CrossingRecord {
    double param = 0.0;
    int multiplicity = 0;
    int direction = 0;    // +1 counterclockwise, -1 clockwise
    int contribution = 0; // signed, includes the endpoint convention
};

struct FlowResult {
    int flow = 0;
    std::vector<CrossingRecord> crossings;
    std::vector<std::string> endpoint_log;
};

// Signed displacement of each sorted angle of a to its match in b, under the
// cyclic shift of b that minimises the largest move. shift returns the offset.
std::vector<double> match_angles(const std::vector<double>& a, const std::vector<double>& b, int* shift = nullptr);

// Signed count of crossings of -1 along the path, counterclockwise positive.
// Arrival at -1 counts only if counterclockwise, departure only if clockwise.
FlowResult spectral_flow(const UnitaryPath& path, double angle_tol = 1e-8);

// Per-angle contributions of one step, indexed like a.
std::vector<int> step_contributions(const std::vector<double>& a, const std::vector<double>& b, double angle_tol = 1e-8);

// Contribution of a single step between sorted angle sets.
int step_flow(const std::vector<double>& a, const std::vector<double>& b, double angle_tol = 1e-8);

struct ProblemBounds {
    double nu_min = 0.0;
    double sup_norm = 0.0;
    double point_spectrum_floor = 0.0;
    double lambda_infty = 0.0;
};

ProblemBounds problem_bounds(const PotentialSpec& pot, double half_width, double margin = 1.0);

// Centroid of |V - V_+-| over [-L, L]: where the potential does its work.
double default_x_infty(const PotentialSpec& pot, double half_width);

constexpr double kAuto = std::numeric_limits<double>::quiet_NaN();

struct BoxOptions {
    EvolutionOptions evolution;
    double x_infty = kAuto;
    double lambda_infty = kAuto;
    double margin = 1.0;
    double zero_shift = 1e-6; // the top shelf sits at lambda = -zero_shift
    double angle_tol = 1e-8;
    double max_step_angle = kPi / 4;
    int lambda_samples = 48;
    double min_lambda_width = 1e-13;
    int max_lambda_retries = 3;
    int max_length_retries = 3;
};

struct BoxContext {
    PotentialSpec pot;
    BoxOptions opts; // evolution.half_width resolved
    double x_infty;
    double lambda_infty;
    double lambda_top;
    ProblemBounds bounds;
};

BoxContext make_box_context(const PotentialSpec& pot, const BoxOptions& opts);

struct EdgeResult {
    FlowResult flow;
    UnitaryPath path;
};

// W of l^-(x; lambda) against a fixed target, x from -L to x_end.
EdgeResult x_path_flow(const BoxContext& ctx, double lambda, const LagrangianFrame& target, double x_end);

EdgeResult principal_path(const BoxContext& ctx); // x over [-L, L] against the asymptotic target
EdgeResult edge_gamma_zero(const BoxContext& ctx);
EdgeResult edge_gamma_plus(const BoxContext& ctx);
EdgeResult edge_gamma_inf(const BoxContext& ctx);
EdgeResult edge_gamma_minus(const BoxContext& ctx);

// dim(R^-(0) cap R^+(0))
int kappa(const PotentialSpec& pot, double angle_tol = 1e-6);

// Crossings on the top shelf inside (-zero_shift, zero_shift).
int kernel_dimension(const BoxContext& ctx);

struct MaslovBoxReport {
    int flow_gamma0 = 0;
    int flow_gammaplus = 0;
    int flow_gammainf = 0;
    int flow_gammaminus = 0;
    int homotopy_sum = 0;
    int principal_maslov = 0;
    int morse_index = 0;
    int kappa = 0;
    int kernel_dimension = 0;
    std::vector<CrossingRecord> crossings_gamma0;
    std::vector<CrossingRecord> crossings_gammaplus;
    std::vector<CrossingRecord> crossings_gammainf;
    std::vector<CrossingRecord> crossings_gammaminus;
    std::vector<CrossingRecord> crossings_principal;
    bool accepted = false;
    std::string reason;
    double x_infty = 0.0;
    double lambda_infty = 0.0;
    double half_width = 0.0;
    double lambda_top = 0.0;
    ProblemBounds bounds;
    std::vector<std::string> retry_log;
};

MaslovBoxReport morse_index(const PotentialSpec& pot, const BoxOptions& opts = {});

// One column of the (x, lambda) plane: W of l^-(x_col; lambda) against the
// target, and the full-line count of the spliced operator used as a guard.
struct ColumnSample {
    double lambda;
    CMatrix w;
    std::vector<double> angles;
    int guard;
};

struct ColumnSpec {
    double x_col;          // -infinity selects the bottom shelf frame R^-(lambda)
    TargetMode mode;
    double x_infty;        // used when mode == at_x_infty
};

ColumnSample column_sample(const BoxContext& ctx, const ColumnSpec& col, double lambda);

// Refined samples from lambda_a to lambda_b (either order) such that every
// step moves each angle by at most max_step_angle and the tracked flow of
// each step agrees with the guard difference.
std::vector<ColumnSample> sample_column(const BoxContext& ctx, const ColumnSpec& col, double lambda_a,
                                        double lambda_b, int initial_samples);
std::vector<ColumnSample> sample_column(const BoxContext& ctx, const ColumnSpec& col,
                                        const std::vector<double>& nodes);

UnitaryPath column_path(const std::vector<ColumnSample>& samples);

struct MonotonicityReport {
    bool passed = true;
    double worst_violation = 0.0; // largest counterclockwise move as lambda increases
    double at_lambda = 0.0;
    int steps = 0;
};

MonotonicityReport monotonicity_check(const PotentialSpec& pot, double x_fixed, const std::vector<double>& lambda_grid,
                                      const BoxOptions& opts = {}, double tol = 1e-6);

struct ScanRow {
    double x;
    double tau;
    double lambda;
    int angle_index;
    double angle;
    int crossing;  // crossings of this trajectory inside the lambda cell
    int direction; // rotation at the crossing as lambda increases (-1 clockwise)
};

struct ScanOptions {
    BoxOptions box;
    TargetMode mode = TargetMode::at_x_infty;
    double locus_tol = 1e-10;
    int threads = 0; // 0: MASLOV_THREADS or hardware
};

// Rows sorted by (lambda, x, angle_index); one per node and angle.
std::vector<ScanRow> crossing_scan(const PotentialSpec& pot, const std::vector<double>& x_grid,
                                   const std::vector<double>& lambda_grid, const ScanOptions& opts = {});

struct LeftShelfReport {
    std::vector<double> lambdas;
    std::vector<double> eps;    // max over x of ||W + I||
    std::vector<double> ratios; // eps[k+1] / eps[k]
    bool decreasing = true;
    bool ratios_in_band = true;
};

LeftShelfReport left_shelf_asymptotics_check(const PotentialSpec& pot, const std::vector<double>& lambdas,
                                             const BoxOptions& opts = {});

int thread_count(int requested = 0);

} // namespace maslov
