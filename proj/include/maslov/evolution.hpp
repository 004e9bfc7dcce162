#pragma once

#include "maslov/endstates.hpp"
#include "maslov/lagrangian.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace maslov {

// V(x) together with its endstates and convection speed. Immutable and
// safe to share between threads once built.
class PotentialSpec {
public:
    using Evaluator = std::function<Matrix(double)>;

    PotentialSpec(std::string name, double s, Evaluator evaluator, const Matrix& v_minus,
                  const Matrix& v_plus, double tail_rate, bool tail_heuristic = false);

    Matrix operator()(double x) const { return evaluator_(x); }

    int n() const { return minus_.n(); }
    double s() const { return s_; }
    const std::string& name() const { return name_; }
    const SymmetricEndstate& minus() const { return minus_; }
    const SymmetricEndstate& plus() const { return plus_; }
    double tail_rate() const { return tail_rate_; }
    bool tail_heuristic() const { return tail_heuristic_; }
    double nu_min() const { return std::min(minus_.nu_min(), plus_.nu_min()); }

    // Free-form numeric parameters echoed into reports.
    std::map<std::string, double> params;

private:
    std::string name_;
    double s_;
    Evaluator evaluator_;
    SymmetricEndstate minus_;
    SymmetricEndstate plus_;
    double tail_rate_;
    bool tail_heuristic_;
};

struct EvolutionOptions {
    double half_width = 0.0; // L; 0 means derive from the tail rate
    double initial_step = 1e-2;
    double rtol = 1e-10;
    double atol = 1e-12;
    int renorm_interval = 20;
    int sample_count = 400; // caps the step at 2L / sample_count
    double ess_offset = 1e-6;
    long max_steps = 2000000;
};

// L such that exp(-tail_rate L) < 1e-8, at least 15, grown until V(+-L) sits
// on its endstates. Throws ValidationError if that never happens.
double resolve_half_width(const PotentialSpec& pot, const EvolutionOptions& opts);
EvolutionOptions resolved(const PotentialSpec& pot, EvolutionOptions opts);

double compactify(double x);
double decompactify(double tau);

struct RenormEvent {
    double x;
    double metric; // plane distance across the event, should be ~0
    LagrangianFrame before;
    LagrangianFrame after;
};

struct FramePath {
    double lambda = 0.0;
    std::vector<double> xs;
    std::vector<LagrangianFrame> frames;
    std::vector<RenormEvent> renorm_log;
    std::vector<double> params() const; // tau values
};

// [X' ; Y'] = [Y ; (V(x) - lambda) X + s Y]
Matrix ode_rhs(double x, const Matrix& stacked, double lambda, const PotentialSpec& pot);

// Adaptive Dormand-Prince 5(4) from x0 to x1 (either direction).
FramePath integrate_frame(const PotentialSpec& pot, double lambda, const LagrangianFrame& start,
                          double x0, double x1, const EvolutionOptions& opts);

// l^-(x; lambda) from x = -L up to x_end (default +L).
FramePath evolve_unstable_frame(const PotentialSpec& pot, double lambda, const EvolutionOptions& opts);
FramePath evolve_unstable_frame(const PotentialSpec& pot, double lambda, const EvolutionOptions& opts,
                                double x_end);

enum class TargetMode { asymptotic, at_x_infty };

LagrangianFrame target_frame(const PotentialSpec& pot, double lambda, const EvolutionOptions& opts,
                             TargetMode mode, double x_infty = 0.0);

// Throws DomainError unless lambda < nu_min - ess_offset.
void require_below_essential(const PotentialSpec& pot, double lambda, double ess_offset);

} // namespace maslov
