#include "maslov/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace maslov {

PotentialSpec::PotentialSpec(std::string name, double s, Evaluator evaluator, const Matrix& v_minus,
                             const Matrix& v_plus, double tail_rate, bool tail_heuristic)
    : name_(std::move(name)),
      s_(s),
      evaluator_(std::move(evaluator)),
      minus_(decompose_endstate(v_minus)),
      plus_(decompose_endstate(v_plus)),
      tail_rate_(tail_rate),
      tail_heuristic_(tail_heuristic) {
    if (!std::isfinite(s)) throw ValidationError("convection speed must be finite");
    if (!evaluator_) throw ValidationError("potential evaluator is empty");
    if (minus_.n() != plus_.n()) throw ValidationError("endstate dimensions differ");
    if (!(tail_rate > 0) || !std::isfinite(tail_rate)) throw ValidationError("tail_rate must be positive");
    const int n = minus_.n();
    for (int k = -40; k <= 40; ++k) {
        double x = 0.5 * k;
        Matrix v = evaluator_(x);
        if (v.rows() != n || v.cols() != n) throw ValidationError("evaluator returned wrong shape at x = " + std::to_string(x));
        if (!v.allFinite()) throw ValidationError("evaluator returned non-finite entries at x = " + std::to_string(x));
        if ((v - v.transpose()).norm() > 1e-10 * (1.0 + v.norm()))
            throw ValidationError("evaluator is not symmetric at x = " + std::to_string(x));
    }
}

namespace {

bool truncation_ok(const PotentialSpec& pot, double L) {
    double em = (pot(-L) - pot.minus().matrix).norm();
    double ep = (pot(L) - pot.plus().matrix).norm();
    return em <= 1e-6 * (1.0 + pot.minus().matrix.norm()) && ep <= 1e-6 * (1.0 + pot.plus().matrix.norm());
}

} // namespace

double resolve_half_width(const PotentialSpec& pot, const EvolutionOptions& opts) {
    if (opts.half_width > 0) {
        if (!truncation_ok(pot, opts.half_width))
            throw ValidationError("V(+-L) is not within 1e-6 of its endstates for L = " + std::to_string(opts.half_width));
        return opts.half_width;
    }
    if (opts.half_width < 0) throw ValidationError("half_width must be positive");
    double L = std::max(15.0, std::log(1e8) / pot.tail_rate());
    for (int k = 0; k < 20 && !truncation_ok(pot, L); ++k) L *= 1.25;
    if (!truncation_ok(pot, L)) throw ValidationError("potential does not settle onto its endstates");
    return L;
}

EvolutionOptions resolved(const PotentialSpec& pot, EvolutionOptions opts) {
    if (!(opts.rtol > 0) || !(opts.atol > 0) || !(opts.initial_step > 0))
        throw ValidationError("tolerances and initial step must be positive");
    if (opts.renorm_interval < 1 || opts.sample_count < 2) throw ValidationError("renorm_interval >= 1 and sample_count >= 2 required");
    opts.half_width = resolve_half_width(pot, opts);
    return opts;
}

double compactify(double x) { return std::tanh(0.5 * x); }

double decompactify(double tau) {
    if (!(std::abs(tau) < 1.0)) throw DomainError("decompactify needs |tau| < 1");
    return 2.0 * std::atanh(tau);
}

std::vector<double> FramePath::params() const {
    std::vector<double> t(xs.size());
    std::transform(xs.begin(), xs.end(), t.begin(), compactify);
    return t;
}

void require_below_essential(const PotentialSpec& pot, double lambda, double ess_offset) {
    if (!(lambda < pot.nu_min() - ess_offset))
        throw DomainError("lambda = " + std::to_string(lambda) + " is within " + std::to_string(ess_offset) +
                          " of the essential spectrum (nu_min = " + std::to_string(pot.nu_min()) + ")");
}

Matrix ode_rhs(double x, const Matrix& f, double lambda, const PotentialSpec& pot) {
    const Eigen::Index n = f.cols();
    Matrix d(2 * n, n);
    Matrix v = pot(x);
    v.diagonal().array() -= lambda;
    d.topRows(n) = f.bottomRows(n);
    d.bottomRows(n) = v * f.topRows(n) + pot.s() * f.bottomRows(n);
    return d;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

Matrix orthonormalize(const Matrix& f, double x) {
    try {
        return renormalize_frame(LagrangianFrame::from_stacked(f)).stacked();
    } catch (const NumericalError&) {
        throw NumericalError("frame rank collapse at x = " + std::to_string(x) +
                             " (L too small or lambda too close to the essential spectrum)");
    }
}

} // namespace

FramePath integrate_frame(const PotentialSpec& pot, double lambda, const LagrangianFrame& start, double x0,
                          double x1, const EvolutionOptions& opts) {
    if (start.n() != pot.n()) throw ValidationError("start frame dimension does not match the potential");
    FramePath path;
    path.lambda = lambda;
    Matrix y = orthonormalize(start.stacked(), x0);
    path.xs.push_back(x0);
    path.frames.push_back(LagrangianFrame::from_stacked(y));
    if (x0 == x1) return path;

    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = opts.half_width > 0 ? 2.0 * opts.half_width : std::abs(x1 - x0);
    const double hmax = span / opts.sample_count;
    double h = dir * std::min(opts.initial_step, hmax);
    double x = x0;
    long steps = 0;
    int since_renorm = 0;
    Matrix k1 = ode_rhs(x, y, lambda, pot);

    while (dir * (x1 - x) > 0) {
        if (++steps > opts.max_steps) throw NumericalError("step budget exhausted at x = " + std::to_string(x));
        bool last = dir * (x + h - x1) >= 0;
        if (last) h = x1 - x;
        Matrix k2 = ode_rhs(x + c2 * h, y + h * (a21 * k1), lambda, pot);
        Matrix k3 = ode_rhs(x + c3 * h, y + h * (a31 * k1 + a32 * k2), lambda, pot);
        Matrix k4 = ode_rhs(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3), lambda, pot);
        Matrix k5 = ode_rhs(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), lambda, pot);
        Matrix k6 = ode_rhs(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), lambda, pot);
        Matrix ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        double xnew = last ? x1 : x + h;
        Matrix k7 = ode_rhs(xnew, ynew, lambda, pot);
        Matrix err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        double en = 0.0;
        for (Eigen::Index i = 0; i < y.size(); ++i) {
            double sc = opts.atol + opts.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
            en = std::max(en, std::abs(err(i)) / sc);
        }
        if (!std::isfinite(en)) throw NumericalError("non-finite state at x = " + std::to_string(x));

        if (en <= 1.0) {
            x = xnew;
            y = std::move(ynew);
            k1 = std::move(k7);
            if (++since_renorm >= opts.renorm_interval || y.cwiseAbs().maxCoeff() > 1e100) {
                Matrix q = orthonormalize(y, x);
                LagrangianFrame before = LagrangianFrame::from_stacked(y), after = LagrangianFrame::from_stacked(q);
                double m = frame_metric(before, after);
                path.renorm_log.push_back({x, m, std::move(before), std::move(after)});
                y = std::move(q);
                k1 = ode_rhs(x, y, lambda, pot);
                since_renorm = 0;
            }
            path.xs.push_back(x);
            path.frames.push_back(LagrangianFrame::from_stacked(y));
            double fac = en > 0 ? 0.9 * std::pow(en, -0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        } else {
            h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
        }
        if (std::abs(h) > hmax) h = dir * hmax;
        if (std::abs(h) < 1e-12 * (1.0 + std::abs(x)))
            throw NumericalError("step size underflow (stiffness) at x = " + std::to_string(x));
    }
    return path;
}

FramePath evolve_unstable_frame(const PotentialSpec& pot, double lambda, const EvolutionOptions& opts) {
    return evolve_unstable_frame(pot, lambda, opts, resolve_half_width(pot, opts));
}

FramePath evolve_unstable_frame(const PotentialSpec& pot, double lambda, const EvolutionOptions& opts0,
                                double x_end) {
    EvolutionOptions opts = resolved(pot, opts0);
    require_below_essential(pot, lambda, opts.ess_offset);
    double L = opts.half_width;
    LagrangianFrame r = asymptotic_frame_minus(pot.minus(), pot.s(), lambda);
    return integrate_frame(pot, lambda, r, -L, x_end, opts);
}

LagrangianFrame target_frame(const PotentialSpec& pot, double lambda, const EvolutionOptions& opts0,
                             TargetMode mode, double x_infty) {
    EvolutionOptions opts = resolved(pot, opts0);
    require_below_essential(pot, lambda, opts.ess_offset);
    LagrangianFrame r = asymptotic_frame_plus(pot.plus(), pot.s(), lambda);
    if (mode == TargetMode::asymptotic) return r;
    return integrate_frame(pot, lambda, r, opts.half_width, x_infty, opts).frames.back();
}

} // namespace maslov
