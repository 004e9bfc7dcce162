#include "maslov/maslov.hpp"
#include "maslov/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace maslov {

ProblemBounds problem_bounds(const PotentialSpec& pot, double half_width, double margin) {
    if (!(half_width > 0) || !(margin > 0)) throw ValidationError("problem_bounds: half_width and margin must be positive");
    auto norm2 = [](const Matrix& v) {
        SymmetricEigen e = symmetric_eigen(0.5 * (v + v.transpose()));
        return std::max(std::abs(e.values(0)), std::abs(e.values(e.values.size() - 1)));
    };
    double c = std::max(norm2(pot.minus().matrix), norm2(pot.plus().matrix));
    const int m = 4000;
    for (int k = 0; k <= m; ++k) c = std::max(c, norm2(pot(-half_width + 2.0 * half_width * k / m)));
    ProblemBounds b;
    b.nu_min = pot.nu_min();
    b.sup_norm = c;
    b.point_spectrum_floor = pot.s() == 0.0 ? -c : -(std::abs(pot.s()) / 2.0 + c);
    b.lambda_infty = std::abs(b.point_spectrum_floor) + margin;
    return b;
}

double default_x_infty(const PotentialSpec& pot, double half_width) {
    const int m = 4000;
    double sw = 0.0, sxw = 0.0;
    for (int k = 0; k <= m; ++k) {
        double x = -half_width + 2.0 * half_width * k / m;
        Matrix v = pot(x);
        double w = std::min((v - pot.minus().matrix).norm(), (v - pot.plus().matrix).norm());
        sw += w;
        sxw += x * w;
    }
    if (!(sw > 1e-12)) return 0.0;
    return std::clamp(sxw / sw, -0.5 * half_width, 0.5 * half_width);
}

BoxContext make_box_context(const PotentialSpec& pot, const BoxOptions& opts0) {
    BoxOptions opts = opts0;
    opts.evolution = resolved(pot, opts.evolution);
    const double L = opts.evolution.half_width;
    if (!(opts.zero_shift > 0) || !(opts.angle_tol > 0) || opts.lambda_samples < 2 || !(opts.max_step_angle > 0) ||
        !(opts.max_step_angle < kPi / 2))
        throw ValidationError("invalid box options");
    if (!(pot.nu_min() - opts.evolution.ess_offset > opts.zero_shift))
        throw DomainError("nu_min = " + std::to_string(pot.nu_min()) +
                          " leaves no room between lambda = 0 and the essential spectrum");
    ProblemBounds b = problem_bounds(pot, L, opts.margin);
    double xi = std::isnan(opts.x_infty) ? default_x_infty(pot, L) : opts.x_infty;
    if (!(std::abs(xi) < L)) throw ValidationError("x_infty must lie inside (-L, L)");
    double li = std::isnan(opts.lambda_infty) ? b.lambda_infty : opts.lambda_infty;
    if (!(li > opts.zero_shift)) throw ValidationError("lambda_infty must be positive");
    return BoxContext{pot, opts, xi, li, -opts.zero_shift, b};
}

namespace {

struct Tracked {
    UnitaryPath path;
    LagrangianFrame last;
};

Tracked track_x(const BoxContext& ctx, const PotentialSpec& pot, double lambda, const LagrangianFrame& start, double x0,
                double x1, const WtildeTarget& target) {
    EvolutionOptions eo = ctx.opts.evolution;
    for (int attempt = 0; attempt < 5; ++attempt) {
        FramePath fp = integrate_frame(pot, lambda, start, x0, x1, eo);
        Tracked t;
        double worst = 0.0;
        for (std::size_t k = 0; k < fp.xs.size(); ++k) {
            t.path.push(fp.xs[k], target(fp.frames[k]).w);
            if (k > 0) {
                for (double d : match_angles(t.path.angles[k - 1], t.path.angles[k])) worst = std::max(worst, std::abs(d));
            }
        }
        if (worst <= ctx.opts.max_step_angle) {
            t.last = fp.frames.back();
            return t;
        }
        eo.sample_count *= 2;
    }
    throw ResolutionError("angles move too fast along x at lambda = " + std::to_string(lambda), x0, x1);
}

// Some angle sits on -1 within tolerance.
bool touching(const BoxContext& ctx, const ColumnSample& s) {
    for (double a : s.angles)
        if (std::abs(wrap_angle(a - kPi)) <= ctx.opts.angle_tol) return true;
    return false;
}

// Steps into or out of a touching sample are checked later as a run.
bool step_ok(const BoxContext& ctx, const ColumnSample& a, const ColumnSample& b) {
    for (double d : match_angles(a.angles, b.angles))
        if (std::abs(d) > ctx.opts.max_step_angle) return false;
    if (touching(ctx, a) || touching(ctx, b)) return true;
    return step_flow(a.angles, b.angles, ctx.opts.angle_tol) == b.guard - a.guard;
}

// Across each run of touching samples the tracked flow must still match the guard.
void check_runs(const BoxContext& ctx, const std::vector<ColumnSample>& s) {
    std::size_t clean = 0;
    int flow = 0;
    for (std::size_t k = 1; k < s.size(); ++k) {
        flow += step_flow(s[k - 1].angles, s[k].angles, ctx.opts.angle_tol);
        if (touching(ctx, s[k]) && k + 1 < s.size()) continue;
        if (flow != s[k].guard - s[clean].guard)
            throw ResolutionError("tracked flow disagrees with the guard between lambda = " +
                                      std::to_string(s[clean].lambda) + " and " + std::to_string(s[k].lambda),
                                  std::min(s[clean].lambda, s[k].lambda), std::max(s[clean].lambda, s[k].lambda));
        clean = k;
        flow = 0;
    }
}

void refine(const BoxContext& ctx, const ColumnSpec& col, const ColumnSample& a, const ColumnSample& b,
            std::vector<ColumnSample>& out) {
    if (step_ok(ctx, a, b)) {
        out.push_back(b);
        return;
    }
    double width = std::abs(b.lambda - a.lambda);
    if (width < ctx.opts.min_lambda_width * std::max(1.0, std::abs(a.lambda)))
        throw ResolutionError("cannot resolve crossings between lambda = " + std::to_string(a.lambda) + " and " +
                                  std::to_string(b.lambda),
                              std::min(a.lambda, b.lambda), std::max(a.lambda, b.lambda));
    ColumnSample m = column_sample(ctx, col, 0.5 * (a.lambda + b.lambda));
    refine(ctx, col, a, m, out);
    refine(ctx, col, m, b, out);
}

} // namespace

ColumnSample column_sample(const BoxContext& ctx, const ColumnSpec& col, double lambda) {
    const PotentialSpec& pot = ctx.pot;
    const double L = ctx.opts.evolution.half_width;
    require_below_essential(pot, lambda, ctx.opts.evolution.ess_offset);
    LagrangianFrame rplus = asymptotic_frame_plus(pot.plus(), pot.s(), lambda);
    WtildeTarget guard_target(rplus);

    UnitaryPath guard_path;
    LagrangianFrame lminus;
    if (std::isinf(col.x_col)) {
        lminus = asymptotic_frame_minus(pot.minus(), pot.s(), lambda);
    } else {
        Tracked left = track_x(ctx, pot, lambda, asymptotic_frame_minus(pot.minus(), pot.s(), lambda), -L, col.x_col,
                               guard_target);
        guard_path = std::move(left.path);
        lminus = left.last;
    }

    LagrangianFrame target = rplus;
    if (col.mode == TargetMode::at_x_infty) {
        target = integrate_frame(pot, lambda, rplus, L, col.x_infty, ctx.opts.evolution).frames.back();
        Tracked right = track_x(ctx, pot, lambda, lminus, col.x_infty, L, guard_target);
        guard_path.append(right.path);
    } else {
        PotentialSpec tail = constant_potential(pot.plus().matrix, pot.s());
        Tracked right = track_x(ctx, tail, lambda, lminus, 0.0, L, guard_target);
        guard_path.append(right.path);
    }

    ColumnSample s;
    s.lambda = lambda;
    s.w = wtilde(lminus, target).w;
    s.angles = unitary_angles(s.w);
    s.guard = spectral_flow(guard_path, ctx.opts.angle_tol).flow;
    return s;
}

std::vector<ColumnSample> sample_column(const BoxContext& ctx, const ColumnSpec& col, const std::vector<double>& nodes) {
    if (nodes.empty()) return {};
    std::vector<ColumnSample> out;
    ColumnSample prev = column_sample(ctx, col, nodes.front());
    out.push_back(prev);
    for (std::size_t k = 1; k < nodes.size(); ++k) {
        ColumnSample next = column_sample(ctx, col, nodes[k]);
        refine(ctx, col, prev, next, out);
        prev = std::move(next);
    }
    check_runs(ctx, out);
    return out;
}

std::vector<ColumnSample> sample_column(const BoxContext& ctx, const ColumnSpec& col, double lambda_a, double lambda_b,
                                        int initial_samples) {
    int m = std::max(2, initial_samples);
    std::vector<double> nodes(m);
    for (int k = 0; k < m; ++k) nodes[k] = lambda_a + (lambda_b - lambda_a) * k / (m - 1);
    nodes.back() = lambda_b;
    return sample_column(ctx, col, nodes);
}

UnitaryPath column_path(const std::vector<ColumnSample>& samples) {
    UnitaryPath p;
    for (const ColumnSample& s : samples) {
        p.params.push_back(s.lambda);
        p.w.push_back(s.w);
        p.angles.push_back(s.angles);
    }
    return p;
}

EdgeResult x_path_flow(const BoxContext& ctx, double lambda, const LagrangianFrame& target, double x_end) {
    const PotentialSpec& pot = ctx.pot;
    require_below_essential(pot, lambda, ctx.opts.evolution.ess_offset);
    LagrangianFrame start = asymptotic_frame_minus(pot.minus(), pot.s(), lambda);
    Tracked t = track_x(ctx, pot, lambda, start, -ctx.opts.evolution.half_width, x_end, WtildeTarget(target));
    return {spectral_flow(t.path, ctx.opts.angle_tol), std::move(t.path)};
}

EdgeResult principal_path(const BoxContext& ctx) {
    LagrangianFrame target = asymptotic_frame_plus(ctx.pot.plus(), ctx.pot.s(), ctx.lambda_top);
    return x_path_flow(ctx, ctx.lambda_top, target, ctx.opts.evolution.half_width);
}

namespace {

LagrangianFrame matched_target(const BoxContext& ctx, double lambda) {
    return target_frame(ctx.pot, lambda, ctx.opts.evolution, TargetMode::at_x_infty, ctx.x_infty);
}

} // namespace

EdgeResult edge_gamma_zero(const BoxContext& ctx) {
    return x_path_flow(ctx, ctx.lambda_top, matched_target(ctx, ctx.lambda_top), ctx.x_infty);
}

EdgeResult edge_gamma_plus(const BoxContext& ctx) {
    ColumnSpec col{ctx.x_infty, TargetMode::at_x_infty, ctx.x_infty};
    UnitaryPath p = column_path(sample_column(ctx, col, ctx.lambda_top, -ctx.lambda_infty, ctx.opts.lambda_samples));
    FlowResult f = spectral_flow(p, ctx.opts.angle_tol);
    return {f, std::move(p)};
}

EdgeResult edge_gamma_inf(const BoxContext& ctx) {
    double lam = -ctx.lambda_infty;
    EdgeResult e = x_path_flow(ctx, lam, matched_target(ctx, lam), ctx.x_infty);
    e.path = e.path.reversed();
    e.flow = spectral_flow(e.path, ctx.opts.angle_tol);
    return e;
}

EdgeResult edge_gamma_minus(const BoxContext& ctx) {
    ColumnSpec col{-std::numeric_limits<double>::infinity(), TargetMode::at_x_infty, ctx.x_infty};
    UnitaryPath p = column_path(sample_column(ctx, col, -ctx.lambda_infty, ctx.lambda_top, ctx.opts.lambda_samples));
    FlowResult f = spectral_flow(p, ctx.opts.angle_tol);
    return {f, std::move(p)};
}

int kappa(const PotentialSpec& pot, double angle_tol) {
    if (!(pot.nu_min() > 0)) throw DomainError("kappa needs lambda = 0 below the essential spectrum");
    LagrangianFrame a = asymptotic_frame_minus(pot.minus(), pot.s(), 0.0);
    LagrangianFrame b = asymptotic_frame_plus(pot.plus(), pot.s(), 0.0);
    return intersection_dim(wtilde(a, b).w, angle_tol);
}

int kernel_dimension(const BoxContext& ctx) {
    ColumnSpec col{ctx.x_infty, TargetMode::at_x_infty, ctx.x_infty};
    double z = ctx.opts.zero_shift;
    return spectral_flow(column_path(sample_column(ctx, col, z, -z, 2)), ctx.opts.angle_tol).flow;
}

MaslovBoxReport morse_index(const PotentialSpec& pot, const BoxOptions& opts0) {
    MaslovBoxReport r;
    BoxOptions opts = opts0;
    BoxContext ctx = make_box_context(pot, opts);
    int lambda_retries = 0, length_retries = 0;
    auto fill_ctx = [&] {
        r.x_infty = ctx.x_infty;
        r.lambda_infty = ctx.lambda_infty;
        r.half_width = ctx.opts.evolution.half_width;
        r.lambda_top = ctx.lambda_top;
        r.bounds = ctx.bounds;
    };
    for (;;) {
        fill_ctx();
        try {
            EdgeResult p = principal_path(ctx);
            r.principal_maslov = p.flow.flow;
            r.crossings_principal = p.flow.crossings;
            r.morse_index = -r.principal_maslov;
            EdgeResult g0 = edge_gamma_zero(ctx);
            EdgeResult gp = edge_gamma_plus(ctx);
            EdgeResult gi = edge_gamma_inf(ctx);
            EdgeResult gm = edge_gamma_minus(ctx);
            r.flow_gamma0 = g0.flow.flow;
            r.flow_gammaplus = gp.flow.flow;
            r.flow_gammainf = gi.flow.flow;
            r.flow_gammaminus = gm.flow.flow;
            r.crossings_gamma0 = g0.flow.crossings;
            r.crossings_gammaplus = gp.flow.crossings;
            r.crossings_gammainf = gi.flow.crossings;
            r.crossings_gammaminus = gm.flow.crossings;
            r.homotopy_sum = r.flow_gamma0 + r.flow_gammaplus + r.flow_gammainf + r.flow_gammaminus;
        } catch (const NumericalError& e) {
            r.accepted = false;
            r.reason = std::string("numerical: ") + e.what();
            return r;
        }
        if (r.flow_gammainf != 0 && lambda_retries < opts.max_lambda_retries) {
            ++lambda_retries;
            opts.lambda_infty = 2.0 * ctx.lambda_infty;
            r.retry_log.push_back("left shelf flow " + std::to_string(r.flow_gammainf) + ": lambda_infty -> " +
                                  std::to_string(opts.lambda_infty));
            ctx = make_box_context(pot, opts);
            continue;
        }
        if (r.homotopy_sum != 0 && length_retries < opts.max_length_retries) {
            ++length_retries;
            opts.evolution.half_width = 1.5 * ctx.opts.evolution.half_width;
            r.retry_log.push_back("box sum " + std::to_string(r.homotopy_sum) + ": L -> " +
                                  std::to_string(opts.evolution.half_width));
            ctx = make_box_context(pot, opts);
            continue;
        }
        break;
    }
    try {
        r.kappa = kappa(pot, 1e-6);
        r.kernel_dimension = kernel_dimension(ctx);
    } catch (const NumericalError& e) {
        r.accepted = false;
        r.reason = std::string("numerical: ") + e.what();
        return r;
    }

    std::vector<std::string> why;
    if (r.flow_gammainf != 0) why.push_back("left shelf flow is nonzero");
    if (r.homotopy_sum != 0) why.push_back("edge flows do not sum to zero");
    if (r.morse_index != r.flow_gammaplus) why.push_back("principal index disagrees with the top shelf");
    if (r.morse_index < 0) why.push_back("negative morse index");
    for (const CrossingRecord& c : r.crossings_gammaplus)
        if (c.contribution < 0) why.push_back("clockwise crossing on the top shelf");
    r.accepted = why.empty();
    std::ostringstream os;
    for (std::size_t k = 0; k < why.size(); ++k) os << (k ? "; " : "") << why[k];
    r.reason = os.str();
    return r;
}

} // namespace maslov
