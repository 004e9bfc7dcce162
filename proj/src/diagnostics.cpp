#include "maslov/maslov.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

namespace maslov {

int thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MASLOV_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Context for diagnostics that never touch lambda = 0.
BoxContext column_context(const PotentialSpec& pot, const BoxOptions& opts0, double x_infty) {
    BoxOptions opts = opts0;
    opts.evolution = resolved(pot, opts.evolution);
    return BoxContext{pot, opts, x_infty, 0.0, 0.0, ProblemBounds{}};
}

void check_grid(const PotentialSpec& pot, const std::vector<double>& grid, double ess) {
    if (grid.size() < 2) throw ValidationError("lambda grid needs at least 2 points");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw ValidationError("lambda grid must be strictly increasing");
    require_below_essential(pot, grid.back(), ess);
}

template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    int t = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (t == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < t; ++k) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }
    for (const std::exception_ptr& e : errors)
        if (e) std::rethrow_exception(e);
}

// Lambda where trajectory j of a crosses pi between a and b.
double locate(const BoxContext& ctx, const ColumnSpec& col, ColumnSample a, ColumnSample b, int j, double tol) {
    const int n = static_cast<int>(a.angles.size());
    for (int it = 0; it < 80 && std::abs(b.lambda - a.lambda) > tol * std::max(1.0, std::abs(a.lambda)); ++it) {
        ColumnSample m = column_sample(ctx, col, 0.5 * (a.lambda + b.lambda));
        int shift = 0;
        match_angles(a.angles, m.angles, &shift);
        if (step_contributions(a.angles, m.angles, ctx.opts.angle_tol)[j] != 0) {
            b = std::move(m);
        } else {
            a = std::move(m);
            j = (j + shift) % n;
        }
    }
    int shift = 0;
    std::vector<double> d = match_angles(a.angles, b.angles, &shift);
    double p0 = wrap_angle(a.angles[j] - kPi), p1 = p0 + d[j];
    double frac = p1 != p0 ? std::clamp(-p0 / (p1 - p0), 0.0, 1.0) : 0.0;
    return a.lambda + (b.lambda - a.lambda) * frac;
}

} // namespace

MonotonicityReport monotonicity_check(const PotentialSpec& pot, double x_fixed, const std::vector<double>& grid,
                                      const BoxOptions& opts, double tol) {
    BoxContext ctx = column_context(pot, opts, x_fixed);
    check_grid(pot, grid, ctx.opts.evolution.ess_offset);
    ColumnSpec col{x_fixed, TargetMode::at_x_infty, x_fixed};
    std::vector<ColumnSample> s = sample_column(ctx, col, grid);
    MonotonicityReport r;
    r.worst_violation = -1e300;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        for (double d : match_angles(s[k].angles, s[k + 1].angles)) {
            if (d > r.worst_violation) {
                r.worst_violation = d;
                r.at_lambda = s[k].lambda;
            }
        }
        ++r.steps;
    }
    r.passed = r.worst_violation <= tol;
    return r;
}

std::vector<ScanRow> crossing_scan(const PotentialSpec& pot, const std::vector<double>& x_grid,
                                   const std::vector<double>& lambda_grid, const ScanOptions& opts) {
    if (x_grid.empty()) throw ValidationError("x grid is empty");
    BoxContext base = column_context(pot, opts.box, 0.0);
    const double L = base.opts.evolution.half_width;
    base.x_infty = std::isnan(opts.box.x_infty) ? default_x_infty(pot, L) : opts.box.x_infty;
    check_grid(pot, lambda_grid, base.opts.evolution.ess_offset);
    for (double x : x_grid)
        if (!(std::abs(x) < L)) throw ValidationError("scan x values must lie inside (-L, L)");
    const int n = pot.n();
    std::vector<std::vector<ScanRow>> columns(x_grid.size());

    parallel_for(x_grid.size(), thread_count(opts.threads), [&](std::size_t c) {
        const BoxContext& ctx = base;
        double x = x_grid[c];
        ColumnSpec col{x, opts.mode, ctx.x_infty};
        std::vector<ColumnSample> s = sample_column(ctx, col, lambda_grid);
        std::vector<ScanRow>& rows = columns[c];
        std::size_t pos = 0;
        for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
            while (s[pos].lambda != lambda_grid[k]) ++pos;
            std::size_t end = pos;
            if (k + 1 < lambda_grid.size())
                while (s[end].lambda != lambda_grid[k + 1]) ++end;
            for (int i = 0; i < n; ++i)
                rows.push_back({x, compactify(x), lambda_grid[k], i, s[pos].angles[i], 0, 0});
            std::size_t first_row = rows.size() - n;
            std::vector<int> at(n);
            for (int i = 0; i < n; ++i) at[i] = i;
            for (std::size_t q = pos; q < end; ++q) {
                int shift = 0;
                match_angles(s[q].angles, s[q + 1].angles, &shift);
                std::vector<int> c = step_contributions(s[q].angles, s[q + 1].angles, ctx.opts.angle_tol);
                for (int t = 0; t < n; ++t) {
                    int j = at[t];
                    if (c[j] != 0) {
                        ScanRow& row = rows[first_row + t];
                        if (row.crossing == 0) {
                            row.lambda = locate(ctx, col, s[q], s[q + 1], j, opts.locus_tol);
                            row.angle = kPi;
                            row.direction = c[j];
                        }
                        ++row.crossing;
                    }
                    at[t] = (j + shift) % n;
                }
            }
            pos = end;
        }
    });

    std::vector<ScanRow> all;
    for (const auto& col : columns) all.insert(all.end(), col.begin(), col.end());
    std::stable_sort(all.begin(), all.end(), [](const ScanRow& a, const ScanRow& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        if (a.x != b.x) return a.x < b.x;
        return a.angle_index < b.angle_index;
    });
    return all;
}

LeftShelfReport left_shelf_asymptotics_check(const PotentialSpec& pot, const std::vector<double>& lambdas,
                                             const BoxOptions& opts) {
    BoxContext ctx = column_context(pot, opts, 0.0);
    const double L = ctx.opts.evolution.half_width;
    ctx.x_infty = std::isnan(opts.x_infty) ? default_x_infty(pot, L) : opts.x_infty;
    LeftShelfReport r;
    for (double lam : lambdas) {
        LagrangianFrame t = target_frame(pot, lam, ctx.opts.evolution, TargetMode::at_x_infty, ctx.x_infty);
        EdgeResult e = x_path_flow(ctx, lam, t, ctx.x_infty);
        double eps = 0.0;
        for (const auto& angles : e.path.angles)
            for (double a : angles) eps = std::max(eps, std::abs(std::polar(1.0, a) + 1.0));
        r.lambdas.push_back(lam);
        r.eps.push_back(eps);
    }
    for (std::size_t k = 1; k < r.eps.size(); ++k) {
        double q = r.eps[k] / r.eps[k - 1];
        r.ratios.push_back(q);
        if (!(q < 1.0)) r.decreasing = false;
        if (!(q >= 0.25 && q <= 1.0)) r.ratios_in_band = false;
    }
    return r;
}

} // namespace maslov
