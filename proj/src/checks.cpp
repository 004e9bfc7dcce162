#include "maslov/checks.hpp"

#include "maslov/maslov.hpp"
#include "maslov/potentials.hpp"

#include <random>
#include <sstream>

namespace maslov {

namespace {

Matrix random_matrix(std::mt19937_64& rng, int r, int c) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = g(rng);
    return m;
}

// (A; S A) with A well conditioned and S symmetric.
LagrangianFrame random_frame(std::mt19937_64& rng, int n) {
    Matrix a = random_matrix(rng, n, n) + 2.0 * Matrix::Identity(n, n);
    Matrix s = random_matrix(rng, n, n);
    s = (0.5 * (s + s.transpose())).eval();
    return {a, s * a};
}

SuiteResult finish(SuiteResult r) {
    r.passed = r.worst <= r.tolerance;
    std::ostringstream os;
    os << r.cases << " cases, worst " << r.worst << " (tol " << r.tolerance << ")";
    r.detail = os.str();
    return r;
}

std::vector<PotentialSpec> sample_potentials(std::uint64_t seed) {
    std::vector<PotentialSpec> p{ac_pulse(), ac_system(-1.0), random_symmetric_well(seed), ac_pulse(1.0)};
    p.push_back(random_scalar_wells(seed + 1));
    return p;
}

} // namespace

SuiteResult check_unitarity(std::uint64_t seed, int cases) {
    std::mt19937_64 rng(seed);
    SuiteResult r{"unitarity", false, 0.0, 1e-8, 0, ""};
    for (int k = 0; k < cases; ++k) {
        int n = 1 + k % 4;
        CMatrix w = wtilde(random_frame(rng, n), random_frame(rng, n)).w;
        r.worst = std::max(r.worst, unitarity_defect(w));
        ++r.cases;
    }
    return finish(r);
}

SuiteResult check_plane_invariance(std::uint64_t seed, int cases) {
    std::mt19937_64 rng(seed + 17);
    SuiteResult r{"plane_invariance", false, 0.0, 1e-8, 0, ""};
    for (int k = 0; k < cases; ++k) {
        int n = 1 + k % 4;
        LagrangianFrame a = random_frame(rng, n), b = random_frame(rng, n);
        Matrix g1 = random_matrix(rng, n, n) + 2.0 * Matrix::Identity(n, n);
        Matrix g2 = random_matrix(rng, n, n) + 2.0 * Matrix::Identity(n, n);
        LagrangianFrame a2(a.x * g1, a.y * g1), b2(b.x * g2, b.y * g2);
        r.worst = std::max(r.worst, (wtilde(a, b).w - wtilde(a2, b2).w).norm());
        ++r.cases;
    }
    return finish(r);
}

SuiteResult check_lagrangian_residual(std::uint64_t seed) {
    SuiteResult r{"lagrangian_residual", false, 0.0, 1e-8, 0, ""};
    for (const PotentialSpec& p : sample_potentials(seed)) {
        for (double lam : {-2.0, -0.5}) {
            if (!(lam < p.nu_min() - 1e-3)) continue;
            FramePath fp = evolve_unstable_frame(p, lam, {});
            for (const LagrangianFrame& f : fp.frames) r.worst = std::max(r.worst, lagrangian_residual(f));
            ++r.cases;
        }
    }
    return finish(r);
}

SuiteResult check_renormalization(std::uint64_t seed) {
    SuiteResult r{"renormalization", false, 0.0, 1e-8, 0, ""};
    std::mt19937_64 rng(seed + 29);
    for (const PotentialSpec& p : sample_potentials(seed)) {
        double lam = -1.0;
        if (!(lam < p.nu_min() - 1e-3)) continue;
        WtildeTarget ref(random_frame(rng, p.n()));
        EvolutionOptions eo = resolved(p, {});
        LagrangianFrame start = asymptotic_frame_minus(p.minus(), p.s(), lam);
        FramePath fp = integrate_frame(p, lam, start, -eo.half_width, eo.half_width, eo);
        for (const RenormEvent& e : fp.renorm_log)
            r.worst = std::max(r.worst, (ref(e.before).w - ref(e.after).w).norm());
        ++r.cases;
    }
    return finish(r);
}

SuiteResult check_path_additivity(std::uint64_t seed) {
    std::mt19937_64 rng(seed + 41);
    SuiteResult r{"path_additivity", false, 0.0, 0.0, 0, ""};
    for (const PotentialSpec& p : {ac_pulse(), ac_system(-1.0), random_scalar_wells(seed + 3)}) {
        BoxContext ctx = make_box_context(p, {});
        for (const EdgeResult& e : {principal_path(ctx), edge_gamma_plus(ctx)}) {
            int whole = spectral_flow(e.path).flow;
            std::uniform_int_distribution<std::size_t> pick(1, e.path.size() - 2);
            for (int t = 0; t < 10; ++t) {
                std::size_t k = pick(rng);
                int parts = spectral_flow(e.path.slice(0, k)).flow + spectral_flow(e.path.slice(k, e.path.size() - 1)).flow;
                r.worst = std::max(r.worst, static_cast<double>(std::abs(parts - whole)));
                ++r.cases;
            }
        }
    }
    return finish(r);
}

SuiteResult check_refinement_stability(std::uint64_t seed) {
    SuiteResult r{"refinement_stability", false, 0.0, 0.0, 0, ""};
    std::vector<PotentialSpec> pots{ac_pulse(), ac_system(-1.0), random_scalar_wells(seed + 5), random_symmetric_well(seed + 7)};
    for (const PotentialSpec& p : pots) {
        BoxOptions coarse, fine;
        fine.lambda_samples = 2 * coarse.lambda_samples;
        fine.evolution.sample_count = 2 * coarse.evolution.sample_count;
        fine.evolution.rtol = 0.5 * coarse.evolution.rtol;
        fine.evolution.atol = 0.5 * coarse.evolution.atol;
        MaslovBoxReport a = morse_index(p, coarse), b = morse_index(p, fine);
        int diff = 0;
        if (!a.accepted || !b.accepted) ++diff;
        diff += a.morse_index != b.morse_index;
        diff += a.principal_maslov != b.principal_maslov;
        diff += a.flow_gamma0 != b.flow_gamma0;
        diff += a.flow_gammaplus != b.flow_gammaplus;
        diff += a.flow_gammainf != b.flow_gammainf;
        diff += a.flow_gammaminus != b.flow_gammaminus;
        diff += a.kappa != b.kappa;
        diff += a.kernel_dimension != b.kernel_dimension;
        r.worst = std::max(r.worst, static_cast<double>(diff));
        ++r.cases;
    }
    return finish(r);
}

std::vector<SuiteResult> run_invariant_suites(std::uint64_t seed) {
    return {check_unitarity(seed),          check_lagrangian_residual(seed), check_plane_invariance(seed),
            check_renormalization(seed),    check_path_additivity(seed),     check_refinement_stability(seed)};
}

} // namespace maslov
