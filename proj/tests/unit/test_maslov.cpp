#include "doctest.h"
#include "helpers.hpp"

#include "maslov/maslov.hpp"
#include "maslov/oracles.hpp"
#include "maslov/potentials.hpp"

#include <cmath>

using namespace maslov;

namespace {

std::vector<double> linspace(double a, double b, int m) {
    std::vector<double> v;
    for (int k = 0; k < m; ++k) v.push_back(a + (b - a) * k / (m - 1));
    return v;
}

std::vector<double> loci(const std::vector<ScanRow>& rows, double x) {
    std::vector<double> out;
    for (const ScanRow& r : rows)
        if (r.x == x && r.crossing != 0) out.push_back(r.lambda);
    return out;
}

} // namespace

TEST_SUITE("maslov") {

TEST_CASE("scalar pulse box") {
    MaslovBoxReport r = morse_index(ac_pulse(), {});
    CHECK(r.accepted);
    CHECK(r.morse_index == 1);
    CHECK(r.principal_maslov == -1);
    CHECK(r.flow_gammainf == 0);
    CHECK(r.homotopy_sum == 0);
    CHECK(r.flow_gammaplus == r.morse_index);
    CHECK(r.flow_gamma0 + r.flow_gammaplus + r.flow_gammainf + r.flow_gammaminus == 0);
    CHECK(r.kappa == 0);
    CHECK(r.kernel_dimension == 1);
    REQUIRE(r.crossings_gammaplus.size() == 1);
    CHECK(r.crossings_gammaplus[0].param == doctest::Approx(-1.25).epsilon(1e-2));
    CHECK(r.half_width == doctest::Approx(std::log(1e8)));
    CHECK(r.lambda_top == -1e-6);
}

TEST_CASE("coupled system box") {
    MaslovBoxReport r = morse_index(ac_system(-1.0), {});
    CHECK(r.accepted);
    CHECK(r.morse_index == 3);
    CHECK(r.principal_maslov == -3);
    CHECK(r.homotopy_sum == 0);
    std::vector<double> expect{-2.0, -5.0, -7.0};
    REQUIRE(r.crossings_gammaplus.size() == 3);
    std::vector<double> got;
    for (const CrossingRecord& c : r.crossings_gammaplus) got.push_back(c.param);
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(-7.0).epsilon(1e-2));
    CHECK(got[1] == doctest::Approx(-5.0).epsilon(1e-2));
    CHECK(got[2] == doctest::Approx(-2.0).epsilon(1e-2));
}

TEST_CASE("constant potential has nothing to count") {
    MaslovBoxReport r = morse_index(constant_potential(1.0), {});
    CHECK(r.accepted);
    CHECK(r.morse_index == 0);
    CHECK(r.principal_maslov == 0);
    CHECK(r.flow_gamma0 == 0);
    CHECK(r.flow_gammaplus == 0);
    CHECK(r.flow_gammainf == 0);
    CHECK(r.flow_gammaminus == 0);
    CHECK(r.kernel_dimension == 0);
}

TEST_CASE("convection shifts the spectrum by s^2/4") {
    // e^{sx/2} conjugation turns -y'' + s y' + V y into -y'' + (V + s^2/4) y
    for (double s : {1.0, 2.0}) {
        MaslovBoxReport a = morse_index(ac_pulse(s), {});
        MaslovBoxReport b = morse_index(shifted_potential(ac_pulse(), s * s / 4), {});
        CAPTURE(s);
        CHECK(a.accepted);
        CHECK(b.accepted);
        CHECK(a.morse_index == b.morse_index);
    }
    CHECK(morse_index(ac_pulse(1.0), {}).morse_index == 1);
    CHECK(morse_index(ac_pulse(2.0), {}).morse_index == 1);
}

TEST_CASE("problem bounds") {
    ProblemBounds b = problem_bounds(ac_pulse(), std::log(1e8));
    CHECK(b.nu_min == 1.0);
    CHECK(b.sup_norm == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(b.point_spectrum_floor == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(b.lambda_infty == doctest::Approx(3.0).epsilon(1e-6));
    ProblemBounds c = problem_bounds(ac_pulse(2.0), std::log(1e8));
    CHECK(c.point_spectrum_floor == doctest::Approx(-3.0).epsilon(1e-6));
    CHECK(default_x_infty(ac_pulse(), 20.0) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("box options are honoured") {
    BoxOptions o;
    o.x_infty = 3.0;
    MaslovBoxReport r = morse_index(ac_pulse(), o);
    CHECK(r.accepted);
    CHECK(r.x_infty == 3.0);
    CHECK(r.morse_index == 1);
    o = {};
    o.lambda_infty = 10.0;
    r = morse_index(ac_pulse(), o);
    CHECK(r.lambda_infty == 10.0);
    CHECK(r.morse_index == 1);
}

TEST_CASE("kappa counts bounded states at zero") {
    CHECK(kappa(ac_pulse()) == 0);
    CHECK(kappa(constant_potential(1.0)) == 0);
}

TEST_CASE("essential spectrum reaching zero is refused") {
    CHECK_THROWS_AS(make_box_context(constant_potential(0.0), {}), DomainError);
    CHECK_THROWS_AS(make_box_context(constant_potential(5e-7), {}), DomainError);
    MaslovBoxReport r;
    CHECK_THROWS_AS(r = morse_index(constant_potential(-1.0), {}), DomainError);
}

TEST_CASE("monotonicity in lambda") {
    CHECK(monotonicity_check(ac_pulse(), 3.0, linspace(-2.0, 0.9, 59)).passed);
    CHECK(monotonicity_check(constant_potential(1.0), 0.0, linspace(-2.0, 0.9, 30)).passed);
    CHECK(monotonicity_check(random_symmetric_well(3), 0.5, linspace(-3.0, 0.2, 30)).passed);
    CHECK_THROWS_AS(monotonicity_check(ac_pulse(), 0.0, {-1.0, 1.0}), DomainError);
}

TEST_CASE("left shelf approaches -1 at the expected rate") {
    LeftShelfReport r = left_shelf_asymptotics_check(ac_pulse(), {-25.0, -100.0, -400.0});
    CHECK(r.decreasing);
    CHECK(r.ratios_in_band);
    REQUIRE(r.ratios.size() == 2);
    for (double q : r.ratios) CHECK(q == doctest::Approx(0.5).epsilon(0.2));

    LeftShelfReport z = left_shelf_asymptotics_check(constant_potential(0.0), {-4.0, -16.0});
    for (std::size_t k = 0; k < 2; ++k) {
        double mu = std::sqrt(-z.lambdas[k]);
        Complex q = (Complex(1, mu) / Complex(1, -mu));
        CHECK(z.eps[k] == doctest::Approx(std::abs(1.0 - q * q)).epsilon(1e-6));
    }
}

TEST_CASE("scan over a constant potential finds nothing") {
    std::vector<double> xs = linspace(-4, 4, 5), ls = linspace(-2, 0.9, 7);
    std::vector<ScanRow> rows = crossing_scan(constant_potential(1.0), xs, ls);
    CHECK(rows.size() == xs.size() * ls.size());
    for (const ScanRow& r : rows) CHECK(r.crossing == 0);
}

TEST_CASE("scan of the pulse") {
    ScanOptions o;
    o.box.x_infty = 3.0;
    std::vector<double> xs{-2.0, 3.0}, ls = linspace(-2.0, 0.9, 30);
    std::vector<ScanRow> rows = crossing_scan(ac_pulse(), xs, ls, o);
    CHECK(rows.size() == xs.size() * ls.size());
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const ScanRow &a = rows[k - 1], &b = rows[k];
        bool ordered = a.lambda < b.lambda || (a.lambda == b.lambda && (a.x < b.x || (a.x == b.x && a.angle_index < b.angle_index)));
        CHECK(ordered);
    }
    std::vector<double> at = loci(rows, 3.0);
    REQUIRE(at.size() == 3);
    CHECK(at[0] == doctest::Approx(-1.25).epsilon(1e-6));
    CHECK(std::abs(at[1]) < 1e-6);
    CHECK(at[2] == doctest::Approx(0.75).epsilon(1e-6));
    for (const ScanRow& r : rows) {
        CHECK(r.tau == doctest::Approx(compactify(r.x)));
        if (r.crossing != 0) {
            CHECK(r.direction == -1);
            CHECK(r.angle == doctest::Approx(kPi));
        }
    }
    CHECK_THROWS_AS(crossing_scan(ac_pulse(), {100.0}, ls, o), ValidationError);
}

TEST_CASE("scan is independent of the thread count") {
    std::vector<double> xs = linspace(-3, 3, 4), ls = linspace(-1.5, 0.5, 8);
    ScanOptions a, b;
    a.threads = 1;
    b.threads = 3;
    std::vector<ScanRow> ra = crossing_scan(ac_pulse(), xs, ls, a), rb = crossing_scan(ac_pulse(), xs, ls, b);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t k = 0; k < ra.size(); ++k) {
        CHECK(ra[k].lambda == rb[k].lambda);
        CHECK(ra[k].angle == rb[k].angle);
        CHECK(ra[k].crossing == rb[k].crossing);
    }
}

TEST_CASE("box count agrees with Sturm oscillation on random wells") {
    for (std::uint64_t seed = 100; seed < 104; ++seed) {
        PotentialSpec p = random_scalar_wells(seed);
        MaslovBoxReport r = morse_index(p, {});
        CAPTURE(seed);
        CHECK(r.accepted);
        CHECK(r.morse_index == sturm_zero_count(p, -1e-6));
    }
}

}
