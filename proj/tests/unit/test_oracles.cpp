#include "doctest.h"
#include "helpers.hpp"

#include "maslov/oracles.hpp"
#include "maslov/potentials.hpp"

#include <cmath>
#include <functional>

using namespace maslov;

namespace {

double sech2(double x) {
    double c = std::cosh(x);
    return 1.0 / (c * c);
}

// |-u'' + (q(x) - lambda) u| / max|u| with a centred difference
double fd_residual(const std::function<double(double)>& u, const std::function<double(double)>& q, double x) {
    const double h = 2e-4;
    double d2 = (u(x + h) - 2 * u(x) + u(x - h)) / (h * h);
    double scale = std::max({std::abs(u(x - h)), std::abs(u(x)), std::abs(u(x + h))});
    return std::abs(-d2 + q(x) * u(x)) / scale;
}

// symmetric Y X^{-1}
Matrix slope(const LagrangianFrame& f) { return f.y * f.x.inverse(); }

} // namespace

TEST_SUITE("oracles") {

TEST_CASE("cubic coefficients at lambda = 0") {
    CubicCoefficients c = example1_coefficients(0.0);
    CHECK(c.rate == doctest::Approx(2.0));
    CHECK(c.a0 == doctest::Approx(0.0));
    CHECK(c.a1 == doctest::Approx(1.0));
    CHECK(c.a2 == doctest::Approx(-2.0));
    CHECK_THROWS_AS(example1_coefficients(1.0), DomainError);

    CubicCoefficients k = example2_coefficients(4.0);
    CHECK(k.rate == doctest::Approx(2.0));
    CHECK(k.a0 == doctest::Approx(0.0));
    CHECK(k.a1 == doctest::Approx(1.0));
    CHECK(k.a2 == doctest::Approx(-2.0));
    CHECK_THROWS_AS(example2_coefficients(0.0), DomainError);
}

TEST_CASE("scalar closed form solves the equation") {
    for (double lam : {-2.0, -1.25, -0.3, 0.0, 0.5, 0.9}) {
        for (Side side : {Side::minus, Side::plus}) {
            double g = example1_coefficients(lam).rate;
            double sg = side == Side::minus ? 1.0 : -1.0;
            auto u = [&](double x) { return std::exp(sg * 0.5 * g * x) * example1_frame(x, lam, side).frame.x(0, 0); };
            auto q = [&](double x) { return 1.0 - 3.0 * sech2(0.5 * x) - lam; };
            for (double x : {-4.0, -1.3, 0.2, 2.5, 5.0}) {
                CAPTURE(lam);
                CAPTURE(x);
                CHECK(fd_residual(u, q, x) < 1e-5);
                // Y carries the derivative with the same factor removed
                double h = 1e-5;
                double du = (u(x + h) - u(x - h)) / (2 * h);
                ClosedFormFrame f = example1_frame(x, lam, side);
                CHECK(std::abs(du - std::exp(sg * 0.5 * g * x) * f.frame.y(0, 0)) <
                      1e-6 * (1 + std::abs(du)));
            }
        }
    }
}

TEST_CASE("the cubic without its quadratic term is not a solution") {
    double lam = -0.5;
    CubicCoefficients c = example1_coefficients(lam);
    auto u = [&](double x) {
        double t = std::tanh(0.5 * x);
        return std::exp(0.5 * c.rate * x) * (c.a0 + c.a1 * t + t * t * t);
    };
    auto q = [&](double x) { return 1.0 - 3.0 * sech2(0.5 * x) - lam; };
    CHECK(fd_residual(u, q, 0.7) > 1e-2);
}

TEST_CASE("closed forms approach the asymptotic frames") {
    PotentialSpec p = ac_pulse();
    for (double lam : {-2.0, -0.5, 0.5}) {
        CHECK(frame_metric(example1_frame(-40.0, lam, Side::minus).frame, asymptotic_frame_minus(p.minus(), 0.0, lam)) < 1e-12);
        CHECK(frame_metric(example1_frame(40.0, lam, Side::plus).frame, asymptotic_frame_plus(p.plus(), 0.0, lam)) < 1e-12);
    }
    PotentialSpec q = ac_system(-1.0);
    CHECK(frame_metric(example2_frames(-30.0, -1.0, -1.0, Side::minus).frame, asymptotic_frame_minus(q.minus(), 0.0, -1.0)) < 1e-12);
    CHECK(frame_metric(example2_frames(30.0, -1.0, -1.0, Side::plus).frame, asymptotic_frame_plus(q.plus(), 0.0, -1.0)) < 1e-12);
}

TEST_CASE("at lambda = 0 the scalar frame is the derivative of the pulse") {
    for (double x : {-3.0, -0.8, 0.6, 2.0}) {
        double t = std::tanh(0.5 * x), s2 = sech2(0.5 * x);
        double ratio = 0.5 * (s2 - 2 * t * t) / t;
        for (Side side : {Side::minus, Side::plus})
            CHECK(slope(example1_frame(x, 0.0, side).frame)(0, 0) == doctest::Approx(ratio).epsilon(1e-10));
    }
}

TEST_CASE("reflection exchanges the two sides") {
    for (double x : {-2.0, 0.3, 1.7}) {
        for (double lam : {-1.0, 0.4}) {
            Matrix a = slope(example1_frame(x, lam, Side::plus).frame);
            Matrix b = slope(example1_frame(-x, lam, Side::minus).frame);
            CHECK(a(0, 0) == doctest::Approx(-b(0, 0)).epsilon(1e-10));
        }
        Matrix a = slope(example2_frames(x, -1.5, -1.0, Side::plus).frame);
        Matrix b = slope(example2_frames(-x, -1.5, -1.0, Side::minus).frame);
        CHECK((a + b).norm() < 1e-9 * (1 + a.norm()));
        CHECK((a - a.transpose()).norm() < 1e-10 * (1 + a.norm()));
    }
}

TEST_CASE("system closed form solves the coupled equation") {
    for (double c : {-1.0, 0.5}) {
        for (double lam : {-1.0, -3.0}) {
            double kap[2] = {4.0 - lam, 4.0 + 2.0 * c - lam};
            for (double x : {-1.0, 0.4, 1.0}) {
                ClosedFormFrame f = example2_frames(x, lam, c, Side::minus);
                for (int j = 0; j < 2; ++j) {
                    auto col = [&](double z, int i) {
                        return std::exp(std::sqrt(kap[j]) * z) * example2_frames(z, lam, c, Side::minus).frame.x(i, j);
                    };
                    const double h = 2e-4;
                    Vector u(2), d2(2);
                    for (int i = 0; i < 2; ++i) {
                        u(i) = col(x, i);
                        d2(i) = (col(x + h, i) - 2 * u(i) + col(x - h, i)) / (h * h);
                    }
                    Matrix v(2, 2);
                    double d = 4.0 - 12.0 * sech2(x) + c;
                    v << d, -c, -c, d;
                    Vector r = -d2 + (v - lam * Matrix::Identity(2, 2)) * u;
                    CAPTURE(c);
                    CAPTURE(lam);
                    CHECK(r.norm() / u.norm() < 1e-5);
                }
                CHECK(f.family == OracleFamily::example2_minus);
            }
        }
    }
    CHECK_THROWS_AS(example2_frames(0.0, -1.0, 0.0, Side::minus), DomainError);
    CHECK_THROWS_AS(example2_frames(0.0, -1.0, -2.5, Side::minus), DomainError);
}

TEST_CASE("limit of W at the far right") {
    CHECK(appendix_wplus_limit(-1.25) == Complex(-1.0, 0.0));
    CHECK(appendix_wplus_limit(0.0) == Complex(-1.0, 0.0));
    CHECK(appendix_wplus_limit(0.75) == Complex(-1.0, 0.0));
    Complex a(1, 2), b(1, -2);
    CHECK(std::abs(appendix_wplus_limit(-3.0) - (-(a * a) / (b * b))) < 1e-15);
    for (double lam : {-5.0, -0.5, 0.5, 0.99}) CHECK(std::abs(appendix_wplus_limit(lam)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(appendix_wplus_limit(1.0), DomainError);
}

TEST_CASE("Sturm zero counts") {
    PotentialSpec p = ac_pulse();
    CHECK(sturm_zero_count(p, -2.0) == 0);
    CHECK(sturm_zero_count(p, -1.0) == 1);
    CHECK(sturm_zero_count(p, -1e-6) == 1);
    CHECK(sturm_zero_count(p, 0.5) == 2);
    CHECK(sturm_zero_count(p, 0.9) == 3);
    CHECK(sturm_zero_count(constant_potential(1.0), -0.5) == 0);
    CHECK_THROWS_AS(sturm_zero_count(ac_system(-1.0), -1.0), ValidationError);
    CHECK_THROWS_AS(sturm_zero_count(p, 1.0), DomainError);

    PotentialSpec w = random_scalar_wells(8);
    int prev = 0;
    for (double lam = -6.0; lam < w.nu_min() - 0.05; lam += 0.25) {
        int z = sturm_zero_count(w, lam);
        CHECK(z >= prev);
        prev = z;
    }
}

}
