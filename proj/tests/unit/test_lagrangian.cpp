#include "doctest.h"
#include "helpers.hpp"

#include "maslov/lagrangian.hpp"

#include <cmath>

using namespace maslov;
using testing::column;

TEST_SUITE("lagrangian") {

TEST_CASE("wrap_angle range") {
    CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(wrap_angle(0.25) == 0.25);
}

TEST_CASE("frame metric between lines") {
    CHECK(frame_metric(column(1, 0), column(1, 1)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(frame_metric(column(1, 0), column(0, 1)) == doctest::Approx(std::sqrt(2.0)));
    CHECK(frame_metric(column(2, 3), column(-4, -6)) < 1e-14);
}

TEST_CASE("renormalization keeps the plane") {
    LagrangianFrame f = renormalize_frame(column(1, 1));
    CHECK(f.x(0, 0) == doctest::Approx(1 / std::sqrt(2.0)));
    CHECK(f.y(0, 0) == doctest::Approx(1 / std::sqrt(2.0)));

    std::mt19937_64 rng(3);
    for (int n = 1; n <= 4; ++n) {
        LagrangianFrame g = testing::random_frame(rng, n);
        LagrangianFrame h = renormalize_frame(g);
        Matrix q = h.stacked();
        CHECK((q.transpose() * q - Matrix::Identity(n, n)).norm() < 1e-13);
        CHECK(frame_metric(g, h) < 1e-12);
    }
    CHECK_THROWS_AS(renormalize_frame(LagrangianFrame(Matrix::Zero(2, 2), Matrix::Zero(2, 2))),
                    NumericalError);
}

TEST_CASE("residual and validation") {
    std::mt19937_64 rng(5);
    LagrangianFrame g = testing::random_frame(rng, 3);
    CHECK(lagrangian_residual(g) < 1e-13);
    CHECK_NOTHROW(validate_frame(g));

    Matrix x = Matrix::Identity(2, 2), y(2, 2);
    y << 0, 1, -1, 0;
    CHECK(lagrangian_residual({x, y}) > 0.5);
    CHECK_THROWS_AS(validate_frame({x, y}), ValidationError);
    CHECK_THROWS_AS(validate_frame({Matrix::Zero(2, 2), Matrix::Zero(2, 2)}), ValidationError);
    CHECK_THROWS_AS(LagrangianFrame(Matrix::Identity(2, 2), Matrix::Identity(3, 2)), ValidationError);
}

TEST_CASE("W is unitary and independent of the spanning basis") {
    std::mt19937_64 rng(9);
    for (int n = 1; n <= 4; ++n) {
        for (int rep = 0; rep < 10; ++rep) {
            LagrangianFrame a = testing::random_frame(rng, n), b = testing::random_frame(rng, n);
            CMatrix w = wtilde(a, b).w;
            CHECK(unitarity_defect(w) < 1e-10);

            Matrix m = testing::gaussian(rng, n, n) + 3 * Matrix::Identity(n, n);
            Matrix k = testing::gaussian(rng, n, n) + 3 * Matrix::Identity(n, n);
            CMatrix w2 = wtilde({a.x * m, a.y * m}, {b.x * k, b.y * k}).w;
            CHECK((w - w2).norm() < 1e-9);

            WtildeTarget t(b);
            CHECK((t(a).w - w).norm() < 1e-10);
        }
    }
}

TEST_CASE("W of a plane against itself is -I") {
    std::mt19937_64 rng(13);
    for (int n = 1; n <= 4; ++n) {
        LagrangianFrame a = testing::random_frame(rng, n);
        CMatrix w = wtilde(a, a).w;
        CHECK((w + CMatrix::Identity(n, n)).norm() < 1e-12);
        CHECK(intersection_dim(w) == n);
    }
}

TEST_CASE("intersection dimension equals kernel of S1 - S2") {
    // graphs of S1 and S2 meet in ker(S1 - S2)
    Matrix s1(3, 3), s2(3, 3);
    s1 << 1, 0, 0, 0, 2, 0, 0, 0, 3;
    s2 << 1, 0, 0, 0, 2, 0, 0, 0, -1;
    Matrix i3 = Matrix::Identity(3, 3);
    CMatrix w = wtilde({i3, s1}, {i3, s2}).w;
    CHECK(intersection_dim(w) == 2);

    s2(1, 1) = 5;
    CHECK(intersection_dim(wtilde({i3, s1}, {i3, s2}).w) == 1);

    // transverse pair: Dirichlet against Neumann
    CHECK(intersection_dim(wtilde({i3, Matrix::Zero(3, 3)}, {Matrix::Zero(3, 3), i3}).w) == 0);
}

TEST_CASE("scalar W closed form") {
    // lines (cos a, sin a) and (cos b, sin b): W = -exp(2i(a - b))
    for (double a : {0.1, 0.7, 2.0}) {
        for (double b : {-0.4, 0.3, 1.1}) {
            CMatrix w = wtilde(column(std::cos(a), std::sin(a)), column(std::cos(b), std::sin(b))).w;
            Complex expect = -std::exp(Complex(0, 2 * (a - b)));
            CHECK(std::abs(w(0, 0) - expect) < 1e-13);
        }
    }
}

TEST_CASE("unitary angles") {
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = std::exp(Complex(0, 2.0));
    d(1, 1) = std::exp(Complex(0, -1.0));
    d(2, 2) = -1.0;
    std::mt19937_64 rng(2);
    Matrix g = testing::gaussian(rng, 3, 3);
    Eigen::HouseholderQR<Matrix> qr(g);
    CMatrix q = Matrix(qr.householderQ()).cast<Complex>();
    std::vector<double> ang = unitary_angles(q * d * q.adjoint());
    REQUIRE(ang.size() == 3);
    CHECK(ang[0] == doctest::Approx(-1.0));
    CHECK(ang[1] == doctest::Approx(2.0));
    CHECK(ang[2] == doctest::Approx(kPi));

    CMatrix bad = CMatrix::Identity(2, 2) * 1.1;
    CHECK_THROWS_AS(unitary_angles(bad), NumericalError);
}

TEST_CASE("projection onto the unitary group") {
    CMatrix w = CMatrix::Identity(2, 2);
    w(0, 1) = Complex(1e-6, 0);
    CMatrix p = project_unitary(w);
    CHECK(unitarity_defect(p) < 1e-13);
    CHECK((p - w).norm() < 1e-5);
    CHECK_THROWS_AS(project_unitary(CMatrix::Identity(2, 2) * 1.01), NumericalError);
}

}
