#include "maslov/lagrangian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace maslov {

LagrangianFrame::LagrangianFrame(Matrix x_, Matrix y_) : x(std::move(x_)), y(std::move(y_)) {
    if (x.rows() != x.cols() || y.rows() != y.cols() || x.rows() != y.rows() || x.rows() == 0)
        throw ValidationError("frame blocks must be square n x n with matching n");
}

LagrangianFrame LagrangianFrame::from_stacked(const Matrix& f) {
    if (f.rows() != 2 * f.cols() || f.cols() == 0) throw ValidationError("stacked frame must be 2n x n");
    const Eigen::Index n = f.cols();
    return {f.topRows(n), f.bottomRows(n)};
}

Matrix LagrangianFrame::stacked() const {
    Matrix f(2 * x.rows(), x.cols());
    f << x, y;
    return f;
}

namespace {

// Orthonormal basis of the column span, R diagonal made positive.
Matrix orthonormal_basis(const Matrix& f) {
    if (!f.allFinite()) throw NumericalError("frame has non-finite entries");
    const Eigen::Index n = f.cols();
    Eigen::HouseholderQR<Matrix> qr(f);
    Matrix q = qr.householderQ() * Matrix::Identity(f.rows(), n);
    Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    double rmax = r.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < n; ++j) {
        if (!(std::abs(r(j, j)) > 1e-13 * rmax)) throw NumericalError("frame rank collapse");
        if (r(j, j) < 0) q.col(j) *= -1.0;
    }
    return q;
}

// A * B^{-1}
CMatrix right_divide(const CMatrix& a, const CMatrix& b) {
    Eigen::PartialPivLU<CMatrix> lu(b.transpose());
    if (!(lu.rcond() > 1e-13)) throw NumericalError("singular X -/+ iY block in wtilde");
    return lu.solve(a.transpose()).transpose();
}

CMatrix half_cayley(const LagrangianFrame& f) {
    CMatrix plus = f.x.cast<Complex>() + Complex(0, 1) * f.y.cast<Complex>();
    CMatrix minus = f.x.cast<Complex>() - Complex(0, 1) * f.y.cast<Complex>();
    return right_divide(plus, minus);
}

} // namespace

double lagrangian_residual(const LagrangianFrame& f) {
    LagrangianFrame o = renormalize_frame(f);
    return (o.x.transpose() * o.y - o.y.transpose() * o.x).norm();
}

void validate_frame(const LagrangianFrame& f, double tol) {
    double res;
    try {
        res = lagrangian_residual(f);
    } catch (const NumericalError&) {
        throw ValidationError("frame is rank deficient");
    }
    if (res > tol) throw ValidationError("frame is not Lagrangian (residual " + std::to_string(res) + ")");
}

LagrangianFrame renormalize_frame(const LagrangianFrame& f) {
    return LagrangianFrame::from_stacked(orthonormal_basis(f.stacked()));
}

double frame_metric(const LagrangianFrame& a, const LagrangianFrame& b) {
    if (a.n() != b.n()) throw ValidationError("frame_metric: dimension mismatch");
    Matrix qa = orthonormal_basis(a.stacked());
    Matrix qb = orthonormal_basis(b.stacked());
    return (qa * qa.transpose() - qb * qb.transpose()).norm();
}

double unitarity_defect(const CMatrix& w) {
    return (w * w.adjoint() - CMatrix::Identity(w.rows(), w.cols())).norm();
}

CMatrix project_unitary(const CMatrix& w, double tol) {
    double d = unitarity_defect(w);
    if (d <= tol) return w;
    if (!(d <= 1e-4)) throw NumericalError("unitarity drift " + std::to_string(d));
    CMatrix u = w;
    for (int it = 0; it < 20 && unitarity_defect(u) > 1e-14; ++it)
        u = 0.5 * (u + u.adjoint().inverse());
    return u;
}

UnitarySnapshot wtilde(const LagrangianFrame& a, const LagrangianFrame& b, double param) {
    if (a.n() != b.n()) throw ValidationError("wtilde: dimension mismatch");
    LagrangianFrame oa = renormalize_frame(a);
    LagrangianFrame ob = renormalize_frame(b);
    CMatrix w1 = half_cayley(oa);
    CMatrix w2 = half_cayley(ob);
    CMatrix w = -right_divide(w1, w2);
    return {project_unitary(w), param};
}

WtildeTarget::WtildeTarget(const LagrangianFrame& b) : n_(b.n()) {
    CMatrix w2 = half_cayley(renormalize_frame(b));
    lu_.compute(w2.transpose());
    if (!(lu_.rcond() > 1e-13)) throw NumericalError("singular target in wtilde");
}

UnitarySnapshot WtildeTarget::operator()(const LagrangianFrame& a, double param) const {
    if (a.n() != n_) throw ValidationError("wtilde: dimension mismatch");
    CMatrix w1 = half_cayley(renormalize_frame(a));
    CMatrix w = -lu_.solve(w1.transpose()).transpose();
    return {project_unitary(w), param};
}

std::vector<double> unitary_angles(const CMatrix& w) {
    const Eigen::Index n = w.rows();
    std::vector<Complex> ev;
    if (n == 1) {
        ev.push_back(w(0, 0));
    } else if (n == 2) {
        Complex tr = w(0, 0) + w(1, 1);
        Complex det = w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0);
        Complex sq = std::sqrt(tr * tr - 4.0 * det);
        Complex big = std::abs(tr + sq) >= std::abs(tr - sq) ? 0.5 * (tr + sq) : 0.5 * (tr - sq);
        if (std::abs(big) == 0.0) throw NumericalError("unitary_angles: zero eigenvalue");
        ev.push_back(big);
        ev.push_back(det / big);
    } else {
        Eigen::ComplexEigenSolver<CMatrix> ces(w, false);
        if (ces.info() != Eigen::Success) throw NumericalError("unitary_angles: eigen solver failed");
        for (Eigen::Index k = 0; k < n; ++k) ev.push_back(ces.eigenvalues()(k));
    }
    std::vector<double> out;
    out.reserve(ev.size());
    for (const Complex& z : ev) {
        if (std::abs(std::abs(z) - 1.0) > 1e-6)
            throw NumericalError("unitary_angles: eigenvalue modulus " + std::to_string(std::abs(z)));
        out.push_back(wrap_angle(std::arg(z)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

int intersection_dim(const CMatrix& w, double angle_tol) {
    int k = 0;
    for (double a : unitary_angles(w))
        if (std::abs(wrap_angle(a - kPi)) <= angle_tol) ++k;
    return k;
}

} // namespace maslov
