#pragma once

#include "maslov/common.hpp"

#include <vector>

namespace maslov {

// A 2n x n frame [X; Y] spanning a plane in R^{2n}.
struct LagrangianFrame {
    Matrix x;
    Matrix y;

    LagrangianFrame() = default;
    LagrangianFrame(Matrix x_, Matrix y_);
    static LagrangianFrame from_stacked(const Matrix& f);

    int n() const { return static_cast<int>(x.rows()); }
    Matrix stacked() const;
};

// ||X^T Y - Y^T X||_F after orthonormalizing the frame.
double lagrangian_residual(const LagrangianFrame& f);

// Throws ValidationError when the frame is rank deficient or not Lagrangian.
void validate_frame(const LagrangianFrame& f, double tol = 1e-8);

// Same plane, orthonormal columns, R factor with positive diagonal.
LagrangianFrame renormalize_frame(const LagrangianFrame& f);

// Frobenius distance between the orthogonal projectors onto the two planes.
double frame_metric(const LagrangianFrame& a, const LagrangianFrame& b);

struct UnitarySnapshot {
    CMatrix w;
    double param = 0.0;
};

// -(X1 + iY1)(X1 - iY1)^{-1} (X2 - iY2)(X2 + iY2)^{-1}
UnitarySnapshot wtilde(const LagrangianFrame& a, const LagrangianFrame& b, double param = 0.0);

// wtilde against a fixed second frame, with that frame's half prepared once.
class WtildeTarget {
public:
    explicit WtildeTarget(const LagrangianFrame& b);
    UnitarySnapshot operator()(const LagrangianFrame& a, double param = 0.0) const;

private:
    int n_;
    Eigen::PartialPivLU<CMatrix> lu_; // of W2^T
};

// Pull a nearly unitary matrix back onto U(n). Throws past 1e-4 drift.
CMatrix project_unitary(const CMatrix& w, double tol = 1e-8);

double unitarity_defect(const CMatrix& w);

// Eigenvalue arguments in (-pi, pi], ascending.
std::vector<double> unitary_angles(const CMatrix& w);

// Number of eigenvalues within angle_tol of -1.
int intersection_dim(const CMatrix& w, double angle_tol = 1e-6);

} // namespace maslov
