#pragma once

#include "maslov/common.hpp"
#include "maslov/lagrangian.hpp"

#include <vector>

namespace maslov {

struct SymmetricEigen {
    Vector values;  // ascending
    Matrix vectors; // orthonormal columns, first nonzero entry positive
};

// Symmetric eigensolver: closed form for n <= 2, cyclic Jacobi above.
SymmetricEigen symmetric_eigen(const Matrix& a, double tol = 1e-12);

struct SymmetricEndstate {
    Matrix matrix;
    Vector nu;
    Matrix r;
    int n() const { return static_cast<int>(nu.size()); }
    double nu_min() const { return nu(0); }
};

SymmetricEndstate decompose_endstate(const Matrix& v, double sym_tol = 1e-10);

// mu sorted ascending; eigen_index[k] is the column of r paired with mu[k].
// The first n entries use the minus root, the last n the plus root.
struct RateTable {
    std::vector<double> mu;
    std::vector<int> eigen_index;
    double s = 0.0;
    double lambda = 0.0;
    bool has_ties = false;
};

RateTable hyperbolic_rates(const SymmetricEndstate& e, double s, double lambda);

// Frame of the unstable subspace of the constant-coefficient system at -infinity.
LagrangianFrame asymptotic_frame_minus(const SymmetricEndstate& e, double s, double lambda);
// Frame of the stable subspace at +infinity, columns in reversed eigen order.
LagrangianFrame asymptotic_frame_plus(const SymmetricEndstate& e, double s, double lambda);

} // namespace maslov
