#include "maslov/endstates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace maslov {

namespace {

void normalize_signs(Matrix& v) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        double scale = v.col(j).cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < v.rows(); ++i) {
            if (std::abs(v(i, j)) > 1e-12 * scale) {
                if (v(i, j) < 0) v.col(j) *= -1.0;
                break;
            }
        }
    }
}

SymmetricEigen eigen_2x2(const Matrix& a) {
    double p = a(0, 0), q = a(0, 1), c = a(1, 1);
    double mid = 0.5 * (p + c);
    double rad = std::hypot(0.5 * (p - c), q);
    SymmetricEigen out;
    out.values.resize(2);
    out.values << mid - rad, mid + rad;
    out.vectors = Matrix::Identity(2, 2);
    double scale = std::max({std::abs(p), std::abs(q), std::abs(c), 1e-300});
    if (std::abs(q) <= 1e-15 * scale) {
        if (p > c) out.vectors << 0, 1, 1, 0;
    } else {
        for (int k = 0; k < 2; ++k) {
            double lam = out.values(k);
            Eigen::Vector2d u(q, lam - p);
            Eigen::Vector2d w(lam - c, q);
            Eigen::Vector2d v = u.norm() >= w.norm() ? u : w;
            out.vectors.col(k) = v / v.norm();
        }
    }
    return out;
}

SymmetricEigen eigen_jacobi(const Matrix& a0, double tol) {
    const Eigen::Index n = a0.rows();
    Matrix a = a0;
    Matrix v = Matrix::Identity(n, n);
    double scale = std::max(a0.norm(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(2.0 * off) <= tol * scale) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = a(order[k], order[k]);
        out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

} // namespace

double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

SymmetricEigen symmetric_eigen(const Matrix& a, double tol) {
    if (a.rows() != a.cols() || a.rows() == 0) throw ValidationError("symmetric_eigen: matrix must be square and nonempty");
    if (!a.allFinite()) throw ValidationError("symmetric_eigen: non-finite entries");
    SymmetricEigen out;
    if (a.rows() == 1) {
        out.values = Vector::Constant(1, a(0, 0));
        out.vectors = Matrix::Identity(1, 1);
    } else if (a.rows() == 2) {
        out = eigen_2x2(a);
    } else {
        out = eigen_jacobi(a, tol);
    }
    normalize_signs(out.vectors);
    return out;
}

SymmetricEndstate decompose_endstate(const Matrix& v, double sym_tol) {
    if (v.rows() != v.cols() || v.rows() == 0) throw ValidationError("endstate must be a nonempty square matrix");
    if (!v.allFinite()) throw ValidationError("endstate has non-finite entries");
    double asym = (v - v.transpose()).norm();
    if (asym > sym_tol * (1.0 + v.norm()))
        throw ValidationError("endstate is not symmetric (asymmetry " + std::to_string(asym) + ")");
    Matrix sym = 0.5 * (v + v.transpose());
    SymmetricEigen e = symmetric_eigen(sym);
    return {sym, e.values, e.vectors};
}

RateTable hyperbolic_rates(const SymmetricEndstate& e, double s, double lambda) {
    const int n = e.n();
    if (lambda > e.nu_min())
        throw DomainError("lambda = " + std::to_string(lambda) + " exceeds nu_min = " + std::to_string(e.nu_min()));
    RateTable t;
    t.s = s;
    t.lambda = lambda;
    t.mu.resize(2 * n);
    t.eigen_index.resize(2 * n);
    for (int j = 0; j < n; ++j) {
        int k = n - 1 - j;
        double root = std::sqrt(std::max(0.0, s * s - 4.0 * (lambda - e.nu(k))));
        t.mu[j] = 0.5 * (s - root);
        t.eigen_index[j] = k;
    }
    for (int j = 0; j < n; ++j) {
        double root = std::sqrt(std::max(0.0, s * s - 4.0 * (lambda - e.nu(j))));
        t.mu[n + j] = 0.5 * (s + root);
        t.eigen_index[n + j] = j;
    }
    for (int k = 0; k + 1 < 2 * n; ++k)
        if (std::abs(t.mu[k + 1] - t.mu[k]) <= 1e-12 * (1.0 + std::abs(t.mu[k]))) t.has_ties = true;
    return t;
}

LagrangianFrame asymptotic_frame_minus(const SymmetricEndstate& e, double s, double lambda) {
    RateTable t = hyperbolic_rates(e, s, lambda);
    const int n = e.n();
    Matrix x(n, n), y(n, n);
    for (int j = 0; j < n; ++j) {
        x.col(j) = e.r.col(j);
        y.col(j) = t.mu[n + j] * e.r.col(j);
    }
    return {x, y};
}

LagrangianFrame asymptotic_frame_plus(const SymmetricEndstate& e, double s, double lambda) {
    RateTable t = hyperbolic_rates(e, s, lambda);
    const int n = e.n();
    Matrix x(n, n), y(n, n);
    for (int j = 0; j < n; ++j) {
        int k = t.eigen_index[j];
        x.col(j) = e.r.col(k);
        y.col(j) = t.mu[j] * e.r.col(k);
    }
    return {x, y};
}

} // namespace maslov
