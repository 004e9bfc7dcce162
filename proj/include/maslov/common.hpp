#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace maslov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: shapes, symmetry, out-of-range options.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Input is well formed but outside where the operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

// The numerics ran but could not be trusted.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Sampling could not be refined enough to classify a crossing.
class ResolutionError : public NumericalError {
public:
    ResolutionError(const std::string& what, double lo, double hi)
        : NumericalError(what), lo(lo), hi(hi) {}
    double lo;
    double hi;
};

// Wrap an angle into (-pi, pi].
double wrap_angle(double a);

} // namespace maslov
