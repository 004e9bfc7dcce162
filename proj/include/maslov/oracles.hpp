#pragma once

#include "maslov/evolution.hpp"

namespace maslov {

enum class Side { minus, plus };

enum class OracleFamily { example1_minus, example1_plus, example2_minus, example2_plus };

struct ClosedFormFrame {
    double x;
    double lambda;
    LagrangianFrame frame;
    OracleFamily family;
};

// gamma = 2 sqrt(1 - lambda), a0 = gamma (4 - gamma^2) / 15, a1 = (2 gamma^2 - 3) / 5, a2 = -gamma
struct CubicCoefficients {
    double rate;
    double a0;
    double a1;
    double a2;
};

CubicCoefficients example1_coefficients(double lambda);
// Same cubic with gamma replaced by sqrt(kappa).
CubicCoefficients example2_coefficients(double kappa);

// Decaying solution of -y'' + (1 - 3 sech^2(x/2)) y = lambda y, exponential factor dropped.
ClosedFormFrame example1_frame(double x, double lambda, Side side);

// Two-column decaying frame for the coupled sech^2 system.
ClosedFormFrame example2_frames(double x, double lambda, double c, Side side);

// x -> +infinity limit of W for the scalar pulse; -1 at its eigenvalues.
Complex appendix_wplus_limit(double lambda);

// Zeros on (-L, L) of the scalar solution that decays at -infinity.
int sturm_zero_count(const PotentialSpec& pot, double lambda, const EvolutionOptions& opts = {});

} // namespace maslov
