#include "maslov/oracles.hpp"

#include <cmath>

namespace maslov {

namespace {

struct CubicValue {
    double p;  // polynomial in t
    double ps; // derivative in the tanh argument, i.e. p'(t) sech^2
};

// p(t) = a0 + a1 t + a2 t^2 + t^3 expanded about t = +-1 so that the
// cancellation near the ends of the line is done analytically.
CubicValue cubic(double a0, double a1, double a2, double z) {
    double az = std::abs(z);
    double e = std::exp(-2.0 * az);
    double u = 2.0 * e / (1.0 + e); // 1 - |t|
    double sech2 = u * (2.0 - u);
    double sg = z >= 0 ? 1.0 : -1.0;
    // t = sg (1 - u)
    double p0 = a0 + sg * a1 + a2 + sg;
    double p1 = a1 + 2.0 * sg * a2 + 3.0;
    double p2 = a2 + 3.0 * sg;
    double p = p0 - sg * p1 * u + p2 * u * u - sg * u * u * u;
    double dp = p1 - 2.0 * sg * p2 * u + 3.0 * u * u;
    return {p, dp * sech2};
}

} // namespace

CubicCoefficients example1_coefficients(double lambda) {
    if (!(lambda < 1.0)) throw DomainError("example1 oracle needs lambda < 1");
    double g = 2.0 * std::sqrt(1.0 - lambda);
    return {g, g * (4.0 - g * g) / 15.0, (2.0 * g * g - 3.0) / 5.0, -g};
}

CubicCoefficients example2_coefficients(double kappa) {
    if (!(kappa > 0)) throw DomainError("example2 oracle needs kappa > 0");
    double k = std::sqrt(kappa);
    return {k, k * (4.0 - kappa) / 15.0, (2.0 * kappa - 3.0) / 5.0, -k};
}

ClosedFormFrame example1_frame(double x, double lambda, Side side) {
    CubicCoefficients c = example1_coefficients(lambda);
    double s = 0.5 * x;
    Matrix X(1, 1), Y(1, 1);
    if (side == Side::minus) {
        CubicValue h = cubic(c.a0, c.a1, c.a2, s);
        X(0, 0) = h.p;
        Y(0, 0) = 0.5 * (h.ps + c.rate * h.p);
    } else {
        // H+(t) = -H-(-t)
        CubicValue h = cubic(c.a0, c.a1, c.a2, -s);
        X(0, 0) = -h.p;
        Y(0, 0) = 0.5 * (h.ps + c.rate * h.p);
    }
    return {x, lambda, LagrangianFrame(X, Y), side == Side::minus ? OracleFamily::example1_minus : OracleFamily::example1_plus};
}

ClosedFormFrame example2_frames(double x, double lambda, double c, Side side) {
    if (!(c > -2.0) || c == 0.0) throw DomainError("example2 oracle needs -2 < c and c != 0");
    double kap[2] = {4.0 - lambda, 4.0 + 2.0 * c - lambda};
    double w[2], dw[2];
    for (int j = 0; j < 2; ++j) {
        CubicCoefficients q = example2_coefficients(kap[j]);
        if (side == Side::minus) {
            CubicValue h = cubic(q.a0, q.a1, q.a2, x);
            w[j] = h.p;
            dw[j] = q.rate * h.p + h.ps;
        } else {
            CubicValue h = cubic(q.a0, q.a1, q.a2, -x);
            w[j] = -h.p;
            dw[j] = q.rate * h.p + h.ps;
        }
    }
    Matrix X(2, 2), Y(2, 2);
    X << w[0], -w[1], w[0], w[1];
    Y << dw[0], -dw[1], dw[0], dw[1];
    return {x, lambda, LagrangianFrame(X, Y), side == Side::minus ? OracleFamily::example2_minus : OracleFamily::example2_plus};
}

Complex appendix_wplus_limit(double lambda) {
    if (!(lambda < 1.0)) throw DomainError("far-right limit needs lambda < 1");
    if (lambda == 0.0 || lambda == -1.25 || lambda == 0.75) return {-1.0, 0.0};
    double q = std::sqrt(1.0 - lambda);
    Complex a(1.0, q), b(1.0, -q);
    return -(a * a) / (b * b);
}

namespace {

// Modified Pruefer angle: y = r sin(theta), y' = r cos(theta).
double pruefer_rhs(const PotentialSpec& pot, double lambda, double x, double th) {
    double q = pot(x)(0, 0) - lambda;
    double sn = std::sin(th), cs = std::cos(th);
    return cs * cs - q * sn * sn - pot.s() * sn * cs;
}

double rk4(const PotentialSpec& pot, double lambda, double x, double th, double h) {
    double k1 = pruefer_rhs(pot, lambda, x, th);
    double k2 = pruefer_rhs(pot, lambda, x + 0.5 * h, th + 0.5 * h * k1);
    double k3 = pruefer_rhs(pot, lambda, x + 0.5 * h, th + 0.5 * h * k2);
    double k4 = pruefer_rhs(pot, lambda, x + h, th + h * k3);
    return th + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
}

double advance(const PotentialSpec& pot, double lambda, double x0, double th, double x1, int pieces) {
    double h = (x1 - x0) / pieces;
    for (int k = 0; k < pieces; ++k) th = rk4(pot, lambda, x0 + k * h, th, h);
    return th;
}

} // namespace

int sturm_zero_count(const PotentialSpec& pot, double lambda, const EvolutionOptions& opts) {
    if (pot.n() != 1) throw ValidationError("sturm_zero_count is scalar only");
    require_below_essential(pot, lambda, opts.ess_offset);
    double L = resolve_half_width(pot, opts);
    double vmax = 0.0;
    for (int k = 0; k <= 2000; ++k) vmax = std::max(vmax, std::abs(pot(-L + L * k / 1000.0)(0, 0) - lambda));
    double h = std::min(0.01, 0.2 / std::sqrt(1.0 + vmax + pot.s() * pot.s()));
    long steps = std::lround(std::ceil(2.0 * L / h));
    h = 2.0 * L / steps;

    const SymmetricEndstate& e = pot.minus();
    double mu = 0.5 * (pot.s() + std::sqrt(pot.s() * pot.s() + 4.0 * (e.nu(0) - lambda)));
    double th = std::atan2(1.0, mu);
    int zeros = 0;
    for (long k = 0; k < steps; ++k) {
        double x = -L + k * h;
        double next = rk4(pot, lambda, x, th, h);
        long before = static_cast<long>(std::floor(th / kPi)), after = static_cast<long>(std::floor(next / kPi));
        if (after != before) {
            // confirm by bisection on the step: theta hits a multiple of pi inside
            double lo = x, hi = x + h, tlo = th, target = kPi * static_cast<double>(std::max(before, after));
            while (hi - lo > 1e-10) {
                double mid = 0.5 * (lo + hi);
                double tm = advance(pot, lambda, lo, tlo, mid, 4);
                if ((tm - target) * (tlo - target) <= 0) {
                    hi = mid;
                } else {
                    lo = mid;
                    tlo = tm;
                }
            }
            zeros += static_cast<int>(after - before);
        }
        th = next;
    }
    double r = std::remainder(th, kPi);
    if (std::abs(r) < 1e-8) throw NumericalError("sturm_zero_count: zero at the right endpoint is ambiguous");
    return zeros;
}

} // namespace maslov
