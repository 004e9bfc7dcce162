#include "maslov/maslov.hpp"

#include <cmath>
#include <sstream>

namespace maslov {

void UnitaryPath::push(double param, const CMatrix& m) {
    params.push_back(param);
    w.push_back(m);
    angles.push_back(unitary_angles(m));
}

void UnitaryPath::append(const UnitaryPath& other) {
    std::size_t first = params.empty() ? 0 : 1;
    for (std::size_t k = first; k < other.size(); ++k) {
        params.push_back(other.params[k]);
        w.push_back(other.w[k]);
        angles.push_back(other.angles[k]);
    }
}

UnitaryPath UnitaryPath::slice(std::size_t first, std::size_t last) const {
    UnitaryPath p;
    for (std::size_t k = first; k <= last && k < size(); ++k) {
        p.params.push_back(params[k]);
        p.w.push_back(w[k]);
        p.angles.push_back(angles[k]);
    }
    return p;
}

UnitaryPath UnitaryPath::reversed() const {
    UnitaryPath p;
    for (std::size_t k = size(); k-- > 0;) {
        p.params.push_back(params[k]);
        p.w.push_back(w[k]);
        p.angles.push_back(angles[k]);
    }
    return p;
}

std::vector<double> match_angles(const std::vector<double>& a, const std::vector<double>& b, int* shift) {
    const std::size_t n = a.size();
    if (b.size() != n) throw ValidationError("match_angles: size mismatch");
    std::vector<double> best, d(n);
    double best_cost = 1e300;
    int best_k = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double cost = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = wrap_angle(b[(i + k) % n] - a[i]);
            cost = std::max(cost, std::abs(d[i]));
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = d;
            best_k = static_cast<int>(k);
        }
    }
    if (shift) *shift = best_k;
    return best;
}

namespace {

double snap(double psi, double tol) { return std::abs(psi) <= tol ? 0.0 : psi; }

struct StepEvent {
    double psi0, psi1;
    int contribution;
};

std::vector<StepEvent> step_events(const std::vector<double>& a, const std::vector<double>& b, double tol) {
    std::vector<double> d = match_angles(a, b);
    std::vector<StepEvent> ev;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double raw = wrap_angle(a[i] - kPi);
        double p0 = snap(raw, tol), p1 = snap(raw + d[i], tol);
        int c = (p0 < 0 && p1 >= 0) ? 1 : (p1 < 0 && p0 >= 0) ? -1 : 0;
        ev.push_back({p0, p1, c});
    }
    return ev;
}

} // namespace

std::vector<int> step_contributions(const std::vector<double>& a, const std::vector<double>& b, double angle_tol) {
    std::vector<int> c;
    for (const StepEvent& e : step_events(a, b, angle_tol)) c.push_back(e.contribution);
    return c;
}

int step_flow(const std::vector<double>& a, const std::vector<double>& b, double angle_tol) {
    int f = 0;
    for (const StepEvent& e : step_events(a, b, angle_tol)) f += e.contribution;
    return f;
}

FlowResult spectral_flow(const UnitaryPath& path, double angle_tol) {
    FlowResult out;
    if (path.size() < 2) return out;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        std::vector<StepEvent> ev = step_events(path.angles[k], path.angles[k + 1], angle_tol);
        CrossingRecord ccw{0, 0, 1, 0}, cw{0, 0, -1, 0}, touch_cw{0, 0, -1, 0}, touch_ccw{0, 0, 1, 0};
        double p0 = path.params[k], p1 = path.params[k + 1];
        for (const StepEvent& e : ev) {
            double frac = e.psi1 != e.psi0 ? -e.psi0 / (e.psi1 - e.psi0) : 0.0;
            double at = p0 + (p1 - p0) * std::clamp(frac, 0.0, 1.0);
            if (e.contribution > 0) {
                ccw.param = at, ++ccw.multiplicity, ++ccw.contribution;
            } else if (e.contribution < 0) {
                cw.param = at, ++cw.multiplicity, --cw.contribution;
            } else if (e.psi1 == 0 && e.psi0 > 0) {
                touch_cw.param = p1, ++touch_cw.multiplicity; // clockwise arrival
            } else if (e.psi0 == 0 && e.psi1 > 0) {
                touch_ccw.param = p0, ++touch_ccw.multiplicity; // counterclockwise departure
            }
            out.flow += e.contribution;
        }
        for (const CrossingRecord* r : {&ccw, &cw, &touch_cw, &touch_ccw})
            if (r->multiplicity > 0) out.crossings.push_back(*r);
        auto log_end = [&](bool start) {
            for (const StepEvent& e : ev) {
                double at = start ? e.psi0 : e.psi1, other = start ? e.psi1 : e.psi0;
                if (at != 0) continue;
                std::ostringstream os;
                os << (start ? "start" : "end") << " on -1 at " << (start ? p0 : p1) << ": ";
                if (other == 0)
                    os << "resides";
                else if (start)
                    os << (other > 0 ? "departs counterclockwise (0)" : "departs clockwise (-1)");
                else
                    os << (other < 0 ? "arrives counterclockwise (+1)" : "arrives clockwise (0)");
                out.endpoint_log.push_back(os.str());
            }
        };
        if (k == 0) log_end(true);
        if (k + 2 == path.size()) log_end(false);
    }
    return out;
}

} // namespace maslov
