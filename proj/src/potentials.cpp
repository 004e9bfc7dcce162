#include "maslov/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

namespace maslov {

namespace {

double sech2(double z) {
    double c = std::cosh(z);
    return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

} // namespace

PotentialSpec constant_potential(const Matrix& v, double s) {
    PotentialSpec p("constant", s, [v](double) { return v; }, v, v, 1.0);
    if (v.size() == 1) p.params["v"] = v(0, 0);
    return p;
}

PotentialSpec constant_potential(double v, double s) { return constant_potential(scalar(v), s); }

PotentialSpec ac_pulse(double s) {
    PotentialSpec p("ac_pulse", s, [](double x) { return scalar(1.0 - 3.0 * sech2(0.5 * x)); }, scalar(1.0),
                    scalar(1.0), 1.0);
    return p;
}

PotentialSpec ac_system(double c, double s) {
    if (!std::isfinite(c)) throw ValidationError("ac_system: c must be finite");
    Matrix end(2, 2);
    end << 4.0 + c, -c, -c, 4.0 + c;
    auto f = [c](double x) {
        Matrix v(2, 2);
        double d = 4.0 - 12.0 * sech2(x) + c;
        v << d, -c, -c, d;
        return v;
    };
    PotentialSpec p("ac_system", s, f, end, end, 2.0);
    p.params["c"] = c;
    return p;
}

PotentialSpec sech_wells(double background, std::vector<SechWell> wells, double s) {
    double wmax = 0.0;
    for (const SechWell& w : wells) {
        if (!(w.width > 0)) throw ValidationError("sech_wells: widths must be positive");
        wmax = std::max(wmax, w.width);
    }
    auto f = [background, wells](double x) {
        double v = background;
        for (const SechWell& w : wells) v -= w.depth * sech2((x - w.center) / w.width);
        return scalar(v);
    };
    PotentialSpec p("sech_wells", s, f, scalar(background), scalar(background), wells.empty() ? 1.0 : 2.0 / wmax);
    p.params["background"] = background;
    for (std::size_t k = 0; k < wells.size(); ++k) {
        std::string i = std::to_string(k + 1);
        p.params["depth" + i] = wells[k].depth;
        p.params["center" + i] = wells[k].center;
        p.params["width" + i] = wells[k].width;
    }
    return p;
}

PotentialSpec random_scalar_wells(std::uint64_t seed, double s) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> bg(0.5, 2.0), depth(0.5, 4.0), center(-2.5, 2.5), width(0.7, 1.5);
    std::uniform_int_distribution<int> count(1, 3);
    double b = bg(rng);
    int k = count(rng);
    std::vector<SechWell> wells;
    for (int i = 0; i < k; ++i) {
        double d = depth(rng), c = center(rng), w = width(rng);
        wells.push_back({d, c, w});
    }
    PotentialSpec p = sech_wells(b, wells, s);
    p.params["seed"] = static_cast<double>(seed);
    return p;
}

PotentialSpec random_symmetric_well(std::uint64_t seed, double s) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> nu(0.5, 3.0), ang(0.0, kPi), off(-1.0, 1.0), diag(1.0, 4.0),
        width(0.7, 1.5);
    double t = ang(rng);
    Matrix q(2, 2);
    q << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    Vector d(2);
    d << nu(rng), nu(rng);
    Matrix v0 = q * d.asDiagonal() * q.transpose();
    v0 = (0.5 * (v0 + v0.transpose())).eval();
    Matrix b(2, 2);
    double o = off(rng);
    b << diag(rng), o, o, diag(rng);
    double w = width(rng);
    auto f = [v0, b, w](double x) { return Matrix(v0 - sech2(x / w) * b); };
    PotentialSpec p("random_symmetric_well", s, f, v0, v0, 2.0 / w);
    p.params["seed"] = static_cast<double>(seed);
    return p;
}

PotentialSpec shifted_potential(const PotentialSpec& pot, double shift) {
    const int n = pot.n();
    Matrix id = Matrix::Identity(n, n);
    auto f = [pot, shift, id](double x) { return Matrix(pot(x) + shift * id); };
    PotentialSpec p(pot.name(), pot.s(), f, pot.minus().matrix + shift * id, pot.plus().matrix + shift * id,
                    pot.tail_rate(), pot.tail_heuristic());
    p.params = pot.params;
    p.params["shift"] = shift;
    return p;
}

namespace {

// Fritsch-Carlson slopes with the three-point end formula.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t m = x.size();
    std::vector<double> h(m - 1), del(m - 1), d(m, 0.0);
    for (std::size_t k = 0; k + 1 < m; ++k) {
        h[k] = x[k + 1] - x[k];
        del[k] = (y[k + 1] - y[k]) / h[k];
    }
    for (std::size_t k = 1; k + 1 < m; ++k) {
        if (del[k - 1] * del[k] > 0) {
            double w1 = 2 * h[k] + h[k - 1], w2 = h[k] + 2 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
    }
    auto end = [](double h0, double h1, double m0, double m1) {
        double e = ((2 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if (e * m0 <= 0) return 0.0;
        if (m0 * m1 <= 0 && std::abs(e) > std::abs(3 * m0)) return 3 * m0;
        return e;
    };
    d[0] = end(h[0], h[1], del[0], del[1]);
    d[m - 1] = end(h[m - 2], h[m - 3], del[m - 2], del[m - 3]);
    return d;
}

struct Table {
    std::vector<double> x;
    std::vector<std::vector<double>> y;  // per upper entry
    std::vector<std::vector<double>> dy;
    int n;
};

Matrix table_eval(const Table& t, double x) {
    const std::size_t m = t.x.size();
    Matrix v(t.n, t.n);
    if (x <= t.x.front() || x >= t.x.back()) {
        std::size_t k = x <= t.x.front() ? 0 : m - 1;
        int e = 0;
        for (int i = 0; i < t.n; ++i)
            for (int j = i; j < t.n; ++j, ++e) v(i, j) = v(j, i) = t.y[e][k];
        return v;
    }
    std::size_t k = std::upper_bound(t.x.begin(), t.x.end(), x) - t.x.begin() - 1;
    double h = t.x[k + 1] - t.x[k];
    double u = (x - t.x[k]) / h;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    int e = 0;
    for (int i = 0; i < t.n; ++i)
        for (int j = i; j < t.n; ++j, ++e)
            v(i, j) = v(j, i) = h00 * t.y[e][k] + h * h10 * t.dy[e][k] + h01 * t.y[e][k + 1] + h * h11 * t.dy[e][k + 1];
    return v;
}

// Least-squares decay rate of |V - V_end| over the outer quarter of the table.
double fit_tail(const std::vector<TableSample>& s, bool right) {
    const Matrix& end = right ? s.back().v : s.front().v;
    double span = s.back().x - s.front().x;
    double floor = 1e-12 * (1.0 + end.norm());
    std::vector<double> xs, ls;
    for (const TableSample& t : s) {
        bool outer = right ? t.x >= s.back().x - 0.25 * span : t.x <= s.front().x + 0.25 * span;
        double e = (t.v - end).norm();
        if (outer && e > floor) {
            xs.push_back(t.x);
            ls.push_back(std::log(e));
        }
    }
    if (xs.size() < 3) return 0.0;
    double mx = 0, ml = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) mx += xs[k], ml += ls[k];
    mx /= xs.size();
    ml /= xs.size();
    double sxx = 0, sxl = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) sxx += (xs[k] - mx) * (xs[k] - mx), sxl += (xs[k] - mx) * (ls[k] - ml);
    double slope = sxx > 0 ? sxl / sxx : 0.0;
    return right ? -slope : slope;
}

} // namespace

PotentialSpec load_tabulated_potential(const std::vector<TableSample>& samples, double s) {
    if (samples.size() < 4) throw ValidationError("tabulated potential needs at least 4 samples");
    const Eigen::Index n = samples.front().v.rows();
    if (n == 0) throw ValidationError("tabulated potential has empty matrices");
    auto t = std::make_shared<Table>();
    t->n = static_cast<int>(n);
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const TableSample& smp = samples[k];
        if (smp.v.rows() != n || smp.v.cols() != n) throw ValidationError("tabulated sample has inconsistent shape");
        if (!std::isfinite(smp.x) || !smp.v.allFinite()) throw ValidationError("tabulated sample is not finite");
        if (k > 0 && !(smp.x > samples[k - 1].x)) throw ValidationError("tabulated x grid must be strictly increasing");
        if ((smp.v - smp.v.transpose()).norm() > 1e-10 * (1.0 + smp.v.norm()))
            throw ValidationError("tabulated sample at x = " + std::to_string(smp.x) + " is not symmetric");
        t->x.push_back(smp.x);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            std::vector<double> y;
            for (const TableSample& smp : samples) y.push_back(0.5 * (smp.v(i, j) + smp.v(j, i)));
            t->dy.push_back(pchip_slopes(t->x, y));
            t->y.push_back(std::move(y));
        }
    }
    double rate = std::min(fit_tail(samples, false), fit_tail(samples, true));
    if (!(rate > 0)) rate = std::max(fit_tail(samples, false), fit_tail(samples, true));
    if (!(rate > 0)) rate = 1.0;
    rate = std::clamp(rate, 0.05, 50.0);
    Matrix vm = table_eval(*t, t->x.front()), vp = table_eval(*t, t->x.back());
    PotentialSpec p("tabulated", s, [t](double x) { return table_eval(*t, x); }, vm, vp, rate, true);
    p.params["samples"] = static_cast<double>(samples.size());
    return p;
}

std::vector<TableSample> read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open table " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("table " + path + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> head;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) head.push_back(tok);
    }
    if (head.size() < 2 || head[0] != "x") throw ValidationError("table header must start with x");
    std::vector<std::pair<int, int>> pos;
    int n = 0;
    for (std::size_t k = 1; k < head.size(); ++k) {
        const std::string& h = head[k];
        if (h.size() != 3 || h[0] != 'v' || !std::isdigit(static_cast<unsigned char>(h[1])) ||
            !std::isdigit(static_cast<unsigned char>(h[2])) || h[1] == '0' || h[2] == '0')
            throw ValidationError("bad table column name '" + h + "'");
        int i = h[1] - '1', j = h[2] - '1';
        pos.emplace_back(i, j);
        n = std::max({n, i + 1, j + 1});
    }
    const std::size_t m = pos.size();
    bool full = m == static_cast<std::size_t>(n * n);
    bool upper = m == static_cast<std::size_t>(n * (n + 1) / 2);
    if (!full && !upper) throw ValidationError("table columns do not describe an n x n matrix");
    for (auto [i, j] : pos)
        if (upper && !full && j < i) throw ValidationError("upper-triangle table has a lower entry");
    std::vector<TableSample> out;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> vals;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw ValidationError("bad number on line " + std::to_string(lineno) + " of " + path);
            }
        }
        if (vals.size() != m + 1) throw ValidationError("wrong field count on line " + std::to_string(lineno));
        Matrix v = Matrix::Zero(n, n);
        Matrix seen = Matrix::Zero(n, n);
        for (std::size_t k = 0; k < m; ++k) {
            auto [i, j] = pos[k];
            v(i, j) = vals[k + 1];
            seen(i, j) = 1;
            if (!full) {
                v(j, i) = vals[k + 1];
                seen(j, i) = 1;
            }
        }
        if (seen.minCoeff() < 1) throw ValidationError("table columns leave matrix entries unset");
        out.push_back({vals[0], v});
    }
    return out;
}

PotentialSpec load_tabulated_csv(const std::string& path, double s) {
    return load_tabulated_potential(read_table_csv(path), s);
}

std::vector<TableSample> sample_potential(const PotentialSpec& pot, double x0, double x1, double step) {
    if (!(x1 > x0) || !(step > 0)) throw ValidationError("sample_potential: need x1 > x0 and step > 0");
    long m = std::lround((x1 - x0) / step);
    std::vector<TableSample> out;
    for (long k = 0; k <= m; ++k) {
        double x = x0 + (x1 - x0) * static_cast<double>(k) / static_cast<double>(m);
        out.push_back({x, pot(x)});
    }
    return out;
}

void write_table_csv(const std::vector<TableSample>& samples, const std::string& path) {
    if (samples.empty()) throw ValidationError("nothing to write");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    const Eigen::Index n = samples.front().v.rows();
    out << "x";
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out << ",v" << i + 1 << j + 1;
    out << "\n";
    char buf[40];
    for (const TableSample& s : samples) {
        std::snprintf(buf, sizeof buf, "%.17g", s.x);
        out << buf;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", s.v(i, j));
                out << "," << buf;
            }
        out << "\n";
    }
}

} // namespace maslov
