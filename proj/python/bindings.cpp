#include "maslov/maslov.hpp"
#include "maslov/oracles.hpp"
#include "maslov/potentials.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace maslov;

namespace {

py::list crossings(const std::vector<CrossingRecord>& v) {
    py::list out;
    for (const CrossingRecord& c : v) {
        py::dict d;
        d["param"] = c.param;
        d["multiplicity"] = c.multiplicity;
        d["direction"] = c.direction;
        d["contribution"] = c.contribution;
        out.append(d);
    }
    return out;
}

py::dict report(const MaslovBoxReport& r) {
    py::dict d;
    d["morse_index"] = r.morse_index;
    d["principal_maslov"] = r.principal_maslov;
    d["kappa"] = r.kappa;
    d["kernel_dimension"] = r.kernel_dimension;
    d["flow_gamma0"] = r.flow_gamma0;
    d["flow_gammaplus"] = r.flow_gammaplus;
    d["flow_gammainf"] = r.flow_gammainf;
    d["flow_gammaminus"] = r.flow_gammaminus;
    d["homotopy_sum"] = r.homotopy_sum;
    d["accepted"] = r.accepted;
    d["reason"] = r.reason;
    d["x_infty"] = r.x_infty;
    d["lambda_infty"] = r.lambda_infty;
    d["half_width"] = r.half_width;
    d["crossings_gammaplus"] = crossings(r.crossings_gammaplus);
    d["crossings_principal"] = crossings(r.crossings_principal);
    return d;
}

BoxOptions box_options(const py::object& x_infty, const py::object& lambda_infty) {
    BoxOptions o;
    if (!x_infty.is_none()) o.x_infty = x_infty.cast<double>();
    if (!lambda_infty.is_none()) o.lambda_infty = lambda_infty.cast<double>();
    return o;
}

} // namespace

PYBIND11_MODULE(_maslov, m) {
    m.doc() = "Maslov index and Morse index of Schrodinger-type operators on the line";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<PotentialSpec>(m, "Potential")
        .def_property_readonly("n", &PotentialSpec::n)
        .def_property_readonly("s", &PotentialSpec::s)
        .def_property_readonly("name", &PotentialSpec::name)
        .def_property_readonly("nu_min", &PotentialSpec::nu_min)
        .def_property_readonly("tail_rate", &PotentialSpec::tail_rate)
        .def("__call__", [](const PotentialSpec& p, double x) { return Matrix(p(x)); }, py::arg("x"));

    m.def("ac_pulse", &ac_pulse, py::arg("s") = 0.0);
    m.def("ac_system", &ac_system, py::arg("c") = -1.0, py::arg("s") = 0.0);
    m.def("constant", py::overload_cast<const Matrix&, double>(&constant_potential), py::arg("v"), py::arg("s") = 0.0);
    m.def("random_scalar_wells", &random_scalar_wells, py::arg("seed"), py::arg("s") = 0.0);
    m.def("shifted", &shifted_potential, py::arg("potential"), py::arg("shift"));
    m.def(
        "tabulated",
        [](const Eigen::VectorXd& x, const std::vector<Matrix>& v, double s) {
            if (static_cast<std::size_t>(x.size()) != v.size()) throw ValidationError("x and v lengths differ");
            std::vector<TableSample> t;
            for (Eigen::Index k = 0; k < x.size(); ++k) t.push_back({x(k), v[k]});
            return load_tabulated_potential(t, s);
        },
        py::arg("x"), py::arg("v"), py::arg("s") = 0.0);
    m.def("load_table", &load_tabulated_csv, py::arg("path"), py::arg("s") = 0.0);

    m.def(
        "morse_index",
        [](const PotentialSpec& p, py::object x_infty, py::object lambda_infty) {
            MaslovBoxReport r;
            {
                py::gil_scoped_release release;
                r = morse_index(p, box_options(x_infty, lambda_infty));
            }
            return report(r);
        },
        py::arg("potential"), py::arg("x_infty") = py::none(), py::arg("lambda_infty") = py::none());

    m.def(
        "crossing_scan",
        [](const PotentialSpec& p, const std::vector<double>& xs, const std::vector<double>& lambdas,
           py::object x_infty) {
            ScanOptions o;
            if (!x_infty.is_none()) o.box.x_infty = x_infty.cast<double>();
            std::vector<ScanRow> rows;
            {
                py::gil_scoped_release release;
                rows = crossing_scan(p, xs, lambdas, o);
            }
            const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
            Eigen::VectorXd x(m), lam(m), ang(m);
            Eigen::VectorXi idx(m), cross(m), dir(m);
            for (Eigen::Index k = 0; k < m; ++k) {
                x(k) = rows[k].x;
                lam(k) = rows[k].lambda;
                ang(k) = rows[k].angle;
                idx(k) = rows[k].angle_index;
                cross(k) = rows[k].crossing;
                dir(k) = rows[k].direction;
            }
            py::dict d;
            d["x"] = x;
            d["lambda"] = lam;
            d["angle_index"] = idx;
            d["angle"] = ang;
            d["crossing"] = cross;
            d["direction"] = dir;
            return d;
        },
        py::arg("potential"), py::arg("x"), py::arg("lambdas"), py::arg("x_infty") = py::none());

    m.def("sturm_zero_count", [](const PotentialSpec& p, double lambda) { return sturm_zero_count(p, lambda); },
          py::arg("potential"), py::arg("lambda_"));
    m.def("appendix_wplus_limit", &appendix_wplus_limit, py::arg("lambda_"));

    m.def(
        "wtilde",
        [](const Matrix& a, const Matrix& b) {
            return CMatrix(wtilde(LagrangianFrame::from_stacked(a), LagrangianFrame::from_stacked(b)).w);
        },
        py::arg("frame_a"), py::arg("frame_b"));
    m.def("unitary_angles", &unitary_angles, py::arg("w"));
}
