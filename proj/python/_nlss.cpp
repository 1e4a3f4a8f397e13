#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nlss/cli.hpp"
#include "nlss/ground_state.hpp"
#include "nlss/io.hpp"

namespace py = pybind11;
using namespace nlss;

namespace {

SystemSpec parse(const std::string& s) {
    Json j;
    try {
        j = Json::parse(s);
    } catch (const Json::parse_error& e) {
        throw ValidationError(e.what());
    }
    return system_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_nlss, m) {
    m.doc() = "bindings for the nlss core library";
    static py::exception<ConvergenceError> conv(m, "ConvergenceError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const ValidationError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ConvergenceError& e) {
            py::set_error(conv, e.what());
        }
    });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, "run the command line front end; returns (exit code, stdout, stderr)");

    m.def("g_min", [](const std::string& system) { return g_minimum(parse(system).nonlinearity()); },
          py::arg("system_json"));

    m.def("eval_g", [](const std::string& system, cplx z1, cplx z2) {
        return eval_g(parse(system).nonlinearity(), CPair{z1, z2});
    }, py::arg("system_json"), py::arg("z1"), py::arg("z2"));

    m.def("lambdas", [](const std::string& system) {
        const auto s = parse(system);
        if (!s.lambdas) throw ValidationError("system has no cubic coefficient vector");
        return *s.lambdas;
    }, py::arg("system_json"));

    m.def("transform_lambdas", [](const Lambdas& l, const Mat2& M) { return transform_lambdas(l, M); },
          py::arg("lambdas"), py::arg("M"));

    m.def("lambdas_to_cv", [](const Lambdas& l) {
        const auto mv = lambdas_to_cv(l);
        return py::make_tuple(mv.C, mv.vvec);
    }, py::arg("lambdas"));

    m.def("cv_to_lambdas", [](const std::array<std::array<double, 3>, 3>& C, const std::array<double, 3>& v) {
        MatrixVectorForm mv;
        mv.C = C;
        mv.vvec = v;
        return cv_to_lambdas<double>(mv);
    }, py::arg("C"), py::arg("vvec"));

    m.def("profile_norms", [](int d, double p) {
        const auto q = solve_Q(d, p);
        py::dict out;
        out["Q0"] = q.Q0;
        out["l2sq"] = q.l2sq;
        out["grad_sq"] = q.grad_sq;
        out["lp"] = q.lp;
        out["elliptic_residual"] = q.elliptic_residual();
        return out;
    }, py::arg("d"), py::arg("p") = 4.0);
}
