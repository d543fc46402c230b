#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gapkit/asymptotics.hpp"
#include "gapkit/error.hpp"
#include "gapkit/io.hpp"
#include "gapkit/optimizer.hpp"
#include "gapkit/solver.hpp"
#include "gapkit/step.hpp"

namespace py = pybind11;
using namespace gapkit;

namespace {

const CoefficientP& unit_p() {
    static const CoefficientP p = CoefficientP::constant(1.0);
    return p;
}

py::dict eigen_dict(const EigenSolution& e) {
    py::dict d;
    d["index"] = e.index;
    d["lambda"] = e.lambda;
    d["x"] = e.x;
    d["u"] = e.u;
    d["sign_changes"] = e.sign_changes;
    d["sup_norm"] = e.sup_norm;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral gap solvers and optimisers on [0, pi]";

    static py::exception<Error> exc(m, "GapkitError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
            if (e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::Domain) {
                PyErr_SetString(PyExc_ValueError, msg.c_str());
            } else {
                exc(msg.c_str());
            }
        }
    });

    py::enum_<PotentialClass>(m, "PotentialClass")
        .value("NONE", PotentialClass::None)
        .value("SINGLE_WELL", PotentialClass::SingleWell)
        .value("CONVEX", PotentialClass::Convex)
        .value("STEP", PotentialClass::Step);

    py::class_<BoundaryConditions>(m, "BoundaryConditions")
        .def(py::init<>())
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
        .def_static("dirichlet", &BoundaryConditions::dirichlet)
        .def_static("neumann", &BoundaryConditions::neumann)
        .def_readonly("alpha", &BoundaryConditions::alpha)
        .def_readonly("beta", &BoundaryConditions::beta);

    py::class_<Potential>(m, "Potential")
        .def_static("constant", &Potential::constant, py::arg("value"))
        .def_static("affine", &Potential::affine, py::arg("slope"), py::arg("intercept"))
        .def_static(
            "piecewise_constant",
            [](std::vector<double> b, std::vector<double> v) { return Potential::piecewise_constant(b, v); },
            py::arg("breakpoints"), py::arg("values"))
        .def_static(
            "piecewise_linear",
            [](std::vector<double> b, std::vector<double> v) { return Potential::piecewise_linear(b, v); },
            py::arg("breakpoints"), py::arg("knots"))
        .def_static("from_json", [](const std::string& s) { return potential_from_json(nlohmann::json::parse(s)); })
        .def("to_json", [](const Potential& V) { return potential_to_json(V).dump(); })
        .def("__call__", &Potential::evaluate, py::arg("x"))
        .def_property_readonly("breakpoints",
                               [](const Potential& V) {
                                   return std::vector<double>(V.breakpoints().begin(), V.breakpoints().end());
                               })
        .def("classify", [](const Potential& V) { return classify(V).label(); })
        .def("reflect", [](const Potential& V) { return reflect(V); });

    m.def("step_potential",
          [](double M, double x) { return StepPotential(M, x).to_potential(); },
          py::arg("M"), py::arg("x_minus"));

    py::class_<GapResult>(m, "GapResult")
        .def_readonly("lambda1", &GapResult::lambda1)
        .def_readonly("lambda2", &GapResult::lambda2)
        .def_readonly("gamma", &GapResult::gamma)
        .def_readonly("x_minus", &GapResult::x_minus)
        .def_readonly("x_zero", &GapResult::x_zero)
        .def_readonly("x_plus", &GapResult::x_plus)
        .def_readonly("crossing_sign_changes", &GapResult::crossing_sign_changes);

    m.def(
        "gap",
        [](const Potential& V, const BoundaryConditions& bc) {
            py::gil_scoped_release release;
            return gap(unit_p(), V, bc);
        },
        py::arg("V"), py::arg("bc") = BoundaryConditions::dirichlet());

    m.def(
        "solve",
        [](const Potential& V, int k, const BoundaryConditions& bc) {
            std::vector<EigenSolution> sols;
            {
                py::gil_scoped_release release;
                sols = shoot_eigenvalues(unit_p(), V, bc, k);
            }
            py::list out;
            for (const auto& s : sols) out.append(eigen_dict(s));
            return out;
        },
        py::arg("V"), py::arg("k") = 2, py::arg("bc") = BoundaryConditions::dirichlet());

    m.def(
        "dense_oracle",
        [](const Potential& V, int k, int grid_size) {
            py::gil_scoped_release release;
            return dense_oracle_extrapolated(unit_p(), V, BoundaryConditions::dirichlet(), k, grid_size);
        },
        py::arg("V"), py::arg("k") = 2, py::arg("grid_size") = 1024);

    m.def(
        "step_eigenvalues",
        [](double M, double x, int k) {
            std::vector<double> out;
            for (const auto& e : step_eigenvalues(M, x, k)) out.push_back(e.lambda);
            return out;
        },
        py::arg("M"), py::arg("x_minus"), py::arg("k") = 2);

    m.def(
        "minimize_step_family",
        [](double M) {
            MinimizerReport r;
            {
                py::gil_scoped_release release;
                r = minimize_step_family(M);
            }
            py::dict d;
            d["M"] = r.M;
            d["x_minus_star"] = r.x_minus_star;
            d["gamma_star"] = r.gamma_star;
            d["lambda1"] = r.lambda1;
            d["lambda2"] = r.lambda2;
            d["stationarity"] = r.stationarity;
            return d;
        },
        py::arg("M"));

    m.def("solve_theta", []() {
        const ThetaConstant t = solve_theta();
        return py::make_tuple(t.theta, t.limit_gap);
    });
    m.def("limit_gap", []() { return solve_theta().limit_gap; });
    m.def(
        "solve_reduced",
        [](double y1) {
            const ReducedSolution r = solve_reduced(y1);
            py::dict d;
            d["y1"] = r.y1;
            d["r"] = r.r;
            d["s"] = r.has_s ? py::cast(r.s) : py::none();
            d["gap_proxy"] = r.gap_proxy;
            return d;
        },
        py::arg("y1"));
    m.def("x_minus_expansion", &x_minus_expansion, py::arg("M"));
}
