#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minklab/field.hpp"
#include "minklab/geodesic.hpp"
#include "minklab/metric.hpp"
#include "minklab/optimality.hpp"
#include "minklab/resolvent.hpp"

namespace py = pybind11;
using namespace minklab;

PYBIND11_MODULE(_minklab, m) {
    m.doc() = "Geodesic flow and Klein-Gordon resolvent laboratory";

    py::class_<MetricSpec>(m, "MetricSpec")
        .def_readonly("n", &MetricSpec::n)
        .def_readonly("mu", &MetricSpec::mu)
        .def_readonly("eps", &MetricSpec::eps)
        .def_readonly("shape", &MetricSpec::shape)
        .def("dim", &MetricSpec::dim)
        .def("dual_metric", &MetricSpec::dual_metric);
    m.def("minkowski", &minkowski, py::arg("n"));
    m.def("perturbed_family", &perturbed_family, py::arg("n"), py::arg("mu"),
          py::arg("eps_pert"), py::arg("shape"));
    m.def("hamiltonian", &hamiltonian);
    m.def("c_mu_constant", &c_mu_constant);

    py::class_<PhaseState>(m, "PhaseState")
        .def(py::init([](Vec x, Vec xi) {
            return PhaseState{std::move(x), std::move(xi)};
        }))
        .def_readwrite("x", &PhaseState::x)
        .def_readwrite("xi", &PhaseState::xi);

    py::enum_<TerminalKind>(m, "TerminalKind")
        .value("Escaped", TerminalKind::Escaped)
        .value("ReachedMaxTime", TerminalKind::ReachedMaxTime)
        .value("StepFailure", TerminalKind::StepFailure);

    py::class_<EscapeCertificate>(m, "EscapeCertificate")
        .def_readonly("t_star", &EscapeCertificate::t_star)
        .def_readonly("radius", &EscapeCertificate::radius)
        .def_readonly("radial_derivative", &EscapeCertificate::radial_derivative)
        .def_readonly("M_local", &EscapeCertificate::M_local);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("p_values", &Trajectory::p_values)
        .def_readonly("terminal", &Trajectory::terminal)
        .def_readonly("certificate", &Trajectory::certificate)
        .def("positions", [](const Trajectory& tr) {
            std::vector<Vec> out;
            out.reserve(tr.states.size());
            for (const auto& s : tr.states) out.push_back(s.x);
            return out;
        });

    m.def("integrate_hamilton", &integrate_hamilton, py::arg("metric"), py::arg("s0"),
          py::arg("t_end"), py::arg("tol"), py::arg("escape_radius") = 0.0);
    m.def("null_lift", &null_lift);
    m.def("hp2_radius_sq", &hp2_radius_sq);
    m.def("escape_function_check",
          [](const MetricSpec& mm, double r0, int n, std::uint64_t seed) {
              return escape_function_check(mm, r0, n, seed).values;
          },
          py::arg("metric"), py::arg("R0"), py::arg("n_samples"), py::arg("seed") = 7);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](int n, double L, int N_y, double T0, double T1, int N_t) {
                 GridSpec g{n, L, N_y, T0, T1, N_t};
                 g.validate();
                 return g;
             }),
             py::arg("n") = 1, py::arg("L") = 16.0, py::arg("N_y") = 256,
             py::arg("T0") = -8.0, py::arg("T1") = 8.0, py::arg("N_t") = 1024)
        .def_readonly("n", &GridSpec::n)
        .def_readonly("L", &GridSpec::L)
        .def_readonly("N_y", &GridSpec::N_y)
        .def_readonly("T0", &GridSpec::T0)
        .def_readonly("T1", &GridSpec::T1)
        .def_readonly("N_t", &GridSpec::N_t);

    m.def("symbol_a", [](double eta_sq) { return symbol_at(eta_sq).a; });

    py::class_<SpaceTimeField>(m, "SpaceTimeField")
        .def(py::init([](const GridSpec& g, py::array_t<cplx> arr) {
                 SpaceTimeField f(g);
                 auto buf = arr.request();
                 if (static_cast<std::size_t>(buf.size) != f.values.size())
                     throw std::invalid_argument("array size does not match grid");
                 const cplx* src = static_cast<const cplx*>(buf.ptr);
                 std::copy(src, src + f.values.size(), f.values.begin());
                 return f;
             }),
             py::arg("grid"), py::arg("values"))
        .def_readonly("grid", &SpaceTimeField::grid)
        .def("array", [](const SpaceTimeField& f) {
            return py::array_t<cplx>(
                {static_cast<py::ssize_t>(f.grid.N_t),
                 static_cast<py::ssize_t>(f.grid.ny_total())},
                f.values.data());
        });

    py::class_<ResolventPlan>(m, "ResolventPlan")
        .def(py::init<const GridSpec&, int, bool>(), py::arg("grid"),
             py::arg("quad_order") = 4, py::arg("enforce_support") = true);
    m.def("apply_resolvent", &apply_resolvent);
    m.def("apply_resolvent_dt", &apply_resolvent_dt);
    m.def("residual_check", &residual_check);
    m.def("smoothing_probe_locsmoy", &smoothing_probe_locsmoy, py::arg("plan"),
          py::arg("f"), py::arg("eps") = 0.1);
    m.def("random_test_field", &random_test_field);
    m.def("resonant_packet", &resonant_packet, py::arg("jap"), py::arg("n_t") = 0);
    m.def("l2_norm", &l2_norm);

    py::class_<CounterexampleParams>(m, "CounterexampleParams")
        .def(py::init<>())
        .def_readwrite("n", &CounterexampleParams::n)
        .def_readwrite("eps", &CounterexampleParams::eps)
        .def_readwrite("t_obs", &CounterexampleParams::t_obs);
    m.def("chi_bump", &chi_bump);
    m.def("kernel_bt", &kernel_bt);
    m.def("divergence_scan",
          [](const CounterexampleParams& p, const std::vector<double>& lams) {
              const DivergenceScan s = divergence_scan(p, lams);
              py::dict out;
              out["alpha"] = s.alpha;
              out["alpha_drift"] = s.alpha_drift;
              std::vector<std::tuple<double, double, double, double>> rows;
              for (const auto& r : s.rows)
                  rows.emplace_back(r.Lambda, r.D_half_eps, r.D_half, r.D_half_2eps);
              out["rows"] = rows;
              return out;
          });
}
