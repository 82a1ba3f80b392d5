#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "oho/fock.hpp"
#include "oho/lax.hpp"
#include "oho/operad.hpp"
#include "oho/oscillator.hpp"
#include "oho/qjacobi.hpp"

namespace py = pybind11;
using namespace oho;

namespace {

BianchiSpec spec_from(const std::string& family, double a) { return BianchiSpec(parse_family(family), a); }

py::dict row_dict(const ScalingRow& r)
{
  py::dict d;
  d["hbar"] = r.hbar;
  d["N"] = r.N;
  d["family"] = r.family;
  d["a"] = r.a;
  d["J_norm"] = r.J_norm;
  d["J_resid"] = r.J_resid;
  d["slope3"] = r.slope3;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Operadic Lax pairs of the harmonic oscillator and their quantum Jacobi operators";

  py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);

  py::class_<MultiOp>(m, "MultiOp")
      .def(py::init<int, int>(), py::arg("degree"), py::arg("dim"))
      .def(py::init<int, int, std::vector<double>>(), py::arg("degree"), py::arg("dim"), py::arg("coeffs"))
      .def_static("identity", &MultiOp::identity)
      .def_property_readonly("degree", &MultiOp::degree)
      .def_property_readonly("dim", &MultiOp::dim)
      .def("coeffs", [](const MultiOp& f) { return std::vector<double>(f.coeffs().begin(), f.coeffs().end()); })
      .def("__getitem__", [](const MultiOp& f, const std::vector<int>& idx) { return f(idx); })
      .def("__setitem__", [](MultiOp& f, const std::vector<int>& idx, double v) { f(idx) = v; })
      .def("max_abs", &MultiOp::max_abs)
      .def("dump", &MultiOp::dump)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(double() * py::self)
      .def(py::self == py::self);

  m.def("partial_compose", &partial_compose, py::arg("f"), py::arg("g"), py::arg("i"));
  m.def("total_compose", &total_compose);
  m.def("gerstenhaber", &gerstenhaber);
  m.def("apply", [](const MultiOp& f, const std::vector<Eigen::VectorXd>& args) {
    return apply(f, std::span<const Eigen::VectorXd>(args));
  });

  py::class_<OscParams>(m, "OscParams")
      .def(py::init<double, double>(), py::arg("omega"), py::arg("p0"))
      .def_static("from_energy", &OscParams::from_energy, py::arg("omega"), py::arg("energy"))
      .def_property_readonly("omega", &OscParams::omega)
      .def_property_readonly("p0", &OscParams::p0)
      .def_property_readonly("energy", &OscParams::energy)
      .def_property_readonly("period", &OscParams::period);

  m.def("hamiltonian", py::overload_cast<double, double, double>(&hamiltonian), py::arg("q"), py::arg("p"),
        py::arg("omega"));
  m.def("analytic_state", [](double t, const OscParams& p) {
    const OscState s = analytic_state(t, p);
    return py::make_tuple(s.q, s.p);
  });
  m.def("quasi_state", [](double t, const OscParams& p) {
    const QuasiState s = quasi_state(t, p);
    return py::make_tuple(s.Q, s.P);
  });
  m.def("quasi_from_phase_point", [](double q, double p, const OscParams& params) {
    const QuasiState s = quasi_from_phase_point(q, p, params);
    return py::make_tuple(s.Q, s.P);
  });

  m.def("build_L", &build_L, py::arg("q"), py::arg("p"), py::arg("params"));
  m.def("build_M", &build_M, py::arg("params"));
  m.def("matrix_lax_residual", py::overload_cast<double, const OscParams&>(&matrix_lax_residual));
  m.def("lax_spectrum", &lax_spectrum);

  m.def("initial_table", [](const std::string& family, double a) { return spec_from(family, a).initial_table().columns(); },
        py::arg("family"), py::arg("a") = 1.0);
  m.def(
      "solve_constants",
      [](const std::string& family, double a, double p0) {
        return solve_constants(spec_from(family, a).initial_table(), p0).c;
      },
      py::arg("family"), py::arg("a"), py::arg("p0"));
  m.def(
      "evolve_algebra",
      [](const std::string& family, double a, double t, const OscParams& p) {
        return evolve_algebra(spec_from(family, a), t, p).columns();
      },
      py::arg("family"), py::arg("a"), py::arg("t"), py::arg("params"));
  m.def(
      "operadic_lax_residual",
      [](const std::string& family, double a, double t, double dt, const OscParams& p) {
        return operadic_lax_residual(spec_from(family, a), t, dt, p);
      },
      py::arg("family"), py::arg("a"), py::arg("t"), py::arg("dt"), py::arg("params"));
  m.def(
      "classical_jacobiator",
      [](const std::string& family, double a, double t, const OscParams& p, const Vec3& x, const Vec3& y,
         const Vec3& z) { return classical_jacobiator(evolve_algebra(spec_from(family, a), t, p), x, y, z); },
      py::arg("family"), py::arg("a"), py::arg("t"), py::arg("params"), py::arg("x"), py::arg("y"), py::arg("z"));

  m.def(
      "quasi_ccr_sweep",
      [](double omega, double energy, const std::vector<double>& hbar) {
        py::list out;
        for (const QuasiCcrRow& r : quasi_ccr_sweep(omega, energy, hbar)) {
          py::dict d;
          d["hbar"] = r.hbar;
          d["N"] = r.N;
          d["sym_resid"] = r.sym_resid;
          d["comm_resid"] = r.comm_resid;
          d["comm_ratio"] = r.comm_ratio;
          out.append(d);
        }
        return out;
      },
      py::arg("omega"), py::arg("energy"), py::arg("hbar"));
  m.def(
      "jacobi_deformation_scaling",
      [](const std::string& family, double a, double omega, double energy, const std::vector<double>& hbar,
         const Vec3& x, const Vec3& y, const Vec3& z) {
        py::list out;
        for (const ScalingRow& r : jacobi_deformation_scaling(spec_from(family, a), omega, energy, hbar, x, y, z))
          out.append(row_dict(r));
        return out;
      },
      py::arg("family"), py::arg("a"), py::arg("omega"), py::arg("energy"), py::arg("hbar"), py::arg("x"),
      py::arg("y"), py::arg("z"));
  m.def(
      "corollary_ratio",
      [](const std::string& family, double a, double omega, double energy, double hbar, const Vec3& x, const Vec3& y,
         const Vec3& z) { return corollary_ratio(spec_from(family, a), omega, energy, hbar, x, y, z); },
      py::arg("family"), py::arg("a"), py::arg("omega"), py::arg("energy"), py::arg("hbar"), py::arg("x"),
      py::arg("y"), py::arg("z"));
  m.def(
      "select_ordering",
      [](const std::string& family, double a, int triples) {
        OrderingSearch s;
        s.triples = triples;
        const OrderingReport r = select_ordering(spec_from(family, a), s);
        py::dict d;
        d["selected"] = std::string(ordering_name(r.selected));
        d["resid_left"] = r.resid_left;
        d["resid_right"] = r.resid_right;
        d["passed"] = r.passed;
        return d;
      },
      py::arg("family"), py::arg("a") = 1.0, py::arg("triples") = 20);
}
