#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hardy/acceptance.hpp"
#include "hardy/cli.hpp"
#include "hardy/divisor.hpp"
#include "hardy/errors.hpp"
#include "hardy/explicit_formula.hpp"
#include "hardy/expsum.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/saddle.hpp"
#include "hardy/zeta.hpp"

namespace py = pybind11;
using namespace hardy;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Shifted moments of Hardy's Z-function";
  m.attr("__version__") = HARDY_VERSION;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_OSError);

  py::enum_<ZMethod>(m, "ZMethod").value("RiemannSiegel", ZMethod::RiemannSiegel).value("Oracle", ZMethod::Oracle);

  py::class_<ChiDecomposition>(m, "ChiDecomposition")
      .def_readonly("modulus", &ChiDecomposition::modulus)
      .def_readonly("argument", &ChiDecomposition::argument)
      .def_readonly("value", &ChiDecomposition::value);

  py::class_<ZEvaluation>(m, "ZEvaluation")
      .def_readonly("t", &ZEvaluation::t)
      .def_readonly("z", &ZEvaluation::z)
      .def_readonly("method", &ZEvaluation::method)
      .def_readonly("est_error", &ZEvaluation::est_error)
      .def_readonly("imag_residue", &ZEvaluation::imag_residue);

  m.def("chi_factor", &chi_factor, py::arg("s"));
  m.def("zeta_half_oracle", &zeta_half_oracle, py::arg("t"), py::arg("digits") = 15);
  m.def("zeta_oracle", &zeta_oracle, py::arg("s"), py::arg("digits") = 15);
  m.def("riemann_siegel_theta", &riemann_siegel_theta, py::arg("t"));
  m.def("hardy_z", &hardy_z, py::arg("t"), py::arg("method") = ZMethod::RiemannSiegel);
  m.def("hardy_z_value", &hardy_z_value, py::arg("t"));

  py::class_<DivisorTable, std::shared_ptr<DivisorTable>>(m, "DivisorTable")
      .def_static("build", [](std::int64_t bound) { return std::make_shared<DivisorTable>(DivisorTable::build(bound)); },
                  py::arg("bound"), py::call_guard<py::gil_scoped_release>())
      .def_static("load", [](const std::string& path) { return std::make_shared<DivisorTable>(DivisorTable::load(path)); })
      .def("save", [](const DivisorTable& t, const std::string& path) { t.save(path); })
      .def_property_readonly("bound", &DivisorTable::bound)
      .def("d", &DivisorTable::d)
      .def("d3", &DivisorTable::d3)
      .def("d3sq_prefix", &DivisorTable::d3sq_prefix)
      .def("factorize", &DivisorTable::factorize);

  m.def("d3_bruteforce", &d3_bruteforce, py::arg("n"));
  m.def("h_shift", [](std::int64_t n, double U, const DivisorTable& t) { return h_shift(n, U, t).value; },
        py::arg("n"), py::arg("U"), py::arg("table"));
  m.def("sum_d3_squared", &sum_d3_squared, py::arg("x"), py::arg("table"));
  m.def("d3_squared_ratio", &d3_squared_ratio, py::arg("x"), py::arg("table"));

  py::class_<SaddlePoint>(m, "SaddlePoint")
      .def_readonly("n", &SaddlePoint::n)
      .def_readonly("U", &SaddlePoint::U)
      .def_readonly("t_n", &SaddlePoint::t_n)
      .def_readonly("offset", &SaddlePoint::offset)
      .def_readonly("residual", &SaddlePoint::residual)
      .def_readonly("approx1", &SaddlePoint::approx1)
      .def_readonly("approx2", &SaddlePoint::approx2)
      .def_readonly("approx3", &SaddlePoint::approx3)
      .def_readonly("iterations", &SaddlePoint::iterations)
      .def("expansion_errors", &SaddlePoint::expansion_errors);
  m.def("solve_saddle", &solve_saddle, py::arg("n"), py::arg("U"));

  py::class_<SummationRange>(m, "SummationRange")
      .def_readonly("T0", &SummationRange::T0)
      .def_readonly("T1", &SummationRange::T1)
      .def_readonly("N0", &SummationRange::N0)
      .def_readonly("N1", &SummationRange::N1)
      .def_readonly("n_lo", &SummationRange::n_lo)
      .def_readonly("n_hi", &SummationRange::n_hi)
      .def("count", &SummationRange::count);
  m.def("summation_range", &summation_range, py::arg("T"), py::arg("U"));

  py::class_<FormulaTerm>(m, "FormulaTerm")
      .def_readonly("n", &FormulaTerm::n)
      .def_readonly("exact_term", &FormulaTerm::exact_term)
      .def_readonly("thm1_term", &FormulaTerm::thm1_term)
      .def_readonly("k_factor", &FormulaTerm::k_factor);
  m.def("formula_term", &formula_term, py::arg("n"), py::arg("U"), py::arg("table"));

  py::enum_<MomentKind>(m, "MomentKind")
      .value("M1", MomentKind::M1)
      .value("M2shift", MomentKind::M2shift)
      .value("M3shift", MomentKind::M3shift)
      .value("M3conj", MomentKind::M3conj)
      .value("M4", MomentKind::M4)
      .value("Abs3", MomentKind::Abs3);
  py::enum_<PanelRule>(m, "PanelRule")
      .value("GaussLegendre16", PanelRule::GaussLegendre16)
      .value("AdaptiveSimpson", PanelRule::AdaptiveSimpson);

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("a", &QuadratureSpec::a)
      .def_readwrite("b", &QuadratureSpec::b)
      .def_readwrite("points_per_oscillation", &QuadratureSpec::points_per_oscillation)
      .def_readwrite("panel_rule", &QuadratureSpec::panel_rule)
      .def_readwrite("abs_tol", &QuadratureSpec::abs_tol)
      .def_readwrite("rel_tol", &QuadratureSpec::rel_tol)
      .def_readwrite("max_refinements", &QuadratureSpec::max_refinements)
      .def_readwrite("strict", &QuadratureSpec::strict);

  py::class_<MomentResult>(m, "MomentResult")
      .def_readonly("kind", &MomentResult::kind)
      .def_readonly("T", &MomentResult::T)
      .def_readonly("U", &MomentResult::U)
      .def_readonly("a", &MomentResult::a)
      .def_readonly("b", &MomentResult::b)
      .def_readonly("value", &MomentResult::value)
      .def_readonly("est_error", &MomentResult::est_error)
      .def_readonly("evaluations", &MomentResult::evaluations)
      .def_readonly("converged", &MomentResult::converged)
      .def_readonly("diagnostic", &MomentResult::diagnostic);

  m.def("integrate_moment", &integrate_moment, py::arg("kind"), py::arg("T"), py::arg("U") = 0.0,
        py::arg("spec") = QuadratureSpec{}, py::call_guard<py::gil_scoped_release>());
  m.def("integrate_range", &integrate_range, py::arg("kind"), py::arg("U"), py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());
  m.def("first_moment_diag", &first_moment_diag, py::arg("T"), py::arg("spec") = QuadratureSpec{},
        py::call_guard<py::gil_scoped_release>());

  py::enum_<FormulaVariant>(m, "FormulaVariant")
      .value("Exact317", FormulaVariant::Exact317)
      .value("Theorem1", FormulaVariant::Theorem1);

  m.def(
      "rhs_sum",
      [](double T, double U, const DivisorTable& table, FormulaVariant variant, bool conjugate, bool reverse) {
        RhsOptions o;
        o.variant = variant;
        o.conjugate = conjugate;
        o.reverse = reverse;
        return rhs_sum(T, U, table, o);
      },
      py::arg("T"), py::arg("U"), py::arg("table"), py::arg("variant") = FormulaVariant::Exact317,
      py::arg("conjugate") = false, py::arg("reverse") = false, py::call_guard<py::gil_scoped_release>());

  py::class_<MomentComparison>(m, "MomentComparison")
      .def_readonly("T", &MomentComparison::T)
      .def_readonly("U", &MomentComparison::U)
      .def_readonly("lhs", &MomentComparison::lhs)
      .def_readonly("rhs", &MomentComparison::rhs)
      .def_readonly("abs_diff", &MomentComparison::abs_diff)
      .def_readonly("im_leak", &MomentComparison::im_leak)
      .def_readonly("normalized", &MomentComparison::normalized)
      .def_readonly("n_terms", &MomentComparison::n_terms)
      .def_readonly("evaluations", &MomentComparison::evaluations)
      .def_readonly("variant", &MomentComparison::variant)
      .def_readonly("conjugate", &MomentComparison::conjugate);
  m.def("compare_theorem1", &compare_theorem1, py::arg("T"), py::arg("U"), py::arg("spec") = QuadratureSpec{},
        py::arg("table"), py::arg("variant") = FormulaVariant::Exact317, py::arg("conjugate") = false,
        py::call_guard<py::gil_scoped_release>());

  m.def("exp_sum_d3", &exp_sum_d3, py::arg("alpha"), py::arg("N"), py::arg("Nprime"), py::arg("table"));
  m.def(
      "exp_sum_plain",
      [](double alpha, std::int64_t N, std::int64_t Nprime) {
        const auto r = exp_sum_plain(alpha, N, Nprime);
        return py::make_tuple(r.value, r.normalized);
      },
      py::arg("alpha"), py::arg("N"), py::arg("Nprime"));
  m.def("mean_square_exact", &mean_square_exact, py::arg("A"), py::arg("B"), py::arg("N"), py::arg("table"),
        py::call_guard<py::gil_scoped_release>());
  m.def("mean_square_quadrature", &mean_square_quadrature, py::arg("A"), py::arg("B"), py::arg("N"), py::arg("table"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<GoodPoint>(m, "GoodPoint")
      .def_readonly("C", &GoodPoint::C)
      .def_readonly("magnitude", &GoodPoint::magnitude)
      .def_readonly("bound", &GoodPoint::bound)
      .def_readonly("within_bound", &GoodPoint::within_bound);
  m.def("find_good_point", &find_good_point, py::arg("A"), py::arg("B"), py::arg("N"), py::arg("table"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli_dispatch(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
