#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bergman/acceptance.hpp"
#include "bergman/berezin.hpp"
#include "bergman/dbar.hpp"
#include "bergman/expansion.hpp"
#include "bergman/fock.hpp"
#include "bergman/kernel.hpp"
#include "bergman/potential.hpp"
#include "bergman/version.hpp"

#include <sstream>

namespace py = pybind11;
using namespace bergman;

namespace {
std::pair<double, cd> logvalue_pair(const LogValue& v) { return {v.log_magnitude, v.phase}; }
}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Polynomial Bergman spaces, Berezin transforms, and planar equilibrium potentials";
  m.attr("__version__") = kVersion;

  py::class_<PlanarQuadrature>(m, "PlanarQuadrature")
      .def_readonly("nodes", &PlanarQuadrature::nodes)
      .def_readonly("weights", &PlanarQuadrature::weights)
      .def_readonly("r_max", &PlanarQuadrature::r_max)
      .def("__len__", &PlanarQuadrature::size);
  m.def("build_radial_quadrature", &build_radial_quadrature, py::arg("r_max"),
        py::arg("n_radial"), py::arg("n_angular"));
  m.def("build_cartesian_quadrature", &build_cartesian_quadrature, py::arg("extent"),
        py::arg("spacing"));
  m.def("integrate", &integrate, py::arg("quadrature"), py::arg("f"));
  m.def("trunc_exp_log",
        [](int k, double x) { return trunc_exp_log(k, x).log_magnitude; }, py::arg("k"),
        py::arg("x"));
  m.def("lower_incomplete_gamma", &lower_incomplete_gamma, py::arg("a"), py::arg("x"));

  py::class_<Weight>(m, "Weight")
      .def("Q", [](const Weight& w, cd z) { return w.Q(z); })
      .def("laplacian", [](const Weight& w, cd z) { return w.laplacian(z); })
      .def_readonly("growth_rho", &Weight::growth_rho)
      .def_readonly("is_radial", &Weight::is_radial)
      .def("descriptor", [](const Weight& w) { return w.descriptor.dump(); });
  m.def("make_fock", &make_fock);
  m.def("make_radial_power", &make_radial_power, py::arg("p"));
  m.def("make_quartic_perturbation", &make_quartic_perturbation, py::arg("c"));
  m.def("weight_from_json",
        [](const std::string& s) { return weight_from_json(nlohmann::json::parse(s)); });

  py::class_<BergmanSpaceBasis>(m, "BergmanSpaceBasis")
      .def_readonly("m", &BergmanSpaceBasis::m)
      .def_readonly("n", &BergmanSpaceBasis::n)
      .def_readonly("radial_path", &BergmanSpaceBasis::radial_path)
      .def("to_json", [](const BergmanSpaceBasis& b) { return basis_to_json(b).dump(); });
  m.def("default_quadrature", &default_quadrature, py::arg("weight"), py::arg("m"),
        py::arg("n"));
  m.def(
      "build_space",
      [](const Weight& w, double mm, int n, const PlanarQuadrature* quad) {
        return quad ? build_space(w, mm, n, *quad)
                    : build_space(w, mm, n, default_quadrature(w, mm, n));
      },
      py::arg("weight"), py::arg("m"), py::arg("n"), py::arg("quadrature") = nullptr);
  m.def("build_space_gram", &build_space_gram, py::arg("weight"), py::arg("m"), py::arg("n"),
        py::arg("quadrature"));
  m.def("basis_from_json",
        [](const std::string& s) { return basis_from_json(nlohmann::json::parse(s)); });
  m.def("kernel_eval", &kernel_eval, py::arg("basis"), py::arg("z"), py::arg("w"));
  m.def(
      "weighted_kernel",
      [](const BergmanSpaceBasis& b, cd z, cd w) { return logvalue_pair(weighted_kernel(b, z, w)); },
      "log-magnitude and unit phase of K(z,w) e^{-m(Q(z)+Q(w))/2}");
  m.def("one_point", &one_point, py::arg("basis"), py::arg("z"));
  m.def("log_one_point", &log_one_point, py::arg("basis"), py::arg("z"));

  py::class_<BerezinEvaluator>(m, "BerezinEvaluator")
      .def_readonly("z0", &BerezinEvaluator::z0);
  m.def("make_berezin", &make_berezin, py::arg("basis"), py::arg("z0"),
        py::keep_alive<0, 1>());
  m.def("density", &density, py::arg("evaluator"), py::arg("z"));
  m.def("log_density", &log_density, py::arg("evaluator"), py::arg("z"));
  m.def("transform", &transform, py::arg("evaluator"), py::arg("f"), py::arg("quadrature"));
  m.def("normalized_density", &normalized_density, py::arg("evaluator"), py::arg("z"));
  m.def("tv_quadrature", &tv_quadrature);
  m.def("tv_to_gaussian", &tv_to_gaussian, py::arg("evaluator"), py::arg("quadrature"));
  m.def("mass_outside", &mass_outside, py::arg("evaluator"), py::arg("indicator"),
        py::arg("quadrature"));

  m.def("b0", &b0, py::arg("weight"), py::arg("z"), py::arg("w"));
  m.def("b1", &b1, py::arg("weight"), py::arg("z"), py::arg("w"));
  py::class_<ExpansionEvaluator>(m, "ExpansionEvaluator");
  m.def("make_expansion", &make_expansion, py::arg("weight"), py::arg("m"));
  m.def(
      "approx_kernel_log",
      [](const ExpansionEvaluator& ev, cd z, cd w) { return logvalue_pair(approx_kernel_log(ev, z, w)); },
      py::arg("evaluator"), py::arg("z"), py::arg("w"));
  m.def("diag_expansion", &diag_expansion, py::arg("weight"), py::arg("m"), py::arg("z"));
  m.def("diag_residual", &diag_residual, py::arg("basis"), py::arg("weight"), py::arg("z"));

  py::class_<OffDiagSample>(m, "OffDiagSample")
      .def_readonly("distance", &OffDiagSample::distance)
      .def_readonly("log_density", &OffDiagSample::log_density)
      .def_readonly("compensation", &OffDiagSample::compensation);
  py::class_<OffDiagReport>(m, "OffDiagReport")
      .def_readonly("z0", &OffDiagReport::z0)
      .def_readonly("samples", &OffDiagReport::samples)
      .def_readonly("fitted_slope", &OffDiagReport::fitted_slope)
      .def_readonly("d_K", &OffDiagReport::d_K)
      .def_readonly("a_K", &OffDiagReport::a_K)
      .def("to_csv", [](const OffDiagReport& r) {
        std::ostringstream os;
        offdiag_to_csv(r, os);
        return os.str();
      });
  m.def("offdiag_profile", &offdiag_profile, py::arg("basis"), py::arg("z0"),
        py::arg("direction"), py::arg("distances"), py::arg("equilibrium"));

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init<>())
      .def_readwrite("extent", &GridSpec::extent)
      .def_readwrite("spacing", &GridSpec::spacing)
      .def_readwrite("omega", &GridSpec::omega)
      .def_readwrite("max_iter", &GridSpec::max_iter)
      .def_readwrite("tol", &GridSpec::tol);
  py::class_<SolverDiagnostics>(m, "SolverDiagnostics")
      .def_readonly("sweeps", &SolverDiagnostics::sweeps)
      .def_readonly("outer_iterations", &SolverDiagnostics::outer_iterations)
      .def_readonly("final_residual", &SolverDiagnostics::final_residual)
      .def_readonly("mass", &SolverDiagnostics::mass);
  py::class_<EquilibriumResult>(m, "EquilibriumResult")
      .def_readonly("tau", &EquilibriumResult::tau)
      .def_readonly("q_tau", &EquilibriumResult::q_tau)
      .def_readonly("c_tau", &EquilibriumResult::c_tau)
      .def_readonly("diagnostics", &EquilibriumResult::diagnostics)
      .def_property_readonly(
          "droplet_radius",
          [](const EquilibriumResult& r) { return r.droplet_radius; })
      .def("qhat", [](const EquilibriumResult& r, cd z) { return r.eval_Qhat(z); })
      .def("in_droplet", &EquilibriumResult::in_droplet);
  m.def("radial_droplet_radius", &radial_droplet_radius, py::arg("weight"), py::arg("tau"));
  m.def("radial_equilibrium", &radial_equilibrium, py::arg("weight"), py::arg("tau"),
        py::arg("z"));
  m.def("radial_equilibrium_result", &radial_equilibrium_result, py::arg("weight"),
        py::arg("tau"));
  m.def("psor_obstacle_solve", &psor_obstacle_solve, py::arg("weight"), py::arg("tau"),
        py::arg("grid_spec"));
  m.def("constants", &constants, py::arg("equilibrium"), py::arg("weight"));
  m.def("droplet_radius_estimate", &droplet_radius_estimate, py::arg("equilibrium"));

  py::class_<FockMomentResult>(m, "FockMomentResult")
      .def_readonly("order", &FockMomentResult::order)
      .def_readonly("value", &FockMomentResult::value)
      .def_readonly("method", &FockMomentResult::method);
  py::class_<HarmonicMeasureSpec>(m, "HarmonicMeasureSpec")
      .def(py::init<>())
      .def_readwrite("tau", &HarmonicMeasureSpec::tau)
      .def_readwrite("z0", &HarmonicMeasureSpec::z0)
      .def_readwrite("boundary_samples", &HarmonicMeasureSpec::boundary_samples);
  py::class_<Th5Row>(m, "Th5Row")
      .def_readonly("m", &Th5Row::m)
      .def_readonly("n", &Th5Row::n)
      .def_readonly("schedule", &Th5Row::schedule)
      .def_readonly("berezin_value", &Th5Row::berezin_value)
      .def_readonly("harmonic_value", &Th5Row::harmonic_value)
      .def_readonly("gap", &Th5Row::gap);
  m.def("fock_kernel", &fock_kernel, py::arg("m"), py::arg("n"), py::arg("z"), py::arg("w"));
  m.def("pv_moment", &pv_moment, py::arg("m"), py::arg("n"), py::arg("j"), py::arg("z0"));
  m.def("restricted_moment", &restricted_moment, py::arg("m"), py::arg("n"), py::arg("nu"),
        py::arg("z0"), py::arg("r"));
  m.def("pv_moment_quadrature", &pv_moment_quadrature, py::arg("m"), py::arg("n"),
        py::arg("j"), py::arg("z0"), py::arg("quadrature"));
  m.def(
      "szego_asymptotic",
      [](int l, double x) { return szego_asymptotic(l, x).log_magnitude; }, py::arg("l"),
      py::arg("x"), "log of the leading Szego term for E_l(l x)");
  m.def("harmonic_extension", &harmonic_extension, py::arg("spec"), py::arg("f_boundary"));
  m.def("th5_test_function", &th5_test_function, py::arg("tau"));
  m.def("th5_experiment", &th5_experiment, py::arg("spec"), py::arg("f"), py::arg("m_list"));

  py::class_<MinimalSolution>(m, "MinimalSolution")
      .def_readonly("values", &MinimalSolution::values)
      .def_readonly("coefficients", &MinimalSolution::coefficients)
      .def_readonly("norm_mQ", &MinimalSolution::norm_mQ)
      .def_readonly("cauchy_norm_mQ", &MinimalSolution::cauchy_norm_mQ)
      .def_readonly("orthogonality_residual", &MinimalSolution::orthogonality_residual);
  py::class_<DbarBoundParams>(m, "DbarBoundParams")
      .def_readonly("M0", &DbarBoundParams::M0)
      .def_readonly("bpar", &DbarBoundParams::bpar)
      .def_readonly("q_tau", &DbarBoundParams::q_tau)
      .def_readonly("c_tau", &DbarBoundParams::c_tau)
      .def_readonly("a", &DbarBoundParams::a)
      .def_readonly("m0", &DbarBoundParams::m0);
  py::class_<CorBhRecord>(m, "CorBhRecord")
      .def_readonly("m", &CorBhRecord::m)
      .def_readonly("n", &CorBhRecord::n)
      .def_readonly("regime_ok", &CorBhRecord::regime_ok)
      .def_readonly("lhs", &CorBhRecord::lhs)
      .def_readonly("rhs", &CorBhRecord::rhs)
      .def_readonly("ratio", &CorBhRecord::ratio)
      .def_readonly("orthogonality_residual_rel", &CorBhRecord::orthogonality_residual_rel);
  m.def("strict_int_below", &strict_int_below, py::arg("x"));
  m.def("cauchy_transform", &cauchy_transform, py::arg("f"), py::arg("quadrature"),
        py::arg("w"));
  m.def("bergman_project", &bergman_project, py::arg("basis"), py::arg("u"),
        py::arg("quadrature"));
  m.def("minimal_solution", &minimal_solution, py::arg("basis"), py::arg("f"),
        py::arg("quadrature"), py::arg("eval_points"));
  m.def("make_bump", &make_bump, py::arg("center"), py::arg("radius"));
  m.def("make_dbar_params", &make_dbar_params, py::arg("M0"), py::arg("bpar"),
        py::arg("equilibrium"), py::arg("weight"), py::arg("supp_center"),
        py::arg("supp_radius"));
  m.def("verify_cor_bh", &verify_cor_bh, py::arg("basis"), py::arg("f"), py::arg("params"),
        py::arg("equilibrium"), py::arg("quadrature"));

  m.def(
      "run_acceptance",
      [](const std::string& out_dir, bool deterministic) {
        std::ostringstream os;
        const int rc = run_accept(out_dir, deterministic, os);
        return py::make_tuple(rc, os.str());
      },
      py::arg("out_dir"), py::arg("deterministic") = true,
      "Run the acceptance suite; returns (exit_code, log_text)");
}
