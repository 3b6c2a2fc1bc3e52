#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fermichain/diagnostics.hpp"
#include "fermichain/entanglement.hpp"
#include "fermichain/errors.hpp"
#include "fermichain/pfaffian.hpp"
#include "fermichain/resource_states.hpp"

namespace py = pybind11;
using namespace fermichain;

PYBIND11_MODULE(fermichain, m) {
  m.doc() = "Quasi-free states of the XY chain: covariances, criticality diagnostics, entanglement";
  m.attr("__version__") = FERMICHAIN_VERSION;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<XYParams>(m, "XYParams")
      .def(py::init([](double gamma, double lambda) { return XYParams{gamma, lambda}; }), py::arg("gamma"),
           py::arg("lambda_"))
      .def_readwrite("gamma", &XYParams::gamma)
      .def_readwrite("lambda_", &XYParams::lambda)
      .def("is_critical", &XYParams::is_critical)
      .def("regime", &XYParams::regime)
      .def("__repr__", [](const XYParams& p) {
        return "XYParams(gamma=" + std::to_string(p.gamma) + ", lambda_=" + std::to_string(p.lambda) + ")";
      });

  py::class_<QuadratureOptions>(m, "QuadratureOptions")
      .def(py::init([](int log2_grid, double tolerance) { return QuadratureOptions{log2_grid, tolerance}; }),
           py::arg("log2_grid") = 14, py::arg("tolerance") = 1e-6)
      .def_readwrite("log2_grid", &QuadratureOptions::log2_grid)
      .def_readwrite("tolerance", &QuadratureOptions::tolerance);

  py::class_<Window>(m, "Window")
      .def(py::init<Site, Site>(), py::arg("lo"), py::arg("hi"))
      .def_property_readonly("lo", &Window::lo)
      .def_property_readonly("hi", &Window::hi)
      .def("__len__", [](const Window& w) { return w.length(); })
      .def("contains", py::overload_cast<Site>(&Window::contains, py::const_), py::arg("site"));
  m.def("centered_window", &centered_window, py::arg("n"));

  m.def("dispersion", &dispersion, py::arg("params"), py::arg("x"));
  m.def("symbol_eval", [](const XYParams& p, double x) { return CMatrix(symbol_eval(p, x)); }, py::arg("params"),
        py::arg("x"));
  m.def("covariance_block",
        [](const XYParams& p, long d, QuadratureOptions o) { return CMatrix(covariance_block(p, d, o)); },
        py::arg("params"), py::arg("d"), py::arg("options") = QuadratureOptions{});

  py::class_<CovarianceTruncation>(m, "CovarianceTruncation")
      .def_readonly("window", &CovarianceTruncation::window)
      .def_readonly("complex_form", &CovarianceTruncation::complex_form)
      .def_readonly("majorana_form", &CovarianceTruncation::majorana_form)
      .def("occupations_from_complex", &CovarianceTruncation::occupations_from_complex)
      .def("occupations_from_majorana", &CovarianceTruncation::occupations_from_majorana);
  m.def("build_truncation", py::overload_cast<const XYParams&, const Window&, QuadratureOptions>(&build_truncation),
        py::arg("params"), py::arg("window"), py::arg("options") = QuadratureOptions{});
  m.def("ring_projection", &ring_projection, py::arg("params"), py::arg("window"));

  m.def("pfaffian", [](const CMatrix& a) { return pfaffian(a); }, py::arg("a"));
  m.def("pauli_expectation",
        [](const std::string& word, const CovarianceTruncation& cov) {
          return pauli_expectation_complex(PauliString::parse(word), cov);
        },
        py::arg("word"), py::arg("cov"));

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def_readonly("sites", &DensityMatrix::sites)
      .def_readonly("matrix", &DensityMatrix::matrix)
      .def_readonly("repaired", &DensityMatrix::repaired)
      .def("min_eigenvalue", &DensityMatrix::min_eigenvalue);
  m.def("reduced_density_matrix", &reduced_density_matrix, py::arg("sites"), py::arg("cov"));
  m.def("partial_trace", py::overload_cast<const DensityMatrix&, const std::vector<Site>&>(&partial_trace),
        py::arg("rho"), py::arg("keep"));

  m.def("trace_X", &trace_X, py::arg("params"), py::arg("n"));
  m.def("trace_X_compression", &trace_X_compression, py::arg("params"), py::arg("n"),
        py::arg("options") = QuadratureOptions{});
  m.def("hs_norm_E_minus_F", &hs_norm_E_minus_F, py::arg("params"), py::arg("n"));
  m.def("hs_norm_theta_conjugation", &hs_norm_theta_conjugation, py::arg("params"), py::arg("n"));

  py::class_<LineFit>(m, "LineFit")
      .def_readonly("slope", &LineFit::slope)
      .def_readonly("intercept", &LineFit::intercept)
      .def_readonly("max_rel_residual", &LineFit::max_rel_residual);
  py::class_<DivergenceScan>(m, "DivergenceScan")
      .def_readonly("sizes", &DivergenceScan::sizes)
      .def_readonly("values", &DivergenceScan::values)
      .def_readonly("hs_E_minus_F", &DivergenceScan::hs_E_minus_F)
      .def_readonly("hs_theta", &DivergenceScan::hs_theta)
      .def_readonly("fit", &DivergenceScan::fit)
      .def_property_readonly("classification", [](const DivergenceScan& s) { return to_string(s.classification); });
  m.def("scan_trace_X",
        [](const XYParams& p, const std::vector<long>& sizes) { return scan_trace_X(p, sizes); }, py::arg("params"),
        py::arg("sizes"));

  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("valid", &DecayFit::valid)
      .def_readonly("slope", &DecayFit::slope)
      .def_readonly("residual", &DecayFit::residual);
  py::class_<ClusterScan>(m, "ClusterScan")
      .def_readonly("distances", &ClusterScan::distances)
      .def_readonly("connected", &ClusterScan::connected)
      .def_readonly("exponential", &ClusterScan::exponential)
      .def_readonly("power_law", &ClusterScan::power_law)
      .def_property_readonly("preference", [](const ClusterScan& s) { return to_string(s.preference); });
  m.def("cluster_scan",
        [](const std::string& a, const std::string& b, const XYParams& p, long k_max) {
          return cluster_scan(PauliString::parse(a), PauliString::parse(b), p, k_max);
        },
        py::arg("a"), py::arg("b"), py::arg("params"), py::arg("k_max"));

  m.def("block_entropy",
        [](const XYParams& p, long length) {
          return block_entropy(entanglement_spectrum(p, Window(0, length), 4 * length));
        },
        py::arg("params"), py::arg("length"));
  py::class_<EntropyScan>(m, "EntropyScan")
      .def_readonly("lengths", &EntropyScan::lengths)
      .def_readonly("entropy", &EntropyScan::entropy)
      .def_readonly("slope", &EntropyScan::slope)
      .def_readonly("max_rel_residual", &EntropyScan::max_rel_residual);
  m.def("entropy_scan", &entropy_scan, py::arg("params"), py::arg("lengths"), py::arg("ambient_n"));
  py::class_<OneCopyRow>(m, "OneCopyRow")
      .def_readonly("length", &OneCopyRow::length)
      .def_readonly("entropy", &OneCopyRow::entropy)
      .def_readonly("e1", &OneCopyRow::e1)
      .def_readonly("d", &OneCopyRow::d);
  py::class_<OneCopyScan>(m, "OneCopyScan")
      .def_readonly("rows", &OneCopyScan::rows)
      .def_readonly("entropy_slope", &OneCopyScan::entropy_slope)
      .def_readonly("e1_slope", &OneCopyScan::e1_slope);
  m.def("one_copy_scan", &one_copy_scan, py::arg("params"), py::arg("lengths"), py::arg("ambient_n"));

  m.def("log_negativity", &log_negativity, py::arg("rho"), py::arg("group_a"));
  m.def("singlet_fidelity",
        [](const DensityMatrix& rho, const std::vector<Site>& group_a, int d) {
          return singlet_fidelity(rho, group_a, d).fidelity;
        },
        py::arg("rho"), py::arg("group_a"), py::arg("d") = 2);

  py::class_<PairedState>(m, "PairedState")
      .def_readonly("pairs", &PairedState::pairs)
      .def_readonly("window", &PairedState::window);
  m.def("make_omega1", &make_omega1, py::arg("j"));
  m.def("omega1_rdm", &omega1_rdm, py::arg("state"), py::arg("sites"));
  m.def("chsh_beta", py::overload_cast<const CMatrix&>(&chsh_beta), py::arg("rho"));
  m.def("chsh_beta_direct", [](const CMatrix& rho) { return chsh_beta_direct(rho).beta; }, py::arg("rho"));
  m.def("beta_scan_xy",
        [](const XYParams& p, const std::vector<std::pair<Site, Site>>& pairs) {
          std::vector<double> out;
          for (const auto& row : beta_scan_xy(p, pairs)) out.push_back(row.beta);
          return out;
        },
        py::arg("params"), py::arg("pairs"));

  py::class_<LocalizationResult>(m, "LocalizationResult")
      .def_readonly("L_star", &LocalizationResult::L_star)
      .def_readonly("fidelity_per_L", &LocalizationResult::fidelity_per_L)
      .def_readonly("optimized_per_L", &LocalizationResult::optimized_per_L);
  m.def("localization_length_xy",
        [](const XYParams& p, long M, long N, double eps, long L_max) {
          return localization_length(xy_rdm_source(p), M, N, eps, L_max);
        },
        py::arg("params"), py::arg("M"), py::arg("N"), py::arg("eps"), py::arg("L_max"));
  m.def("localization_length_omega1",
        [](const PairedState& st, long M, long N, double eps, long L_max) {
          return localization_length(omega1_rdm_source(st), M, N, eps, L_max);
        },
        py::arg("state"), py::arg("M"), py::arg("N"), py::arg("eps"), py::arg("L_max"));
}
