#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "qht/binning.hpp"
#include "qht/divergence.hpp"
#include "qht/exponents.hpp"
#include "qht/np_testing.hpp"
#include "qht/pair_file.hpp"
#include "qht/types_pinch.hpp"

namespace py = pybind11;
using namespace qht;

namespace {

StatePair make_pair(const Matrix& rho, const Matrix& eta) {
  return StatePair(DensityOperator::from_matrix(rho), DensityOperator::from_matrix(eta));
}

py::dict np_to_dict(const NPResult& r) {
  py::dict d;
  d["log_budget"] = r.log_budget;
  d["log_success"] = r.log_success;
  d["lambda_star"] = r.lambda_star;
  d["log_lambda_star"] = r.log_lambda_star;
  d["duality_gap"] = r.duality_gap;
  d["log_type2"] = r.log_type2;
  if (const auto* t = std::get_if<TestOperator>(&r.test)) {
    d["test"] = Matrix(t->op().matrix() * t->scale());
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_qht, m) {
  m.doc() = "Quantum hypothesis-testing exponents";

  static py::exception<Error> qht_error(m, "QhtError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = py::reinterpret_borrow<py::object>(qht_error)(e.what());
      err.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(qht_error.ptr(), err.ptr());
    }
  });

  py::class_<StatePair>(m, "StatePair")
      .def(py::init(&make_pair), py::arg("rho"), py::arg("eta"))
      .def_property_readonly("rho", [](const StatePair& p) { return p.rho().matrix(); })
      .def_property_readonly("eta", [](const StatePair& p) { return p.eta().matrix(); })
      .def_property_readonly("dim", &StatePair::dim)
      .def_property_readonly("order_log", &StatePair::order_log);

  py::class_<ClassicalPair>(m, "ClassicalPair")
      .def(py::init([](const std::vector<double>& p, const std::vector<double>& q) {
             return ClassicalPair::from_probabilities(p, q);
           }),
           py::arg("p"), py::arg("q"))
      .def_property_readonly("p", &ClassicalPair::p)
      .def_property_readonly("q", &ClassicalPair::q)
      .def("to_state_pair", &ClassicalPair::to_state_pair);

  m.def("fixture_names", &builtin_fixture_names);
  m.def("fixture", [](const std::string& name) -> py::object {
    const PairFile f = load_pair(name);
    if (f.is_classical()) return py::cast(f.classical_pair());
    return py::cast(f.state_pair());
  }, py::arg("name_or_path"));

  m.def("log_q_star", py::overload_cast<const StatePair&, double>(&log_q_star), py::arg("pair"),
        py::arg("alpha"));
  m.def("sandwiched_renyi", &sandwiched_renyi, py::arg("pair"), py::arg("alpha"));
  m.def("petz_renyi", &petz_renyi, py::arg("pair"), py::arg("alpha"));
  m.def("umegaki", &umegaki, py::arg("pair"));
  m.def("max_relative", &max_relative, py::arg("pair"));

  py::class_<HoeffdingResult>(m, "HoeffdingResult")
      .def_readonly("r", &HoeffdingResult::r)
      .def_readonly("value", &HoeffdingResult::value)
      .def_readonly("arg_alpha", &HoeffdingResult::arg_alpha)
      .def_readonly("truncation_bound", &HoeffdingResult::truncation_bound)
      .def_readonly("alpha_max", &HoeffdingResult::alpha_max);
  m.def("hoeffding", [](const StatePair& p, double r, double tol) {
    return hoeffding_anti_divergence(p, r, tol);
  }, py::arg("pair"), py::arg("r"), py::arg("tol") = 1e-6);
  m.def("cutoff_rate", &cutoff_rate, py::arg("pair"), py::arg("kappa"), py::arg("tol") = 1e-6);

  m.def("np_dense", [](const Matrix& a, const Matrix& b, double log_mu) {
    return np_to_dict(np_dense(DensityOperator::from_matrix(a), DensityOperator::from_matrix(b), log_mu));
  }, py::arg("a"), py::arg("b"), py::arg("log_mu"));
  m.def("np_classical", [](const ClassicalPair& p, int n, double log_mu) {
    return np_to_dict(np_classical(p, n, log_mu));
  }, py::arg("pair"), py::arg("n"), py::arg("log_mu"));

  py::class_<ExponentRecord>(m, "ExponentRecord")
      .def_readonly("n", &ExponentRecord::n)
      .def_readonly("r", &ExponentRecord::r)
      .def_readonly("log_success", &ExponentRecord::log_success)
      .def_readonly("b_n", &ExponentRecord::b_n)
      .def_property_readonly("engine", [](const ExponentRecord& e) { return to_string(e.engine); });
  m.def("finite_n_exponent", [](const StatePair& p, int n, double r, const std::string& engine) {
    return finite_n_exponent(p, n, r, parse_engine(engine));
  }, py::arg("pair"), py::arg("n"), py::arg("r"), py::arg("engine") = "auto");
  m.def("finite_n_exponent", py::overload_cast<const ClassicalPair&, int, double>(&finite_n_exponent),
        py::arg("pair"), py::arg("n"), py::arg("r"));

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("records", &ConvergenceReport::records)
      .def_readonly("h_star", &ConvergenceReport::h_star)
      .def_readonly("fitted_envelope_C", &ConvergenceReport::fitted_envelope_C)
      .def_readonly("final_gap", &ConvergenceReport::final_gap)
      .def("gaps", &ConvergenceReport::gaps);
  m.def("convergence_sweep", [](const StatePair& p, double r, const std::vector<int>& ns,
                                const std::string& engine) {
    return convergence_sweep(p, r, ns, parse_engine(engine));
  }, py::arg("pair"), py::arg("r"), py::arg("n_schedule"), py::arg("engine") = "auto");
  m.def("convergence_sweep", [](const ClassicalPair& p, double r, const std::vector<int>& ns) {
    return convergence_sweep(p, r, ns);
  }, py::arg("pair"), py::arg("r"), py::arg("n_schedule"));

  py::class_<BinnedDensity>(m, "BinnedDensity")
      .def_readonly("k", &BinnedDensity::k)
      .def_readonly("a", &BinnedDensity::a)
      .def_readonly("delta", &BinnedDensity::delta)
      .def_property_readonly("binned", [](const BinnedDensity& b) { return b.binned.matrix(); })
      .def_property_readonly("bin_count", &BinnedDensity::bin_count)
      .def_property_readonly("cardinality_bound", &BinnedDensity::cardinality_bound);
  m.def("bin_density", [](const Matrix& d, int k) {
    return bin_density(DensityOperator::from_matrix(d), k);
  }, py::arg("density"), py::arg("k"));
  m.def("binning_gaps", [](const StatePair& p, int k, const std::vector<double>& alphas) {
    std::vector<std::pair<double, double>> out;
    for (const BinningGap& g : binning_divergence_gap(p, k, alphas)) out.emplace_back(g.alpha, g.gap);
    return out;
  }, py::arg("pair"), py::arg("k"), py::arg("alphas"));

  py::class_<PinchingSpec>(m, "PinchingSpec")
      .def(py::init([](const std::vector<Matrix>& projectors) {
             std::vector<HermitianOperator> ops;
             for (const Matrix& p : projectors) ops.emplace_back(p);
             return PinchingSpec(std::move(ops));
           }),
           py::arg("projectors"))
      .def_static("computational", &PinchingSpec::computational, py::arg("dim"))
      .def_property_readonly("size", &PinchingSpec::size)
      .def("apply", [](const PinchingSpec& s, const Matrix& x) { return s.apply(x); });
  m.def("cp_index_check", &cp_index_check, py::arg("spec"), py::arg("samples") = 100,
        py::arg("seed") = 0);
}
