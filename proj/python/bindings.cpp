#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "catqfi/cat.hpp"
#include "catqfi/error.hpp"
#include "catqfi/genscheme.hpp"
#include "catqfi/loss.hpp"
#include "catqfi/probe.hpp"
#include "catqfi/qfi.hpp"
#include "catqfi/sweep.hpp"

namespace py = pybind11;
using namespace catqfi;

namespace {

py::dict row_dict(const SweepRow& r) {
  py::dict d;
  d["d"] = r.d;
  d["k"] = r.k;
  d["alpha"] = r.alpha;
  d["eta"] = r.eta;
  d["n_av"] = r.n_av;
  d["f_q"] = r.f_q;
  d["delta_phi"] = r.delta_phi;
  d["method"] = r.method;
  d["f_q_paper"] = r.f_q_paper ? py::cast(*r.f_q_paper) : py::none();
  d["error"] = r.error;
  return d;
}

py::dict outcome_dict(const GenOutcome& o) {
  py::dict d;
  d["k1"] = o.k1;
  d["k2"] = o.k2;
  d["target_k"] = o.target_k;
  d["probability"] = o.probability;
  d["predicted"] = o.predicted;
  d["conditional_fidelity"] = o.conditional_fidelity;
  d["leakage"] = o.leakage;
  d["leakage_flagged"] = o.leakage_flagged;
  d["count"] = o.count;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum Fisher information of multi-component cat probes";

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<CatSpec>(m, "CatSpec")
      .def(py::init<int, int, cplx>(), py::arg("d"), py::arg("k"), py::arg("alpha"))
      .def_property_readonly("d", &CatSpec::d)
      .def_property_readonly("k", &CatSpec::k)
      .def_property_readonly("alpha", &CatSpec::alpha)
      .def("__repr__", [](const CatSpec& s) {
        return "CatSpec(d=" + std::to_string(s.d()) + ", k=" + std::to_string(s.k()) + ", alpha=" +
               std::to_string(s.alpha().real()) + (s.alpha().imag() ? "+" + std::to_string(s.alpha().imag()) + "j" : "") + ")";
      });

  py::class_<CatMoments>(m, "CatMoments")
      .def_readonly("norm_M", &CatMoments::norm_M)
      .def_readonly("mean_n", &CatMoments::mean_n)
      .def_readonly("mean_n2", &CatMoments::mean_n2)
      .def_readonly("g2", &CatMoments::g2)
      .def_readonly("mandel_q", &CatMoments::mandel_q)
      .def_readonly("g2_is_limit", &CatMoments::g2_is_limit);

  py::class_<QfiResult>(m, "QfiResult")
      .def_readonly("f_q", &QfiResult::f_q)
      .def_readonly("delta_phi", &QfiResult::delta_phi)
      .def_property_readonly("method", [](const QfiResult& r) { return std::string(to_string(r.method)); })
      .def_readonly("diagnostics", &QfiResult::diagnostics);

  m.def("norm_M", &norm_M, py::arg("spec"));
  m.def("cat_moments", &cat_moments, py::arg("spec"));
  m.def("probe_nav", &probe_nav, py::arg("spec"));
  m.def("qfi_pure", &qfi_pure, py::arg("spec"));
  m.def("qfi_pure_g2", &qfi_pure_g2, py::arg("spec"));
  m.def("qfi_lossy", [](const CatSpec& s, double eta) { return qfi_lossy_oracle(s, eta); }, py::arg("spec"),
        py::arg("eta"));
  m.def("qfi_lossy_paper", [](const CatSpec& s, double eta) { return qfi_mixed_paper(lossy_probe(s, eta, 0.0)); },
        py::arg("spec"), py::arg("eta"));
  m.def("noon_qfi", &noon_qfi, py::arg("k"), py::arg("eta") = 1.0);
  m.def("tmsv_qfi", &tmsv_qfi, py::arg("r"), py::arg("eta") = 1.0);
  m.def("tmsv_r_for_nav", &tmsv_r_for_nav, py::arg("n_av"));
  m.def("sql_bound", &sql_bound, py::arg("n_av"));
  m.def("nav_of_alpha", &nav_of_alpha, py::arg("d"), py::arg("k"), py::arg("alpha"));
  m.def("alpha_for_nav", &alpha_for_nav, py::arg("d"), py::arg("k"), py::arg("n_av"));

  m.def(
      "trace_curve",
      [](std::vector<int> d, std::vector<int> k, double eta, double n_av_min, double n_av_max, int points,
         std::vector<std::string> baselines, int workers) {
        CurveRequest req;
        req.d_list = std::move(d);
        req.k_list = std::move(k);
        req.eta = eta;
        req.n_av_min = n_av_min;
        req.n_av_max = n_av_max;
        req.points = points;
        req.workers = workers;
        for (const auto& b : baselines) req.baselines.insert(baseline_from_string(b));
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = trace_curve(req);
        }
        py::list out;
        for (const auto& r : rows) out.append(row_dict(r));
        return out;
      },
      py::arg("d"), py::arg("k"), py::arg("eta") = 1.0, py::arg("n_av_min") = 0.05, py::arg("n_av_max") = 4.0,
      py::arg("points") = 120, py::arg("baselines") = std::vector<std::string>{}, py::arg("workers") = 1);

  m.def(
      "optimal_probe",
      [](double n_av, double eta, int d_max, int k_max) {
        const auto p = optimal_probe(n_av, eta, d_max, k_max);
        return py::dict(py::arg("d") = p.d, py::arg("k") = p.k, py::arg("alpha") = p.alpha, py::arg("f_q") = p.f_q);
      },
      py::arg("n_av"), py::arg("eta") = 1.0, py::arg("d_max") = 16, py::arg("k_max") = 3);

  m.def(
      "end_to_end",
      [](int d, cplx alpha, double beta, long shots, std::uint64_t seed) {
        GenConfig cfg;
        cfg.d = d;
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.shots = shots;
        cfg.seed = seed;
        const auto rep = end_to_end(cfg);
        py::list outcomes;
        for (const auto& o : rep.outcomes) outcomes.append(outcome_dict(o));
        py::dict out;
        out["beta"] = rep.beta;
        out["bs_fidelity"] = rep.bs_fidelity;
        out["probability_sum"] = rep.probability_sum;
        out["frequencies_ok"] = rep.frequencies_ok;
        out["warnings"] = rep.warnings;
        out["outcomes"] = outcomes;
        return out;
      },
      py::arg("d"), py::arg("alpha"), py::arg("beta") = 0.0, py::arg("shots") = 10000, py::arg("seed") = 0);
}
