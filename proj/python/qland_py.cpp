#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "qland/bounds.hpp"
#include "qland/errors.hpp"
#include "qland/harness.hpp"
#include "qland/losses.hpp"

namespace py = pybind11;
using namespace qland;

namespace {

TrainingSample sample_for(std::size_t d, const std::string& kind,
                          const std::optional<std::vector<double>>& weights) {
  if (weights) return make_nme(*weights, d);
  if (kind == "separable") return make_nme({1.0}, d);
  if (kind == "max_entangled") return make_max_entangled(d);
  throw DomainError("sample kind must be 'separable' or 'max_entangled' unless weights are given");
}

py::dict geometry_dict(const BallGeometry& g) {
  py::dict out;
  out["radius"] = g.radius;
  out["beta"] = g.beta;
  out["threshold_radius"] = g.threshold_radius;
  out["max_fidelity"] = g.max_fidelity;
  out["is_upper_bound"] = g.is_upper_bound;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Unitary-learning loss landscapes with entangled training samples";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("haar_random_unitary", [](std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    return haar_random_unitary(d, rng).matrix();
  }, py::arg("d"), py::arg("seed") = 0);

  m.def("param_count", [](const std::string& family, std::size_t qubits, std::size_t layers) {
    return param_count({ansatz_family_from_string(family), qubits, layers});
  }, py::arg("family"), py::arg("qubits"), py::arg("layers"));

  m.def("build_unitary", [](const std::string& family, std::size_t qubits, std::size_t layers,
                            const Eigen::VectorXd& theta) {
    return build_unitary({ansatz_family_from_string(family), qubits, layers}, theta).matrix();
  }, py::arg("family"), py::arg("qubits"), py::arg("layers"), py::arg("theta"));

  m.def("sample_loss", [](const CMatrix& target, const CMatrix& hypothesis, const std::string& kind,
                          const std::optional<std::vector<double>>& weights) {
    const UnitaryMatrix u(target);
    return sample_loss(u, UnitaryMatrix(hypothesis), sample_for(u.dim(), kind, weights)).loss;
  }, py::arg("target"), py::arg("hypothesis"), py::arg("kind") = "separable", py::arg("weights") = py::none(),
  "1 - |<alpha|(U^dagger V (x) I)|alpha>|^2 on computational Schmidt bases.");

  m.def("maxent_loss_from_trace", [](const CMatrix& u, const CMatrix& v) {
    return maxent_loss_from_trace(UnitaryMatrix(u), UnitaryMatrix(v)).loss;
  });
  m.def("frobenius_phase_distance", [](const CMatrix& u, const CMatrix& v) {
    return frobenius_phase_distance(UnitaryMatrix(u), UnitaryMatrix(v));
  });
  m.def("qnfl_lower_bound", &qnfl_lower_bound, py::arg("d"), py::arg("rank"), py::arg("training_size"));
  m.def("entanglement_entropy", py::overload_cast<const std::vector<double>&>(&entanglement_entropy));

  m.def("min_distance_separable", &min_distance_separable, py::arg("f_v"), py::arg("f_w"));
  m.def("min_distance_entangled_lb", &min_distance_entangled_lb, py::arg("f_v"), py::arg("f_w"), py::arg("d"));
  m.def("ball_max_fidelity_separable", [](double f_v, double r) {
    return geometry_dict(ball_max_fidelity_separable(f_v, r));
  }, py::arg("f_v"), py::arg("radius"));
  m.def("ball_max_fidelity_entangled_ub", [](double f_v, double r, std::size_t d) {
    return geometry_dict(ball_max_fidelity_entangled_ub(f_v, r, d));
  }, py::arg("f_v"), py::arg("radius"), py::arg("d"));
  m.def("improvement_separable", [](double f_v, double r) { return improvement_separable(f_v, r).value; },
        py::arg("f_v"), py::arg("radius"));
  m.def("improvement_entangled_ub", [](double f_v, double r, std::size_t d) {
    return improvement_entangled_ub(f_v, r, d).value;
  }, py::arg("f_v"), py::arg("radius"), py::arg("d"));
  m.def("improvement_ratio_bound", &improvement_ratio_bound, py::arg("loss"), py::arg("radius"), py::arg("qubits"));

  m.def("haar_bin_probability", &haar_bin_probability, py::arg("a"), py::arg("b"), py::arg("d"));
  m.def("expressivity", [](const std::string& family, std::size_t qubits, std::size_t layers,
                           std::size_t samples, std::size_t bins, std::uint64_t seed) {
    Rng rng(seed);
    const ExpressivityReport r = expressivity({ansatz_family_from_string(family), qubits, layers}, samples, bins, rng);
    py::dict out;
    out["expr"] = r.expr;
    out["histogram"] = r.histogram;
    out["n_samples"] = r.n_samples;
    out["n_bins"] = r.n_bins;
    return out;
  }, py::arg("family"), py::arg("qubits"), py::arg("layers"), py::arg("samples") = 5000,
     py::arg("bins") = 75, py::arg("seed") = 0);

  m.def("landscape_grid", [](std::size_t resolution, const std::string& kind) {
    return landscape_grid(resolution, sample_kind_from_string(kind));
  }, py::arg("resolution") = 101, py::arg("kind") = "separable");

  m.def("_run_experiment_json", [](const std::string& config) {
    const ExperimentConfig c = config_from_json(nlohmann::json::parse(config));
    std::vector<RunRecord> records;
    {
      py::gil_scoped_release release;
      records = run_experiment(c);
    }
    return records_to_json(records).dump();
  });

  m.def("_verify_bounds_json", [](const std::vector<std::size_t>& dims, std::size_t trials, std::uint64_t seed) {
    return to_json(verify_bounds(dims, trials, seed)).dump();
  });
}
