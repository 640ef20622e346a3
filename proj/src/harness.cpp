#include "qland/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <thread>
#include <tuple>

#include "qland/bounds.hpp"
#include "qland/errors.hpp"
#include "qland/losses.hpp"

namespace qland {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Runs body(i) for i in [0, n) on `threads` workers.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

bool is_sweep(Experiment e) {
  return e == Experiment::distance || e == Experiment::improvement || e == Experiment::nme_sweep;
}

nlohmann::json json_number(double x) {
  if (std::isnan(x)) return nullptr;
  return x;
}

double number_or_nan(const nlohmann::json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::verify_bounds:
      return "verify_bounds";
    case Experiment::landscape:
      return "landscape";
    case Experiment::distance:
      return "distance";
    case Experiment::improvement:
      return "improvement";
    case Experiment::nme_sweep:
      return "nme_sweep";
    case Experiment::expressivity:
      return "expressivity";
  }
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '-', '_');
  for (auto e : {Experiment::verify_bounds, Experiment::landscape, Experiment::distance,
                 Experiment::improvement, Experiment::nme_sweep, Experiment::expressivity}) {
    if (to_string(e) == key) return e;
  }
  throw DomainError("unknown experiment '" + name + "'");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw DomainError("unknown output format '" + name + "'");
}

SampleSpec SampleSpec::separable(std::size_t d) {
  std::vector<double> w(d, 0.0);
  w[0] = 1.0;
  return {"separable", std::move(w)};
}

SampleSpec SampleSpec::max_entangled(std::size_t d) {
  return {"max_entangled", std::vector<double>(d, 1.0 / static_cast<double>(d))};
}

TrainingSample SampleSpec::build(std::size_t d) const {
  TrainingSample s = make_nme(weights, d);
  s.label = label;
  return s;
}

void ExperimentConfig::validate() const {
  if (qubits == 0 || qubits > 12) throw DomainError("config: qubits must be in [1, 12]");
  if (repetitions == 0) throw DomainError("config: repetitions must be >= 1");
  if (threads == 0) throw DomainError("config: threads must be >= 1");
  if (experiment == Experiment::verify_bounds || experiment == Experiment::landscape) return;
  if (ansatz.empty()) throw DomainError("config: ansatz list is empty");
  for (const auto& a : ansatz) {
    if (a.layers.empty()) throw DomainError("config: ansatz " + to_string(a.family) + " has no layers");
    for (auto l : a.layers) {
      if (l == 0) throw DomainError("config: layer counts must be >= 1");
    }
  }
  if (experiment == Experiment::expressivity) {
    if (expressivity_bins == 0 || expressivity_samples < expressivity_bins) {
      throw DomainError("config: expressivity needs samples >= bins >= 1");
    }
    return;
  }
  if (radii.empty()) throw DomainError("config: radii must be nonempty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw DomainError("config: radii must be positive and strictly increasing");
    }
  }
  if (!(threshold > 0.0)) throw DomainError("config: threshold must be positive");
  optimizer.validate();
  (void)resolved_samples();
}

std::vector<SampleSpec> ExperimentConfig::resolved_samples() const {
  const std::size_t d = std::size_t{1} << qubits;
  std::vector<SampleSpec> out;
  auto add_family = [&] {
    for (auto& m : nme_families(d)) out.push_back({m.label, m.weights});
  };
  if (sample_kinds.empty()) {
    switch (experiment) {
      case Experiment::nme_sweep:
        add_family();
        break;
      case Experiment::improvement:
        out.push_back(SampleSpec::separable(d));
        out.push_back(SampleSpec::max_entangled(d));
        break;
      default:
        out.push_back(SampleSpec::separable(d));
        break;
    }
  } else {
    if (!sample_kinds.is_array()) throw DomainError("config: sample_kinds must be an array");
    for (const auto& entry : sample_kinds) {
      if (entry.is_string()) {
        const auto name = entry.get<std::string>();
        if (name == "separable") {
          out.push_back(SampleSpec::separable(d));
        } else if (name == "max_entangled") {
          out.push_back(SampleSpec::max_entangled(d));
        } else if (name == "nme") {
          add_family();
        } else {
          throw DomainError("config: unknown sample kind '" + name + "'");
        }
      } else if (entry.is_object()) {
        for (const auto& [key, _] : entry.items()) {
          if (key != "label" && key != "weights") {
            throw DomainError("config: unknown sample field '" + key + "'");
          }
        }
        SampleSpec s{entry.at("label").get<std::string>(),
                     entry.at("weights").get<std::vector<double>>()};
        s.weights.resize(std::max(s.weights.size(), d), 0.0);
        if (s.weights.size() > d) throw DomainError("config: sample '" + s.label + "' has too many weights");
        (void)s.build(d);
        out.push_back(std::move(s));
      } else {
        throw DomainError("config: sample_kinds entries must be strings or objects");
      }
    }
  }
  std::vector<SampleSpec> unique;
  std::set<std::string> seen;
  for (auto& s : out) {
    if (seen.insert(s.label).second) unique.push_back(std::move(s));
  }
  if (is_sweep(experiment) && !seen.count("separable")) {
    unique.insert(unique.begin(), SampleSpec::separable(d));
  }
  return unique;
}

ExperimentConfig default_config(Experiment e, bool full_scale) {
  ExperimentConfig c;
  c.experiment = e;
  c.qubits = full_scale ? 5 : 3;
  std::vector<std::size_t> layers = full_scale ? std::vector<std::size_t>{1, 4, 8, 12, 16}
                                                : std::vector<std::size_t>{1, 4, 8};
  for (auto f : {AnsatzFamily::no_entanglement, AnsatzFamily::crx_entanglement,
                 AnsatzFamily::cz_entanglement, AnsatzFamily::circular_entanglement}) {
    c.ansatz.push_back({f, layers});
  }
  if (e == Experiment::expressivity) c.repetitions = 1;
  return c;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  static const std::set<std::string> kFields = {
      "experiment", "ansatz",  "qubits",    "sample_kinds", "radii",     "repetitions",
      "master_seed", "output", "format",    "optimizer",    "threads",   "expressivity",
      "threshold"};
  if (!j.is_object()) throw DomainError("config: expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kFields.count(key)) throw DomainError("config: unknown field '" + key + "'");
  }
  ExperimentConfig c = default_config(experiment_from_string(j.at("experiment").get<std::string>()));
  try {
    if (j.contains("ansatz")) {
      c.ansatz.clear();
      for (const auto& a : j.at("ansatz")) {
        for (const auto& [key, _] : a.items()) {
          if (key != "family" && key != "layers") {
            throw DomainError("config: unknown ansatz field '" + key + "'");
          }
        }
        c.ansatz.push_back({ansatz_family_from_string(a.at("family").get<std::string>()),
                            a.at("layers").get<std::vector<std::size_t>>()});
      }
    }
    if (j.contains("qubits")) c.qubits = j.at("qubits").get<std::size_t>();
    if (j.contains("sample_kinds")) c.sample_kinds = j.at("sample_kinds");
    if (j.contains("radii")) {
      const auto& r = j.at("radii");
      if (r.is_object()) {
        for (const auto& [key, _] : r.items()) {
          if (key != "start" && key != "stop" && key != "count") {
            throw DomainError("config: unknown radii field '" + key + "'");
          }
        }
        c.radii = linear_radii(r.at("start").get<double>(), r.at("stop").get<double>(),
                               r.at("count").get<std::size_t>());
      } else {
        c.radii = r.get<std::vector<double>>();
      }
    }
    if (j.contains("repetitions")) c.repetitions = j.at("repetitions").get<std::size_t>();
    if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("format")) c.format = output_format_from_string(j.at("format").get<std::string>());
    if (j.contains("threads")) c.threads = j.at("threads").get<std::size_t>();
    if (j.contains("threshold")) c.threshold = j.at("threshold").get<double>();
    if (j.contains("optimizer")) {
      for (const auto& [key, v] : j.at("optimizer").items()) {
        if (key == "max_iterations") {
          c.optimizer.max_iterations = v.get<std::size_t>();
        } else if (key == "restarts") {
          c.optimizer.restarts = v.get<std::size_t>();
        } else if (key == "tolerance") {
          c.optimizer.tolerance = v.get<double>();
        } else if (key == "fd_step") {
          c.optimizer.fd_step = v.get<double>();
        } else {
          throw DomainError("config: unknown optimizer field '" + key + "'");
        }
      }
    }
    if (j.contains("expressivity")) {
      for (const auto& [key, v] : j.at("expressivity").items()) {
        if (key == "samples") {
          c.expressivity_samples = v.get<std::size_t>();
        } else if (key == "bins") {
          c.expressivity_bins = v.get<std::size_t>();
        } else {
          throw DomainError("config: unknown expressivity field '" + key + "'");
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json ansatz = nlohmann::json::array();
  for (const auto& a : c.ansatz) ansatz.push_back({{"family", to_string(a.family)}, {"layers", a.layers}});
  return {{"experiment", to_string(c.experiment)},
          {"ansatz", std::move(ansatz)},
          {"qubits", c.qubits},
          {"sample_kinds", c.sample_kinds},
          {"radii", c.radii},
          {"repetitions", c.repetitions},
          {"master_seed", c.master_seed},
          {"output", c.output},
          {"format", to_string(c.format)},
          {"threads", c.threads},
          {"threshold", c.threshold},
          {"optimizer",
           {{"max_iterations", c.optimizer.max_iterations},
            {"restarts", c.optimizer.restarts},
            {"tolerance", c.optimizer.tolerance},
            {"fd_step", c.optimizer.fd_step}}},
          {"expressivity", {{"samples", c.expressivity_samples}, {"bins", c.expressivity_bins}}}};
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (!is_sweep(config.experiment)) {
    throw DomainError("run_experiment: " + to_string(config.experiment) + " is not a sweep experiment");
  }
  const std::size_t d = std::size_t{1} << config.qubits;
  const auto specs = config.resolved_samples();
  std::vector<TrainingSample> samples;
  for (const auto& s : specs) samples.push_back(s.build(d));
  const auto sep_index = static_cast<std::size_t>(
      std::find_if(specs.begin(), specs.end(), [](const SampleSpec& s) { return s.label == "separable"; }) -
      specs.begin());

  struct Task {
    std::size_t entry;
    AnsatzSpec spec;
    std::size_t rep;
  };
  std::vector<Task> tasks;
  for (std::size_t e = 0; e < config.ansatz.size(); ++e) {
    for (auto l : config.ansatz[e].layers) {
      for (std::size_t r = 0; r < config.repetitions; ++r) {
        tasks.push_back({e, AnsatzSpec{config.ansatz[e].family, config.qubits, l}, r});
      }
    }
  }

  std::vector<std::vector<RunRecord>> slots(tasks.size());
  parallel_for(tasks.size(), config.threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    const std::uint64_t seed =
        derive_seed(config.master_seed, {static_cast<std::uint64_t>(task.spec.family),
                                         task.spec.layers, task.rep});
    std::vector<RunRecord> out(samples.size());
    for (std::size_t s = 0; s < samples.size(); ++s) {
      RunRecord& r = out[s];
      r.experiment = to_string(config.experiment);
      r.ansatz = task.spec.family;
      r.layers = task.spec.layers;
      r.qubits = config.qubits;
      r.sample_kind = samples[s].label;
      r.schmidt_rank = samples[s].schmidt.rank;
      r.entanglement_entropy = entanglement_entropy(samples[s]);
      r.seed = seed;
    }
    try {
      Rng rng(seed);
      const Circuit circuit(task.spec);
      const ParameterVector theta_target = random_parameters(circuit.param_count(), rng);
      const ParameterVector theta0 = random_parameters(circuit.param_count(), rng);
      const UnitaryMatrix target = circuit.unitary(theta_target);
      for (std::size_t s = 0; s < samples.size(); ++s) {
        const SampleLoss loss(task.spec, target, samples[s]);
        OptimizerSettings opt = config.optimizer;
        opt.seed = derive_seed(seed, {s});
        RunRecord& r = out[s];
        r.start_loss = loss(theta0);
        r.curve = radius_sweep(std::cref(loss), theta0, config.radii, opt);
        r.distance_to_min = distance_to_minimum(r.curve, config.threshold);
      }
      const double r_max = out[sep_index].distance_to_min.value_or(config.radii.back());
      for (auto& r : out) {
        r.r_max = r_max;
        r.improvement = improvement_from_curve(r.curve, r.start_loss, r_max);
      }
    } catch (const std::exception& e) {
      for (auto& r : out) {
        r.error = e.what();
        r.start_loss = r.improvement = r.r_max = kNaN;
        r.curve.points.clear();
        r.distance_to_min.reset();
      }
    }
    slots[t] = std::move(out);
  });

  std::vector<RunRecord> records;
  std::vector<std::tuple<std::size_t, std::size_t, double, std::string, std::size_t>> keys;
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    for (auto& r : slots[t]) records.push_back(std::move(r));
  }
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t t = i / samples.size();
    keys.emplace_back(tasks[t].entry, records[i].layers, records[i].entanglement_entropy,
                      records[i].sample_kind, tasks[t].rep);
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<RunRecord> sorted;
  sorted.reserve(records.size());
  for (std::size_t i : order) {
    sorted.push_back(std::move(records[i]));
    sorted.back().run_id = sorted.size() - 1;
  }
  return sorted;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    const std::string prefix = std::to_string(r.run_id) + ',' + r.experiment + ',' +
                               to_string(r.ansatz) + ',' + std::to_string(r.layers) + ',' +
                               std::to_string(r.qubits) + ',' + csv_field(r.sample_kind) + ',' +
                               std::to_string(r.schmidt_rank) + ',' + fmt(r.entanglement_entropy) +
                               ',' + std::to_string(r.seed) + ',';
    const std::string suffix = fmt(r.start_loss) + ',' +
                               (r.distance_to_min ? fmt(*r.distance_to_min) : std::string()) + ',' +
                               fmt(r.improvement);
    if (r.curve.points.empty()) {
      out << prefix << ",,," << suffix << '\n';
      continue;
    }
    for (const auto& p : r.curve.points) {
      out << prefix << fmt(p.radius) << ',' << fmt(p.raw_min_loss) << ','
          << fmt(p.envelope_min_loss) << ',' << suffix << '\n';
    }
  }
}

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : r.curve.points) {
    points.push_back({{"radius", p.radius},
                      {"raw_min_loss", p.raw_min_loss},
                      {"envelope_min_loss", p.envelope_min_loss},
                      {"evaluations", p.evaluations},
                      {"best_theta", std::vector<double>(p.best_theta.data(),
                                                         p.best_theta.data() + p.best_theta.size())}});
  }
  nlohmann::json j = {{"run_id", r.run_id},
                      {"experiment", r.experiment},
                      {"ansatz", to_string(r.ansatz)},
                      {"layers", r.layers},
                      {"qubits", r.qubits},
                      {"sample_kind", r.sample_kind},
                      {"schmidt_rank", r.schmidt_rank},
                      {"entanglement_entropy", r.entanglement_entropy},
                      {"seed", r.seed},
                      {"start_loss", json_number(r.start_loss)},
                      {"distance_to_min", r.distance_to_min ? nlohmann::json(*r.distance_to_min) : nlohmann::json()},
                      {"r_max", json_number(r.r_max)},
                      {"improvement", json_number(r.improvement)},
                      {"curve", std::move(points)}};
  if (r.error) j["error"] = *r.error;
  return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.run_id = j.at("run_id").get<std::size_t>();
  r.experiment = j.at("experiment").get<std::string>();
  r.ansatz = ansatz_family_from_string(j.at("ansatz").get<std::string>());
  r.layers = j.at("layers").get<std::size_t>();
  r.qubits = j.at("qubits").get<std::size_t>();
  r.sample_kind = j.at("sample_kind").get<std::string>();
  r.schmidt_rank = j.at("schmidt_rank").get<std::size_t>();
  r.entanglement_entropy = j.at("entanglement_entropy").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.start_loss = number_or_nan(j.at("start_loss"));
  if (!j.at("distance_to_min").is_null()) r.distance_to_min = j.at("distance_to_min").get<double>();
  r.r_max = number_or_nan(j.at("r_max"));
  r.improvement = number_or_nan(j.at("improvement"));
  for (const auto& p : j.at("curve")) {
    const auto theta = p.at("best_theta").get<std::vector<double>>();
    r.curve.points.push_back({p.at("radius").get<double>(), p.at("raw_min_loss").get<double>(),
                              p.at("envelope_min_loss").get<double>(),
                              Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(theta.size())),
                              p.at("evaluations").get<std::size_t>()});
  }
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  return r;
}

nlohmann::json records_to_json(const std::vector<RunRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) arr.push_back(to_json(r));
  return arr;
}

std::vector<RunRecord> records_from_json(const nlohmann::json& j) {
  std::vector<RunRecord> out;
  for (const auto& r : j) out.push_back(run_record_from_json(r));
  return out;
}

Eigen::MatrixXd landscape_grid(std::size_t resolution, SampleKind kind) {
  if (resolution < 2) throw DomainError("landscape_grid: resolution must be >= 2");
  if (kind == SampleKind::nme) throw DomainError("landscape_grid: use separable or max_entangled");
  const AnsatzSpec spec{AnsatzFamily::no_entanglement, 1, 1};
  const TrainingSample sample =
      kind == SampleKind::separable ? make_nme({1.0, 0.0}, 2) : make_max_entangled(2);
  const SampleLoss loss(spec, UnitaryMatrix::identity(2), sample);
  const auto n = static_cast<Eigen::Index>(resolution);
  Eigen::MatrixXd grid(n, n);
  ParameterVector theta(2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      theta << 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1),
          2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n - 1);
      grid(i, j) = loss(theta);
    }
  }
  return grid;
}

LandscapeResult landscape(std::size_t resolution) {
  return {resolution, landscape_grid(resolution, SampleKind::separable),
          landscape_grid(resolution, SampleKind::max_entangled)};
}

void write_csv(std::ostream& out, const LandscapeResult& result) {
  out << "theta1,theta2,sample_kind,loss\n";
  const auto n = static_cast<Eigen::Index>(result.resolution);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(n - 1);
  for (const auto& [name, grid] : {std::pair{"separable", &result.separable},
                                   std::pair{"max_entangled", &result.max_entangled}}) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        out << fmt(step * static_cast<double>(i)) << ',' << fmt(step * static_cast<double>(j)) << ','
            << name << ',' << fmt((*grid)(i, j)) << '\n';
      }
    }
  }
}

nlohmann::json to_json(const LandscapeResult& result) {
  auto rows = [](const Eigen::MatrixXd& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::vector<double> row(static_cast<std::size_t>(m.cols()));
      for (Eigen::Index j = 0; j < m.cols(); ++j) row[static_cast<std::size_t>(j)] = m(i, j);
      out.push_back(std::move(row));
    }
    return out;
  };
  std::vector<double> thetas(result.resolution);
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    thetas[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(result.resolution - 1);
  }
  return {{"resolution", result.resolution},
          {"thetas", thetas},
          {"separable", rows(result.separable)},
          {"max_entangled", rows(result.max_entangled)}};
}

std::vector<ExpressivityRecord> run_expressivity(const ExperimentConfig& config) {
  config.validate();
  struct Task {
    AnsatzSpec spec;
    std::size_t rep;
  };
  std::vector<Task> tasks;
  for (const auto& a : config.ansatz) {
    for (auto l : a.layers) {
      for (std::size_t r = 0; r < config.repetitions; ++r) {
        tasks.push_back({AnsatzSpec{a.family, config.qubits, l}, r});
      }
    }
  }
  std::vector<ExpressivityRecord> out(tasks.size());
  parallel_for(tasks.size(), config.threads, [&](std::size_t t) {
    const Task& task = tasks[t];
    const std::uint64_t seed = derive_seed(
        config.master_seed, {static_cast<std::uint64_t>(task.spec.family), task.spec.layers, task.rep});
    Rng rng(seed);
    out[t] = {task.spec.family, task.spec.layers, task.spec.qubits, task.rep, seed,
              expressivity(task.spec, config.expressivity_samples, config.expressivity_bins, rng)};
  });
  return out;
}

void write_csv(std::ostream& out, const std::vector<ExpressivityRecord>& records) {
  out << "ansatz,layers,qubits,repetition,seed,params,samples,bins,expr\n";
  for (const auto& r : records) {
    out << to_string(r.ansatz) << ',' << r.layers << ',' << r.qubits << ',' << r.repetition << ','
        << r.seed << ',' << param_count({r.ansatz, r.qubits, r.layers}) << ','
        << r.report.n_samples << ',' << r.report.n_bins << ',' << fmt(r.report.expr) << '\n';
  }
}

nlohmann::json to_json(const std::vector<ExpressivityRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"ansatz", to_string(r.ansatz)},
                   {"layers", r.layers},
                   {"qubits", r.qubits},
                   {"repetition", r.repetition},
                   {"seed", r.seed},
                   {"params", param_count({r.ansatz, r.qubits, r.layers})},
                   {"samples", r.report.n_samples},
                   {"bins", r.report.n_bins},
                   {"expr", r.report.expr},
                   {"histogram", r.report.histogram}});
  }
  return arr;
}

namespace {

struct CheckAccumulator {
  BoundCheck check;
  void record(double error) {
    ++check.trials;
    if (!(error <= check.tolerance)) ++check.failures;
    if (std::isnan(error) || error > check.max_error) check.max_error = error;
  }
};

CheckAccumulator make_check(const std::string& name, std::size_t d, double tol) {
  return CheckAccumulator{BoundCheck{name, d, 0, 0, 0.0, tol}};
}

}  // namespace

std::vector<BoundCheck> verify_bounds(const std::vector<std::size_t>& dims, std::size_t trials,
                                      std::uint64_t seed) {
  if (trials == 0) throw DomainError("verify_bounds: trials must be >= 1");
  std::vector<BoundCheck> out;
  for (std::size_t d : dims) {
    if (d < 2) throw DomainError("verify_bounds: dimensions must be >= 2");
    Rng rng(derive_seed(seed, {d}));
    auto tight_f = make_check("min_distance_operator_fidelity", d, 1e-9);
    auto tight_d = make_check("min_distance_operator_distance", d, 1e-9);
    auto ent_lb = make_check("entangled_distance_lower_bound", d, 1e-8);
    auto trace = make_check("trace_identity", d, 1e-10);
    auto ball = make_check("separable_ball_boundary", d, 1e-9);
    const TrainingSample phi = make_max_entangled(d);
    for (std::size_t t = 0; t < trials; ++t) {
      const UnitaryMatrix u = haar_random_unitary(d, rng);
      const UnitaryMatrix v = haar_random_unitary(d, rng);
      const TrainingSample psi = make_separable(d, rng);
      const double f_v = sample_loss(u, v, psi).fidelity;
      const double f_w = rng.uniform();
      const UnitaryMatrix w = construct_min_distance_operator(u, v, psi, f_w);
      tight_f.record(std::abs(sample_loss(u, w, psi).fidelity - f_w));
      tight_d.record(std::abs(frobenius_phase_distance(v, w) - min_distance_separable(f_v, f_w)));

      const UnitaryMatrix w2 = haar_random_unitary(d, rng);
      const double fv_ent = sample_loss(u, v, phi).fidelity;
      const double fw_ent = sample_loss(u, w2, phi).fidelity;
      ent_lb.record(std::max(0.0, min_distance_entangled_lb(fv_ent, fw_ent, d) -
                                      frobenius_phase_distance(v, w2)));

      const double via_trace = maxent_loss_from_trace(u, v).loss;
      trace.record(std::abs(via_trace - sample_loss(u, v, phi).loss));

      const BallGeometry g = ball_max_fidelity_separable(f_v, rng.uniform() * 0.999 * 2.0 *
                                                                   std::sqrt(std::max(0.0, 1.0 - std::sqrt(f_v))));
      if (g.radius > 0.0 && g.max_fidelity < 1.0) {
        const UnitaryMatrix wb = construct_min_distance_operator(u, v, psi, g.max_fidelity);
        ball.record(std::max(std::abs(sample_loss(u, wb, psi).fidelity - g.max_fidelity),
                             frobenius_phase_distance(v, wb) - g.radius));
      }
    }
    for (auto* c : {&tight_f, &tight_d, &ent_lb, &trace, &ball}) out.push_back(c->check);

    auto ratio = make_check("improvement_ratio_bound", d, 0.0);
    const auto qubits = static_cast<std::size_t>(std::llround(std::log2(static_cast<double>(d))));
    if ((std::size_t{1} << qubits) == d) {
      for (double loss : {0.2, 0.5, 0.8}) {
        const double r_sep = 2.0 * std::sqrt(1.0 - std::sqrt(1.0 - loss));
        for (int k = 1; k <= 8; ++k) {
          const double radius = r_sep * k / 8.0;
          const double ratio_value = improvement_entangled_ub(1.0 - loss, radius, d).value /
                                     improvement_separable(1.0 - loss, radius).value;
          ratio.record(std::max(0.0, ratio_value - improvement_ratio_bound(loss, radius, qubits)));
        }
      }
      out.push_back(ratio.check);
    }
  }
  auto sine = make_check("sine_envelopes", 0, 1e-12);
  for (int i = 0; i < 400; ++i) {
    const double x = std::numbers::pi * i / 399.0;
    sine.record(std::max({0.0, std::sin(x) - sine_upper_parabola(x), sine_lower_piecewise(x) - std::sin(x)}));
  }
  out.push_back(sine.check);
  return out;
}

void write_csv(std::ostream& out, const std::vector<BoundCheck>& checks) {
  out << "check,dim,trials,failures,max_error,tolerance,passed\n";
  for (const auto& c : checks) {
    out << c.name << ',' << c.dim << ',' << c.trials << ',' << c.failures << ',' << fmt(c.max_error)
        << ',' << fmt(c.tolerance) << ',' << (c.passed() ? "true" : "false") << '\n';
  }
}

nlohmann::json to_json(const std::vector<BoundCheck>& checks) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"check", c.name},
                   {"dim", c.dim},
                   {"trials", c.trials},
                   {"failures", c.failures},
                   {"max_error", json_number(c.max_error)},
                   {"tolerance", c.tolerance},
                   {"passed", c.passed()}});
  }
  return arr;
}

}  // namespace qland
