#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qland/optimize.hpp"
#include "qland/pqc.hpp"
#include "qland/samples.hpp"

namespace qland {

enum class Experiment { verify_bounds, landscape, distance, improvement, nme_sweep, expressivity };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& name);

struct AnsatzEntry {
  AnsatzFamily family;
  std::vector<std::size_t> layers;
};

/// One training-sample recipe. Separable samples are |0>|0>, the others are
/// built on computational Schmidt bases from `weights`.
struct SampleSpec {
  std::string label;
  std::vector<double> weights;

  static SampleSpec separable(std::size_t d);
  static SampleSpec max_entangled(std::size_t d);
  TrainingSample build(std::size_t d) const;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::distance;
  std::vector<AnsatzEntry> ansatz;
  std::size_t qubits = 3;
  /// Entries: "separable", "max_entangled", "nme" (the whole NME family set)
  /// or {"label": ..., "weights": [...]}. Empty means the experiment default.
  nlohmann::json sample_kinds = nlohmann::json::array();
  std::vector<double> radii = default_radii();
  std::size_t repetitions = 24;
  std::uint64_t master_seed = 0;
  /// Empty writes to stdout.
  std::string output;
  OutputFormat format = OutputFormat::csv;
  OptimizerSettings optimizer;
  std::size_t threads = 1;
  std::size_t expressivity_samples = 5000;
  std::size_t expressivity_bins = 75;
  double threshold = 1e-3;

  /// Throws DomainError on an inconsistent configuration.
  void validate() const;

  /// Sample recipes after expanding defaults and "nme".
  std::vector<SampleSpec> resolved_samples() const;
};

/// Desk defaults: n = 3, layers {1, 4, 8}, 24 repetitions, all four families.
/// full_scale switches to n = 5 and layers {1, 4, 8, 12, 16}.
ExperimentConfig default_config(Experiment e, bool full_scale = false);

/// Parses the JSON config format. Unknown fields throw DomainError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);

struct RunRecord {
  std::size_t run_id = 0;
  std::string experiment;
  AnsatzFamily ansatz = AnsatzFamily::no_entanglement;
  std::size_t layers = 0;
  std::size_t qubits = 0;
  std::string sample_kind;
  std::size_t schmidt_rank = 0;
  double entanglement_entropy = 0.0;
  std::uint64_t seed = 0;
  double start_loss = 0.0;
  SweepCurve curve;
  std::optional<double> distance_to_min;
  double r_max = 0.0;
  double improvement = 0.0;
  /// Set when the run failed; the numeric fields are then NaN.
  std::optional<std::string> error;
};

/// Runs a distance, improvement or nme_sweep experiment.
///
/// Records are ordered by (ansatz entry, layers, entanglement entropy,
/// sample label, repetition) and numbered in that order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

inline const char* const kCsvHeader =
    "run_id,experiment,ansatz,layers,qubits,sample_kind,schmidt_rank,entanglement_entropy,seed,"
    "radius,raw_min_loss,envelope_min_loss,start_loss,distance_to_min,improvement";

void write_csv(std::ostream& out, const std::vector<RunRecord>& records);
nlohmann::json to_json(const RunRecord& r);
RunRecord run_record_from_json(const nlohmann::json& j);
nlohmann::json records_to_json(const std::vector<RunRecord>& records);
std::vector<RunRecord> records_from_json(const nlohmann::json& j);

/// Loss of the one-qubit RX-then-RZ ansatz against U = V(0, 0) = I on a
/// resolution x resolution grid. Entry (i, j) is at (theta_i, theta_j) with
/// theta_k = 2 pi k / (resolution - 1), so the last row and column repeat
/// the first up to periodicity.
Eigen::MatrixXd landscape_grid(std::size_t resolution, SampleKind kind);

struct LandscapeResult {
  std::size_t resolution;
  Eigen::MatrixXd separable;
  Eigen::MatrixXd max_entangled;
};

LandscapeResult landscape(std::size_t resolution);
void write_csv(std::ostream& out, const LandscapeResult& result);
nlohmann::json to_json(const LandscapeResult& result);

struct ExpressivityRecord {
  AnsatzFamily ansatz;
  std::size_t layers;
  std::size_t qubits;
  std::size_t repetition;
  std::uint64_t seed;
  ExpressivityReport report;
};

std::vector<ExpressivityRecord> run_expressivity(const ExperimentConfig& config);
void write_csv(std::ostream& out, const std::vector<ExpressivityRecord>& records);
nlohmann::json to_json(const std::vector<ExpressivityRecord>& records);

struct BoundCheck {
  std::string name;
  std::size_t dim;
  std::size_t trials;
  std::size_t failures;
  double max_error;
  double tolerance;
  bool passed() const { return failures == 0; }
};

/// Randomised checks of the closed-form bounds at each dimension.
std::vector<BoundCheck> verify_bounds(const std::vector<std::size_t>& dims, std::size_t trials,
                                      std::uint64_t seed);
void write_csv(std::ostream& out, const std::vector<BoundCheck>& checks);
nlohmann::json to_json(const std::vector<BoundCheck>& checks);

}  // namespace qland
