#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qland/qcore.hpp"
#include "qland/samples.hpp"

namespace qland {

/// Real circuit parameters, in radians.
using ParameterVector = Eigen::VectorXd;

enum class AnsatzFamily {
  no_entanglement,        ///< RX, RZ on every qubit.
  crx_entanglement,       ///< RX, RZ on every qubit, CRX ladder with one shared angle.
  cz_entanglement,        ///< H on every qubit, CZ ladder, RX on every qubit.
  circular_entanglement,  ///< RY, CNOT ring, RY, reversed CNOT ring.
};

std::string to_string(AnsatzFamily family);
AnsatzFamily ansatz_family_from_string(const std::string& name);

struct AnsatzSpec {
  AnsatzFamily family = AnsatzFamily::no_entanglement;
  std::size_t qubits = 1;
  std::size_t layers = 1;

  std::size_t dim() const { return std::size_t{1} << qubits; }
  bool operator==(const AnsatzSpec&) const = default;
};

nlohmann::json to_json(const AnsatzSpec& spec);
AnsatzSpec ansatz_from_json(const nlohmann::json& j);

enum class GateKind { rx, ry, rz, h, cz, cnot, crx };

struct Gate {
  GateKind kind;
  int target;
  int control = -1;
  /// Index into the parameter vector; -1 for fixed gates.
  int param = -1;
};

/// Gate list of an ansatz plus a dense simulator for it.
///
/// Qubit 0 is the most significant bit of the basis index.
class Circuit {
 public:
  explicit Circuit(const AnsatzSpec& spec);

  const AnsatzSpec& spec() const { return spec_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t param_count() const { return param_count_; }
  std::size_t dim() const { return spec_.dim(); }

  /// Applies V(theta) to every column of `columns` (d x k) in place.
  void apply(CMatrix& columns, const ParameterVector& theta) const;

  UnitaryMatrix unitary(const ParameterVector& theta) const;

  /// V(theta)|0...0>.
  CVector state(const ParameterVector& theta) const;

 private:
  void check_length(const ParameterVector& theta) const;

  AnsatzSpec spec_;
  std::vector<Gate> gates_;
  std::size_t param_count_ = 0;
};

std::size_t param_count(const AnsatzSpec& spec);

/// Dense unitary of the ansatz. Throws DimensionError on a length mismatch.
UnitaryMatrix build_unitary(const AnsatzSpec& spec, const ParameterVector& theta);

/// Uniform draw from [0, 2 pi)^p.
ParameterVector random_parameters(std::size_t count, Rng& rng);

/// theta -> L_{U,alpha}(V(theta)) for a fixed target and sample.
///
/// The sample enters through its compact Schmidt form X_r diag(sqrt c_r), so
/// the cost per evaluation scales with the Schmidt rank, not with dim_r.
class SampleLoss {
 public:
  SampleLoss(const AnsatzSpec& spec, const UnitaryMatrix& target, const TrainingSample& sample);

  double operator()(const ParameterVector& theta) const;

  const Circuit& circuit() const { return circuit_; }

 private:
  Circuit circuit_;
  CMatrix compact_;
  CMatrix target_image_;
};

/// Central-difference gradient of the sample loss in theta.
ParameterVector loss_gradient(const AnsatzSpec& spec, const ParameterVector& theta,
                              const UnitaryMatrix& target, const TrainingSample& sample,
                              double step = 1e-6);

struct ExpressivityReport {
  double expr;
  std::vector<std::size_t> histogram;
  std::size_t n_samples;
  std::size_t n_bins;
};

/// Haar mass of [a, b): (1 - a)^(d-1) - (1 - b)^(d-1).
double haar_bin_probability(double a, double b, std::size_t d);

/// Bins fidelities into `bins` equal cells on [0, 1] (last cell closed) and
/// returns the discrete KL divergence against the Haar bin masses for
/// dimension d. Empty cells contribute zero.
ExpressivityReport fidelity_kl_divergence(std::span<const double> fidelities, std::size_t bins,
                                          std::size_t d);

/// KL-divergence expressivity: fidelities |<0|V(theta)^dagger V(rho)|0>|^2
/// for `samples` independent uniform pairs (theta, rho).
ExpressivityReport expressivity(const AnsatzSpec& spec, std::size_t samples, std::size_t bins,
                                Rng& rng);

}  // namespace qland
