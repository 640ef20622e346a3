#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qland/qcore.hpp"

namespace qland {

enum class SampleKind { separable, max_entangled, nme };

std::string to_string(SampleKind kind);
SampleKind sample_kind_from_string(const std::string& name);

/// A training input |alpha> together with its Schmidt data.
struct TrainingSample {
  StateVector state;
  SchmidtData schmidt;
  SampleKind kind;
  /// Free-form tag used in experiment output (e.g. "nme_r4_l0.5").
  std::string label;

  std::size_t dim_x() const { return state.dim_x(); }
  std::size_t dim_r() const { return state.dim_r(); }
};

/// Kind implied by a Schmidt spectrum on a dim_x-dimensional system.
SampleKind classify(const SchmidtData& schmidt, std::size_t dim_x);

/// Wraps an arbitrary state: decomposes it and infers the kind.
TrainingSample make_sample(StateVector state, std::string label = {});

/// Random separable sample |psi_X> (x) |psi_R> with Haar factors, dim_r = d.
TrainingSample make_separable(std::size_t d, Rng& rng);

/// Separable sample from explicit factors. Throws InvariantError if either
/// factor is not normalised within kNormTolerance.
TrainingSample make_separable(const CVector& psi_x, const CVector& psi_r);

/// (1/sqrt d) sum_j |x_j>|y_j>; computational bases when `basis` is empty.
/// Throws InvariantError if the supplied columns are not orthonormal.
TrainingSample make_max_entangled(std::size_t d,
                                  const std::optional<std::pair<CMatrix, CMatrix>>& basis = {});

/// sum_j sqrt(c_j) |x_j>|y_j> on d x d. Throws DomainError on negative
/// entries, sum(c) != 1 (1e-10) or more than d coefficients.
TrainingSample make_nme(const std::vector<double>& weights, std::size_t d,
                        const std::optional<std::pair<CMatrix, CMatrix>>& basis = {});

/// -sum c_j ln c_j in nats, with 0 ln 0 = 0.
double entanglement_entropy(const TrainingSample& sample);
double entanglement_entropy(const std::vector<double>& weights);

std::size_t schmidt_rank(const TrainingSample& sample);

/// One member of the NME coefficient family used by the entanglement sweep.
struct NmeFamilyMember {
  std::size_t rank;
  double lambda;
  std::vector<double> weights;
  std::string label;
};

/// c(lambda) = lambda * uniform(r) + (1 - lambda) * e_1 for r = 1..d and
/// lambda in {0.25, 0.5, 0.75, 1.0}, with duplicates removed (the rank-1
/// members all coincide with e_1).
std::vector<NmeFamilyMember> nme_families(std::size_t d);

nlohmann::json to_json(const TrainingSample& sample);
TrainingSample sample_from_json(const nlohmann::json& j);

}  // namespace qland
