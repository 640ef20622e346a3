#include "qland/samples.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qland/errors.hpp"

namespace qland {

namespace {

void require_orthonormal_columns(const CMatrix& m, std::size_t d, const char* what) {
  const auto n = static_cast<Eigen::Index>(d);
  if (m.rows() != n || m.cols() != n) {
    throw DimensionError(std::string(what) + ": basis must be " + std::to_string(d) + "x" +
                         std::to_string(d));
  }
  if ((m.adjoint() * m - CMatrix::Identity(n, n)).norm() > kNormTolerance) {
    throw InvariantError(std::string(what) + ": basis columns are not orthonormal");
  }
}

/// A = X diag(sqrt c) Y^T so that sum_ij A_ij |i>|j> = sum_k sqrt(c_k) |x_k>|y_k>.
StateVector state_from_spectrum(const std::vector<double>& weights, const CMatrix& bx,
                                const CMatrix& by) {
  const Eigen::Index d = bx.rows();
  CMatrix a = CMatrix::Zero(d, by.rows());
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == 0.0) continue;
    const auto kk = static_cast<Eigen::Index>(k);
    a += std::sqrt(weights[k]) * bx.col(kk) * by.col(kk).transpose();
  }
  // Reabsorb rounding from the square roots so the norm check sees exactly 1.
  a /= a.norm();
  return StateVector::from_matrix(a);
}

std::string format_lambda(double lambda) {
  std::ostringstream os;
  os << lambda;
  return os.str();
}

}  // namespace

std::string to_string(SampleKind kind) {
  switch (kind) {
    case SampleKind::separable:
      return "separable";
    case SampleKind::max_entangled:
      return "max_entangled";
    case SampleKind::nme:
      return "nme";
  }
  return "unknown";
}

SampleKind sample_kind_from_string(const std::string& name) {
  if (name == "separable") return SampleKind::separable;
  if (name == "max_entangled") return SampleKind::max_entangled;
  if (name == "nme") return SampleKind::nme;
  throw DomainError("unknown sample kind '" + name + "'");
}

SampleKind classify(const SchmidtData& schmidt, std::size_t dim_x) {
  if (schmidt.rank == 1) return SampleKind::separable;
  if (schmidt.rank == dim_x) {
    const double target = 1.0 / static_cast<double>(dim_x);
    const auto w = schmidt.weights();
    const bool flat = std::all_of(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(dim_x),
                                  [&](double c) { return std::abs(c - target) <= 1e-10; });
    if (flat) return SampleKind::max_entangled;
  }
  return SampleKind::nme;
}

TrainingSample make_sample(StateVector state, std::string label) {
  SchmidtData schmidt = schmidt_decompose(state);
  const SampleKind kind = classify(schmidt, state.dim_x());
  if (label.empty()) label = to_string(kind);
  return TrainingSample{std::move(state), std::move(schmidt), kind, std::move(label)};
}

TrainingSample make_separable(std::size_t d, Rng& rng) {
  if (d == 0) throw DomainError("make_separable: dimension must be >= 1");
  return make_separable(haar_random_vector(d, rng), haar_random_vector(d, rng));
}

TrainingSample make_separable(const CVector& psi_x, const CVector& psi_r) {
  if (psi_x.size() == 0 || psi_r.size() == 0) {
    throw DimensionError("make_separable: empty factor");
  }
  if (std::abs(psi_x.norm() - 1.0) > kNormTolerance ||
      std::abs(psi_r.norm() - 1.0) > kNormTolerance) {
    throw InvariantError("make_separable: factors must be normalised");
  }
  const CMatrix a = psi_x * psi_r.transpose();
  return make_sample(StateVector::from_matrix(a), "separable");
}

TrainingSample make_max_entangled(std::size_t d,
                                  const std::optional<std::pair<CMatrix, CMatrix>>& basis) {
  if (d == 0) throw DomainError("make_max_entangled: dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix bx = CMatrix::Identity(n, n);
  CMatrix by = CMatrix::Identity(n, n);
  if (basis) {
    require_orthonormal_columns(basis->first, d, "make_max_entangled");
    require_orthonormal_columns(basis->second, d, "make_max_entangled");
    bx = basis->first;
    by = basis->second;
  }
  std::vector<double> w(d, 1.0 / static_cast<double>(d));
  return make_sample(state_from_spectrum(w, bx, by), "max_entangled");
}

TrainingSample make_nme(const std::vector<double>& weights, std::size_t d,
                        const std::optional<std::pair<CMatrix, CMatrix>>& basis) {
  if (d == 0) throw DomainError("make_nme: dimension must be >= 1");
  if (weights.empty() || weights.size() > d) {
    throw DomainError("make_nme: need between 1 and d coefficients");
  }
  if (std::any_of(weights.begin(), weights.end(), [](double c) { return !(c >= 0.0); })) {
    throw DomainError("make_nme: coefficients must be nonnegative");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-10) {
    throw DomainError("make_nme: coefficients sum to " + std::to_string(total) + ", expected 1");
  }
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix bx = CMatrix::Identity(n, n);
  CMatrix by = CMatrix::Identity(n, n);
  if (basis) {
    require_orthonormal_columns(basis->first, d, "make_nme");
    require_orthonormal_columns(basis->second, d, "make_nme");
    bx = basis->first;
    by = basis->second;
  }
  TrainingSample s = make_sample(state_from_spectrum(weights, bx, by));
  if (s.kind == SampleKind::nme) {
    s.label = "nme_r" + std::to_string(s.schmidt.rank);
  }
  return s;
}

double entanglement_entropy(const std::vector<double>& weights) {
  double e = 0.0;
  for (double c : weights) {
    if (c > 0.0) e -= c * std::log(c);
  }
  return std::max(e, 0.0);
}

double entanglement_entropy(const TrainingSample& sample) {
  return entanglement_entropy(sample.schmidt.weights());
}

std::size_t schmidt_rank(const TrainingSample& sample) { return sample.schmidt.rank; }

std::vector<NmeFamilyMember> nme_families(std::size_t d) {
  if (d == 0) throw DomainError("nme_families: dimension must be >= 1");
  static constexpr double kLambdas[] = {0.25, 0.5, 0.75, 1.0};
  std::vector<NmeFamilyMember> out;
  out.push_back({1, 1.0, std::vector<double>(d, 0.0), "separable"});
  out.back().weights[0] = 1.0;
  for (std::size_t r = 2; r <= d; ++r) {
    for (double lambda : kLambdas) {
      std::vector<double> c(d, 0.0);
      for (std::size_t j = 0; j < r; ++j) c[j] = lambda / static_cast<double>(r);
      c[0] += 1.0 - lambda;
      std::string label = (r == d && lambda == 1.0)
                              ? std::string("max_entangled")
                              : "nme_r" + std::to_string(r) + "_l" + format_lambda(lambda);
      out.push_back({r, lambda, std::move(c), std::move(label)});
    }
  }
  return out;
}

nlohmann::json to_json(const TrainingSample& sample) {
  nlohmann::json amps = nlohmann::json::array();
  for (Eigen::Index i = 0; i < sample.state.amplitudes().size(); ++i) {
    const cplx a = sample.state.amplitudes()(i);
    amps.push_back({a.real(), a.imag()});
  }
  return {{"kind", to_string(sample.kind)},
          {"label", sample.label},
          {"dim_x", sample.dim_x()},
          {"dim_r", sample.dim_r()},
          {"coefficients", sample.schmidt.coefficients},
          {"amplitudes", std::move(amps)}};
}

TrainingSample sample_from_json(const nlohmann::json& j) {
  const auto dim_x = j.at("dim_x").get<std::size_t>();
  const auto dim_r = j.at("dim_r").get<std::size_t>();
  const auto& amps_json = j.at("amplitudes");
  CVector amps(static_cast<Eigen::Index>(amps_json.size()));
  for (std::size_t i = 0; i < amps_json.size(); ++i) {
    amps(static_cast<Eigen::Index>(i)) = {amps_json[i].at(0).get<double>(),
                                          amps_json[i].at(1).get<double>()};
  }
  TrainingSample s = make_sample(StateVector(std::move(amps), dim_x, dim_r),
                                 j.value("label", std::string{}));
  if (j.contains("kind") && sample_kind_from_string(j.at("kind").get<std::string>()) != s.kind) {
    throw InvariantError("sample_from_json: stored kind disagrees with the Schmidt spectrum");
  }
  return s;
}

}  // namespace qland
