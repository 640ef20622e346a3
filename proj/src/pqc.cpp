#include "qland/pqc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qland/errors.hpp"
#include "qland/numdiff.hpp"

namespace qland {

namespace {

using Mat2 = Eigen::Matrix2cd;

constexpr cplx kI{0.0, 1.0};

Mat2 rotation(GateKind kind, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  Mat2 m;
  switch (kind) {
    case GateKind::rx:
    case GateKind::crx:
      m << c, -kI * s, -kI * s, c;
      break;
    case GateKind::ry:
      m << c, -s, s, c;
      break;
    case GateKind::rz:
      m << std::polar(1.0, -0.5 * angle), 0.0, 0.0, std::polar(1.0, 0.5 * angle);
      break;
    default:
      throw std::logic_error("rotation: not a rotation gate");
  }
  return m;
}

const Mat2& hadamard() {
  static const Mat2 h = [] {
    Mat2 m;
    const double r = std::numbers::sqrt2 / 2.0;
    m << r, r, r, -r;
    return m;
  }();
  return h;
}

// Applies a 2x2 gate on the bit `mask` to every column, restricted to basis
// states where all bits of `ctrl_mask` are set.
void apply_single(CMatrix& cols, std::size_t mask, std::size_t ctrl_mask, const Mat2& g) {
  const auto d = static_cast<std::size_t>(cols.rows());
  const cplx g00 = g(0, 0), g01 = g(0, 1), g10 = g(1, 0), g11 = g(1, 1);
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    cplx* v = cols.col(c).data();
    for (std::size_t i = 0; i < d; ++i) {
      if ((i & mask) || (i & ctrl_mask) != ctrl_mask) continue;
      const std::size_t j = i | mask;
      const cplx a = v[i];
      const cplx b = v[j];
      v[i] = g00 * a + g01 * b;
      v[j] = g10 * a + g11 * b;
    }
  }
}

void apply_cz(CMatrix& cols, std::size_t mask_a, std::size_t mask_b) {
  const auto d = static_cast<std::size_t>(cols.rows());
  const std::size_t both = mask_a | mask_b;
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    cplx* v = cols.col(c).data();
    for (std::size_t i = 0; i < d; ++i)
      if ((i & both) == both) v[i] = -v[i];
  }
}

void apply_cnot(CMatrix& cols, std::size_t ctrl_mask, std::size_t target_mask) {
  const auto d = static_cast<std::size_t>(cols.rows());
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    cplx* v = cols.col(c).data();
    for (std::size_t i = 0; i < d; ++i)
      if ((i & ctrl_mask) && !(i & target_mask)) std::swap(v[i], v[i | target_mask]);
  }
}

std::vector<Gate> layer_gates(const AnsatzSpec& spec, int& next_param) {
  const int n = static_cast<int>(spec.qubits);
  std::vector<Gate> g;
  auto param = [&] { return next_param++; };
  switch (spec.family) {
    case AnsatzFamily::no_entanglement:
      for (int q = 0; q < n; ++q) g.push_back({GateKind::rx, q, -1, param()});
      for (int q = 0; q < n; ++q) g.push_back({GateKind::rz, q, -1, param()});
      break;
    case AnsatzFamily::crx_entanglement: {
      for (int q = 0; q < n; ++q) g.push_back({GateKind::rx, q, -1, param()});
      for (int q = 0; q < n; ++q) g.push_back({GateKind::rz, q, -1, param()});
      if (n > 1) {
        const int shared = param();
        for (int q = n - 1; q >= 1; --q) g.push_back({GateKind::crx, q - 1, q, shared});
      }
      break;
    }
    case AnsatzFamily::cz_entanglement:
      for (int q = 0; q < n; ++q) g.push_back({GateKind::h, q});
      for (int q = 0; q + 1 < n; ++q) g.push_back({GateKind::cz, q + 1, q});
      for (int q = 0; q < n; ++q) g.push_back({GateKind::rx, q, -1, param()});
      break;
    case AnsatzFamily::circular_entanglement:
      for (int q = 0; q < n; ++q) g.push_back({GateKind::ry, q, -1, param()});
      if (n > 1) {
        for (int c = n - 1; c >= 0; --c) g.push_back({GateKind::cnot, (c + 1) % n, c});
      }
      for (int q = 0; q < n; ++q) g.push_back({GateKind::ry, q, -1, param()});
      if (n > 1) {
        g.push_back({GateKind::cnot, n - 2, n - 1});
        for (int c = 0; c + 1 < n; ++c) g.push_back({GateKind::cnot, (c + n - 1) % n, c});
      }
      break;
  }
  return g;
}

}  // namespace

std::string to_string(AnsatzFamily family) {
  switch (family) {
    case AnsatzFamily::no_entanglement:
      return "no_entanglement";
    case AnsatzFamily::crx_entanglement:
      return "crx_entanglement";
    case AnsatzFamily::cz_entanglement:
      return "cz_entanglement";
    case AnsatzFamily::circular_entanglement:
      return "circular_entanglement";
  }
  return "unknown";
}

AnsatzFamily ansatz_family_from_string(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "no_entanglement" || key == "none") return AnsatzFamily::no_entanglement;
  if (key == "crx_entanglement" || key == "crx") return AnsatzFamily::crx_entanglement;
  if (key == "cz_entanglement" || key == "cz") return AnsatzFamily::cz_entanglement;
  if (key == "circular_entanglement" || key == "circular") {
    return AnsatzFamily::circular_entanglement;
  }
  throw DomainError("unknown ansatz family '" + name + "'");
}

nlohmann::json to_json(const AnsatzSpec& spec) {
  return {{"family", to_string(spec.family)}, {"qubits", spec.qubits}, {"layers", spec.layers}};
}

AnsatzSpec ansatz_from_json(const nlohmann::json& j) {
  for (const auto& [key, _] : j.items()) {
    if (key != "family" && key != "qubits" && key != "layers") {
      throw DomainError("AnsatzSpec: unknown field '" + key + "'");
    }
  }
  AnsatzSpec spec{ansatz_family_from_string(j.at("family").get<std::string>()),
                  j.at("qubits").get<std::size_t>(), j.at("layers").get<std::size_t>()};
  return spec;
}

Circuit::Circuit(const AnsatzSpec& spec) : spec_(spec) {
  if (spec.qubits == 0 || spec.qubits > 12) {
    throw DomainError("Circuit: qubit count must be in [1, 12]");
  }
  if (spec.layers == 0) throw DomainError("Circuit: need at least one layer");
  int next = 0;
  for (std::size_t l = 0; l < spec.layers; ++l) {
    auto layer = layer_gates(spec, next);
    gates_.insert(gates_.end(), layer.begin(), layer.end());
  }
  param_count_ = static_cast<std::size_t>(next);
}

void Circuit::check_length(const ParameterVector& theta) const {
  if (static_cast<std::size_t>(theta.size()) != param_count_) {
    throw DimensionError("ansatz " + to_string(spec_.family) + " expects " +
                         std::to_string(param_count_) + " parameters, got " +
                         std::to_string(theta.size()));
  }
}

void Circuit::apply(CMatrix& columns, const ParameterVector& theta) const {
  check_length(theta);
  if (static_cast<std::size_t>(columns.rows()) != dim()) {
    throw DimensionError("Circuit::apply: column length does not match 2^n");
  }
  const int n = static_cast<int>(spec_.qubits);
  auto bit = [n](int q) { return std::size_t{1} << (n - 1 - q); };
  for (const Gate& g : gates_) {
    switch (g.kind) {
      case GateKind::rx:
      case GateKind::ry:
      case GateKind::rz:
        apply_single(columns, bit(g.target), 0, rotation(g.kind, theta(g.param)));
        break;
      case GateKind::crx:
        apply_single(columns, bit(g.target), bit(g.control), rotation(g.kind, theta(g.param)));
        break;
      case GateKind::h:
        apply_single(columns, bit(g.target), 0, hadamard());
        break;
      case GateKind::cz:
        apply_cz(columns, bit(g.target), bit(g.control));
        break;
      case GateKind::cnot:
        apply_cnot(columns, bit(g.control), bit(g.target));
        break;
    }
  }
}

UnitaryMatrix Circuit::unitary(const ParameterVector& theta) const {
  const auto d = static_cast<Eigen::Index>(dim());
  CMatrix u = CMatrix::Identity(d, d);
  apply(u, theta);
  return UnitaryMatrix(std::move(u));
}

CVector Circuit::state(const ParameterVector& theta) const {
  CMatrix v = CMatrix::Zero(static_cast<Eigen::Index>(dim()), 1);
  v(0, 0) = 1.0;
  apply(v, theta);
  return v.col(0);
}

std::size_t param_count(const AnsatzSpec& spec) { return Circuit(spec).param_count(); }

UnitaryMatrix build_unitary(const AnsatzSpec& spec, const ParameterVector& theta) {
  return Circuit(spec).unitary(theta);
}

ParameterVector random_parameters(std::size_t count, Rng& rng) {
  ParameterVector theta(static_cast<Eigen::Index>(count));
  for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return theta;
}

SampleLoss::SampleLoss(const AnsatzSpec& spec, const UnitaryMatrix& target,
                       const TrainingSample& sample)
    : circuit_(spec) {
  if (target.dim() != circuit_.dim() || sample.dim_x() != circuit_.dim()) {
    throw DimensionError("SampleLoss: target, sample and ansatz dimensions must agree");
  }
  const auto rank = static_cast<Eigen::Index>(sample.schmidt.rank);
  compact_ = sample.schmidt.basis_x.leftCols(rank);
  for (Eigen::Index k = 0; k < rank; ++k) {
    compact_.col(k) *= sample.schmidt.coefficients[static_cast<std::size_t>(k)];
  }
  target_image_ = target.matrix() * compact_;
}

double SampleLoss::operator()(const ParameterVector& theta) const {
  CMatrix image = compact_;
  circuit_.apply(image, theta);
  // Tr(A^dagger U^dagger V A) over the compact Schmidt factor.
  const cplx overlap = (target_image_.adjoint() * image).trace();
  return 1.0 - std::clamp(std::norm(overlap), 0.0, 1.0);
}

ParameterVector loss_gradient(const AnsatzSpec& spec, const ParameterVector& theta,
                              const UnitaryMatrix& target, const TrainingSample& sample,
                              double step) {
  const SampleLoss loss(spec, target, sample);
  if (static_cast<std::size_t>(theta.size()) != loss.circuit().param_count()) {
    throw DimensionError("loss_gradient: parameter length mismatch");
  }
  if (!(step > 0.0)) throw DomainError("loss_gradient: step must be positive");
  return central_difference_gradient(loss, theta, step);
}

double haar_bin_probability(double a, double b, std::size_t d) {
  if (d == 0) throw DomainError("haar_bin_probability: dimension must be >= 1");
  if (!(a >= 0.0 && a < b && b <= 1.0)) {
    throw DomainError("haar_bin_probability: need 0 <= a < b <= 1");
  }
  const double k = static_cast<double>(d) - 1.0;
  return std::pow(1.0 - a, k) - std::pow(1.0 - b, k);
}

ExpressivityReport fidelity_kl_divergence(std::span<const double> fidelities, std::size_t bins,
                                          std::size_t d) {
  if (bins == 0) throw DomainError("fidelity_kl_divergence: need at least one bin");
  if (fidelities.size() < bins) {
    throw DomainError("fidelity_kl_divergence: fewer samples than bins");
  }
  std::vector<std::size_t> hist(bins, 0);
  for (double f : fidelities) {
    const double clamped = std::clamp(f, 0.0, 1.0);
    auto idx = static_cast<std::size_t>(clamped * static_cast<double>(bins));
    hist[std::min(idx, bins - 1)]++;
  }
  const double n = static_cast<double>(fidelities.size());
  const double width = 1.0 / static_cast<double>(bins);
  double kl = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    if (hist[i] == 0) continue;
    const double p = static_cast<double>(hist[i]) / n;
    const double a = static_cast<double>(i) * width;
    const double b = i + 1 == bins ? 1.0 : static_cast<double>(i + 1) * width;
    const double q = haar_bin_probability(a, b, d);
    kl += p * std::log(p / q);
  }
  return ExpressivityReport{std::max(kl, 0.0), std::move(hist), fidelities.size(), bins};
}

ExpressivityReport expressivity(const AnsatzSpec& spec, std::size_t samples, std::size_t bins,
                                Rng& rng) {
  if (samples < bins) throw DomainError("expressivity: need at least as many samples as bins");
  const Circuit circuit(spec);
  std::vector<double> fids;
  fids.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const CVector a = circuit.state(random_parameters(circuit.param_count(), rng));
    const CVector b = circuit.state(random_parameters(circuit.param_count(), rng));
    fids.push_back(std::norm(a.dot(b)));
  }
  return fidelity_kl_divergence(fids, bins, spec.dim());
}

}  // namespace qland
