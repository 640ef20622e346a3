#include "qland/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qland/errors.hpp"

namespace qland {

StateVector::StateVector(CVector amplitudes, std::size_t dim_x, std::size_t dim_r)
    : amplitudes_(std::move(amplitudes)), dim_x_(dim_x), dim_r_(dim_r) {
  if (dim_x_ == 0 || dim_r_ == 0) {
    throw DimensionError("StateVector: subsystem dimensions must be positive");
  }
  if (static_cast<std::size_t>(amplitudes_.size()) != dim_x_ * dim_r_) {
    throw DimensionError("StateVector: " + std::to_string(amplitudes_.size()) +
                         " amplitudes do not match dim_x*dim_r = " +
                         std::to_string(dim_x_ * dim_r_));
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw InvariantError("StateVector: amplitudes have norm " + std::to_string(norm));
  }
}

StateVector StateVector::single(CVector amplitudes) {
  const auto d = static_cast<std::size_t>(amplitudes.size());
  return StateVector(std::move(amplitudes), d, 1);
}

StateVector StateVector::basis(std::size_t dim_x, std::size_t dim_r, std::size_t index) {
  if (index >= dim_x * dim_r) throw DimensionError("StateVector::basis: index out of range");
  CVector amps = CVector::Zero(static_cast<Eigen::Index>(dim_x * dim_r));
  amps(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(amps), dim_x, dim_r);
}

CMatrix StateVector::as_matrix() const {
  const auto rows = static_cast<Eigen::Index>(dim_x_);
  const auto cols = static_cast<Eigen::Index>(dim_r_);
  CMatrix a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = amplitudes_(i * cols + j);
  return a;
}

StateVector StateVector::from_matrix(const CMatrix& coefficients) {
  const Eigen::Index rows = coefficients.rows();
  const Eigen::Index cols = coefficients.cols();
  CVector amps(rows * cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) amps(i * cols + j) = coefficients(i, j);
  return StateVector(std::move(amps), static_cast<std::size_t>(rows),
                     static_cast<std::size_t>(cols));
}

double unitarity_defect(const CMatrix& u) {
  const auto n = u.rows();
  return (u.adjoint() * u - CMatrix::Identity(n, n)).norm();
}

UnitaryMatrix::UnitaryMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw DimensionError("UnitaryMatrix: matrix must be square and non-empty");
  }
  const double defect = unitarity_defect(entries_);
  if (!(defect <= kUnitarityTolerance)) {
    throw InvariantError("UnitaryMatrix: ||U^dagger U - I||_F = " + std::to_string(defect));
  }
}

UnitaryMatrix UnitaryMatrix::identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return UnitaryMatrix(CMatrix::Identity(n, n), Trusted{});
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
  return UnitaryMatrix(entries_.adjoint(), Trusted{});
}

UnitaryMatrix UnitaryMatrix::operator*(const UnitaryMatrix& rhs) const {
  if (dim() != rhs.dim()) throw DimensionError("UnitaryMatrix product: dimension mismatch");
  return UnitaryMatrix(entries_ * rhs.entries_);
}

std::vector<double> SchmidtData::weights() const {
  std::vector<double> w(coefficients.size());
  std::transform(coefficients.begin(), coefficients.end(), w.begin(),
                 [](double s) { return s * s; });
  return w;
}

SchmidtData schmidt_decompose(const StateVector& state) {
  if (static_cast<std::size_t>(state.amplitudes().size()) != state.dim_x() * state.dim_r()) {
    throw DimensionError("schmidt_decompose: amplitude length mismatch");
  }
  const CMatrix a = state.as_matrix();
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SchmidtData out;
  const auto& sv = svd.singularValues();
  out.coefficients.assign(sv.data(), sv.data() + sv.size());
  out.basis_x = svd.matrixU();
  // A = U S V^dagger  =>  |alpha> = sum_j s_j u_j (x) conj(v_j).
  out.basis_r = svd.matrixV().conjugate();

  for (Eigen::Index j = 0; j < out.basis_x.cols(); ++j) {
    auto col = out.basis_x.col(j);
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > 1e-12) {
        const cplx phase = col(i) / std::abs(col(i));
        out.basis_x.col(j) *= std::conj(phase);
        out.basis_r.col(j) *= phase;
        break;
      }
    }
  }
  out.rank = static_cast<std::size_t>(
      std::count_if(out.coefficients.begin(), out.coefficients.end(),
                    [](double s) { return s > kRankTolerance; }));
  return out;
}

CVector reconstruct(const SchmidtData& schmidt) {
  const Eigen::Index dx = schmidt.basis_x.rows();
  const Eigen::Index dr = schmidt.basis_r.rows();
  CMatrix a = CMatrix::Zero(dx, dr);
  for (std::size_t j = 0; j < schmidt.coefficients.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    a += schmidt.coefficients[j] * schmidt.basis_x.col(k) * schmidt.basis_r.col(k).transpose();
  }
  CVector amps(dx * dr);
  for (Eigen::Index i = 0; i < dx; ++i)
    for (Eigen::Index j = 0; j < dr; ++j) amps(i * dr + j) = a(i, j);
  return amps;
}

UnitaryMatrix haar_random_unitary(std::size_t d, Rng& rng) {
  if (d == 0) throw DomainError("haar_random_unitary: dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  CMatrix z(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx rjj = r(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return UnitaryMatrix(std::move(q));
}

CVector haar_random_vector(std::size_t d, Rng& rng) {
  if (d == 0) throw DomainError("haar_random_state: dimension must be >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  CVector v(n);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.complex_normal();
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

StateVector haar_random_state(std::size_t d, Rng& rng) {
  return StateVector::single(haar_random_vector(d, rng));
}

StateVector apply_to_subsystem(const UnitaryMatrix& op, const StateVector& state) {
  if (op.dim() != state.dim_x()) {
    throw DimensionError("apply_to_subsystem: operator dimension " + std::to_string(op.dim()) +
                         " != dim_x " + std::to_string(state.dim_x()));
  }
  const CMatrix out = op.matrix() * state.as_matrix();
  CVector amps(out.size());
  const Eigen::Index dr = out.cols();
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < dr; ++j) amps(i * dr + j) = out(i, j);
  return StateVector(std::move(amps), state.dim_x(), state.dim_r());
}

}  // namespace qland
