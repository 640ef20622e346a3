#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qland/rng.hpp"

namespace qland {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kUnitarityTolerance = 1e-10;
/// A Schmidt coefficient sqrt(c_j) counts toward the rank iff it exceeds this.
inline constexpr double kRankTolerance = 1e-10;

/// Unit-norm pure state on H_X (x) H_R.
///
/// Amplitude of |i>_X |j>_R is stored at index i * dim_r + j.
class StateVector {
 public:
  /// Throws DimensionError on a length mismatch and InvariantError when the
  /// 2-norm differs from 1 by more than kNormTolerance.
  StateVector(CVector amplitudes, std::size_t dim_x, std::size_t dim_r);

  /// Single-register state (dim_r = 1).
  static StateVector single(CVector amplitudes);

  /// |0>_X (x) |0>_R.
  static StateVector basis(std::size_t dim_x, std::size_t dim_r, std::size_t index = 0);

  const CVector& amplitudes() const { return amplitudes_; }
  std::size_t dim_x() const { return dim_x_; }
  std::size_t dim_r() const { return dim_r_; }

  /// The dim_x x dim_r coefficient matrix A with |state> = sum_ij A_ij |i>|j>.
  CMatrix as_matrix() const;
  static StateVector from_matrix(const CMatrix& coefficients);

 private:
  CVector amplitudes_;
  std::size_t dim_x_;
  std::size_t dim_r_;
};

/// d x d complex unitary, checked on construction.
class UnitaryMatrix {
 public:
  /// Throws DimensionError if not square and InvariantError if
  /// ||U^dagger U - I||_F > kUnitarityTolerance.
  explicit UnitaryMatrix(CMatrix entries);

  static UnitaryMatrix identity(std::size_t d);

  const CMatrix& matrix() const { return entries_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }

  UnitaryMatrix adjoint() const;
  UnitaryMatrix operator*(const UnitaryMatrix& rhs) const;

 private:
  struct Trusted {};
  UnitaryMatrix(CMatrix entries, Trusted) : entries_(std::move(entries)) {}

  CMatrix entries_;
};

/// Frobenius deviation of U^dagger U from the identity.
double unitarity_defect(const CMatrix& u);

struct SchmidtData {
  /// sqrt(c_j), sorted descending; length min(dim_x, dim_r).
  std::vector<double> coefficients;
  std::size_t rank = 0;
  /// Columns are the Schmidt vectors |x_j> and |y_j>.
  CMatrix basis_x;
  CMatrix basis_r;

  /// Squared coefficients c_j.
  std::vector<double> weights() const;
};

/// Schmidt decomposition via SVD of the reshaped amplitude matrix.
///
/// Each pair (x_j, y_j) is phase-fixed so that the first entry of x_j with
/// modulus above 1e-12 is real and positive.
SchmidtData schmidt_decompose(const StateVector& state);

/// sum_j sqrt(c_j) |x_j> (x) |y_j> as a flat amplitude vector.
CVector reconstruct(const SchmidtData& schmidt);

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// R-diagonal phase correction. Throws DomainError for d = 0.
UnitaryMatrix haar_random_unitary(std::size_t d, Rng& rng);

/// Haar-distributed pure state on C^d (dim_r = 1). Throws DomainError for d = 0.
StateVector haar_random_state(std::size_t d, Rng& rng);

/// Normalised complex Gaussian vector (Haar-random direction) as a raw vector.
CVector haar_random_vector(std::size_t d, Rng& rng);

/// (op (x) I_R) |state>. Throws DimensionError unless op.dim() == state.dim_x().
StateVector apply_to_subsystem(const UnitaryMatrix& op, const StateVector& state);

}  // namespace qland
