#pragma once

// Exact algebra on one- and two-qubit density matrices.
//
// Basis ordering is |00>, |01>, |10>, |11> with qubit A as the most
// significant (left) tensor factor. Spectra come from a cyclic Jacobi
// eigensolver; no external eigen-solver is used for any quantity that feeds a
// measure.

#include <array>
#include <complex>
#include <span>

#include <Eigen/Dense>

namespace qrgitf::qcore {

using Complex = std::complex<double>;
using ComplexMatrix2 = Eigen::Matrix2cd;
using ComplexMatrix4 = Eigen::Matrix4cd;
using ComplexVector4 = Eigen::Vector4cd;

enum class LogBase { Bits, Nats };
enum class Subsystem { A, B };

/// Entries of magnitude below this are treated as rounding noise when a
/// spectrum is turned into probabilities; anything more negative is an error.
inline constexpr double kEigenvalueClampTolerance = 1e-10;
/// Tolerance for the structural density-matrix checks (Hermiticity, unit trace).
inline constexpr double kStateTolerance = 1e-12;
/// Off-diagonal Frobenius norm at which the Jacobi sweeps stop (relative to max(1, |A|_F)).
inline constexpr double kJacobiThreshold = 1e-14;

/// Identity, sigma_x, sigma_y, sigma_z for index 0..3.
const ComplexMatrix2& pauli(int index);

/// Kronecker product of two dynamic complex matrices.
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs);

struct EigenDecomposition {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXcd vectors; // column k belongs to values[k]
};

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix of any (small) size.
/// Throws ValidationError when the input deviates from Hermitian by more than
/// `hermitian_tolerance` (max-abs of m - m^dagger).
EigenDecomposition jacobi_eigensolve(const Eigen::MatrixXcd& m, double hermitian_tolerance = 1e-10);

/// Four real eigenvalues, sorted descending.
std::array<double, 4> hermitian_eigenvalues(const ComplexMatrix4& m);

/// Validated single-qubit state.
class QubitDensityMatrix {
 public:
  explicit QubitDensityMatrix(const ComplexMatrix2& m);
  const ComplexMatrix2& matrix() const noexcept { return m_; }
  /// Bloch vector r with rho = (I + r.sigma)/2.
  Eigen::Vector3d bloch_vector() const;

 private:
  ComplexMatrix2 m_;
};

/// Validated two-qubit state: Hermitian and unit trace to kStateTolerance,
/// spectrum bounded below by -kEigenvalueClampTolerance.
class TwoQubitDensityMatrix {
 public:
  explicit TwoQubitDensityMatrix(const ComplexMatrix4& m);
  /// |psi><psi| for a (not necessarily normalized) nonzero state vector.
  static TwoQubitDensityMatrix from_pure(const ComplexVector4& psi);

  const ComplexMatrix4& matrix() const noexcept { return m_; }
  double purity() const;

 private:
  ComplexMatrix4 m_;
};

/// -sum p log p over a spectrum; values within the clamp tolerance below
/// zero count as 0, and 0 log 0 = 0.
double entropy_of_spectrum(std::span<const double> eigenvalues, LogBase base);

double von_neumann_entropy(const QubitDensityMatrix& rho, LogBase base);
double von_neumann_entropy(const TwoQubitDensityMatrix& rho, LogBase base);

QubitDensityMatrix partial_trace(const TwoQubitDensityMatrix& rho, Subsystem keep);

/// Partial transpose on the chosen factor. Pure index permutation, so it is an
/// exact involution and preserves trace and Hermiticity bit-for-bit.
ComplexMatrix4 partial_transpose(const ComplexMatrix4& m, Subsystem subsystem);
ComplexMatrix4 partial_transpose(const TwoQubitDensityMatrix& rho, Subsystem subsystem);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double trace_norm(const ComplexMatrix4& m);

/// rho = 1/4 (I + a.sigma x I + I x b.sigma + sum_ij T_ij sigma_i x sigma_j)
struct BlochDecomposition {
  Eigen::Vector3d a;
  Eigen::Vector3d b;
  Eigen::Matrix3d T;

  ComplexMatrix4 reconstruct() const;
};

BlochDecomposition bloch_decompose(const TwoQubitDensityMatrix& rho);

/// Rank-one projector pair {|B0><B0|, |B1><B1|} for the Bloch direction
/// (sin theta cos phi, sin theta sin phi, cos theta) and its antipode.
class MeasurementBasis {
 public:
  /// theta in [0, pi], phi in [0, 2 pi). Throws DomainError otherwise.
  MeasurementBasis(double theta, double phi);
  /// Basis whose first projector points along `direction` (need not be unit).
  /// A zero vector yields the computational basis.
  static MeasurementBasis from_direction(const Eigen::Vector3d& direction);
  static MeasurementBasis computational() { return {0.0, 0.0}; }

  double theta() const noexcept { return theta_; }
  double phi() const noexcept { return phi_; }
  Eigen::Vector3d direction() const;
  std::array<ComplexMatrix2, 2> projectors() const;

 private:
  double theta_;
  double phi_;
};

/// sum_ij (P_i x Q_j) rho (P_i x Q_j) for the two local projector pairs.
TwoQubitDensityMatrix dephase_in_product_basis(const TwoQubitDensityMatrix& rho,
                                               const MeasurementBasis& basis_a,
                                               const MeasurementBasis& basis_b);

/// S(rho_A) + S(rho_B) - S(rho).
double mutual_information(const TwoQubitDensityMatrix& rho, LogBase base);

/// Binary entropy (bits) of (1 +- sqrt z)/2, z in [0, 1]. Throws DomainError otherwise.
double binary_entropy_sqrt(double z);

}  // namespace qrgitf::qcore
