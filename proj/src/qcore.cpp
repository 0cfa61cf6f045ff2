#include "qrgitf/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include "qrgitf/errors.hpp"

namespace qrgitf::qcore {

namespace {

const std::array<ComplexMatrix2, 4>& pauli_table() {
  static const std::array<ComplexMatrix2, 4> table = [] {
    const Complex i{0.0, 1.0};
    std::array<ComplexMatrix2, 4> t;
    t[0] << 1.0, 0.0, 0.0, 1.0;
    t[1] << 0.0, 1.0, 1.0, 0.0;
    t[2] << 0.0, -i, i, 0.0;
    t[3] << 1.0, 0.0, 0.0, -1.0;
    return t;
  }();
  return table;
}

double hermiticity_defect(const Eigen::MatrixXcd& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double off_diagonal_norm(const Eigen::MatrixXcd& m) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j) sum += std::norm(m(i, j));
    }
  }
  return std::sqrt(sum);
}

template <typename Matrix>
void validate_state(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + ": non-finite entry");
  }
  const double herm = hermiticity_defect(m);
  if (herm > kStateTolerance) {
    std::ostringstream msg;
    msg << what << ": not Hermitian (defect " << herm << ")";
    throw ValidationError(msg.str());
  }
  const double trace_defect = std::abs(m.trace() - Complex{1.0, 0.0});
  if (trace_defect > kStateTolerance) {
    std::ostringstream msg;
    msg << what << ": trace differs from 1 by " << trace_defect;
    throw ValidationError(msg.str());
  }
  const auto eig = jacobi_eigensolve(m, kStateTolerance);
  const double lowest = eig.values.minCoeff();
  if (lowest < -kEigenvalueClampTolerance) {
    std::ostringstream msg;
    msg << what << ": negative eigenvalue " << lowest;
    throw ValidationError(msg.str());
  }
}

double log_in(double p, LogBase base) {
  return base == LogBase::Bits ? std::log2(p) : std::log(p);
}

}  // namespace

const ComplexMatrix2& pauli(int index) {
  if (index < 0 || index > 3) throw DomainError("pauli index must be in 0..3");
  return pauli_table()[static_cast<std::size_t>(index)];
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& lhs, const Eigen::MatrixXcd& rhs) {
  Eigen::MatrixXcd out(lhs.rows() * rhs.rows(), lhs.cols() * rhs.cols());
  for (Eigen::Index i = 0; i < lhs.rows(); ++i) {
    for (Eigen::Index j = 0; j < lhs.cols(); ++j) {
      out.block(i * rhs.rows(), j * rhs.cols(), rhs.rows(), rhs.cols()) = lhs(i, j) * rhs;
    }
  }
  return out;
}

EigenDecomposition jacobi_eigensolve(const Eigen::MatrixXcd& m, double hermitian_tolerance) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ValidationError("jacobi_eigensolve: matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw ValidationError("jacobi_eigensolve: non-finite entry");
  const double herm = hermiticity_defect(m);
  if (herm > hermitian_tolerance) {
    std::ostringstream msg;
    msg << "jacobi_eigensolve: matrix not Hermitian (defect " << herm << ")";
    throw ValidationError(msg.str());
  }

  const Eigen::Index n = m.rows();
  Eigen::MatrixXcd a = 0.5 * (m + m.adjoint());
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(n, n);
  const double threshold = kJacobiThreshold * std::max(1.0, a.norm());

  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > threshold; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;

        // Phase the pair so the pivot is real, then apply the real symmetric
        // Schur rotation. Combined unitary acting on columns p, q:
        //   U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
        const Complex phase = apq / mag;  // e^{i phi}
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index lhs, Eigen::Index rhs) {
    return a(lhs, lhs).real() > a(rhs, rhs).real();
  });

  EigenDecomposition out{Eigen::VectorXd(n), Eigen::MatrixXcd(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values[k] = a(src, src).real();
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

std::array<double, 4> hermitian_eigenvalues(const ComplexMatrix4& m) {
  const auto eig = jacobi_eigensolve(m);
  return {eig.values[0], eig.values[1], eig.values[2], eig.values[3]};
}

QubitDensityMatrix::QubitDensityMatrix(const ComplexMatrix2& m) : m_(m) {
  validate_state(m_, "QubitDensityMatrix");
}

Eigen::Vector3d QubitDensityMatrix::bloch_vector() const {
  Eigen::Vector3d r;
  for (int i = 0; i < 3; ++i) r[i] = (m_ * pauli(i + 1)).trace().real();
  return r;
}

TwoQubitDensityMatrix::TwoQubitDensityMatrix(const ComplexMatrix4& m) : m_(m) {
  validate_state(m_, "TwoQubitDensityMatrix");
}

TwoQubitDensityMatrix TwoQubitDensityMatrix::from_pure(const ComplexVector4& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("from_pure: state vector must be nonzero and finite");
  }
  const ComplexVector4 unit = psi / norm;
  return TwoQubitDensityMatrix(unit * unit.adjoint());
}

double TwoQubitDensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double entropy_of_spectrum(std::span<const double> eigenvalues, LogBase base) {
  double s = 0.0;
  for (double p : eigenvalues) {
    if (p < -kEigenvalueClampTolerance) {
      std::ostringstream msg;
      msg << "entropy_of_spectrum: eigenvalue " << p << " below clamp tolerance";
      throw ValidationError(msg.str());
    }
    p = std::clamp(p, 0.0, 1.0);
    if (p > 0.0) s -= p * log_in(p, base);
  }
  return std::max(s, 0.0);
}

double von_neumann_entropy(const QubitDensityMatrix& rho, LogBase base) {
  const auto eig = jacobi_eigensolve(rho.matrix());
  return entropy_of_spectrum(std::span<const double>(eig.values.data(), 2), base);
}

double von_neumann_entropy(const TwoQubitDensityMatrix& rho, LogBase base) {
  const auto values = hermitian_eigenvalues(rho.matrix());
  return entropy_of_spectrum(values, base);
}

QubitDensityMatrix partial_trace(const TwoQubitDensityMatrix& rho, Subsystem keep) {
  const auto& m = rho.matrix();
  ComplexMatrix2 out = ComplexMatrix2::Zero();
  // index = 2*a + b
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      for (int k = 0; k < 2; ++k) {
        out(r, c) += keep == Subsystem::A ? m(2 * r + k, 2 * c + k) : m(2 * k + r, 2 * k + c);
      }
    }
  }
  return QubitDensityMatrix(out);
}

ComplexMatrix4 partial_transpose(const ComplexMatrix4& m, Subsystem subsystem) {
  ComplexMatrix4 out;
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int b1 = 0; b1 < 2; ++b1) {
      for (int a2 = 0; a2 < 2; ++a2) {
        for (int b2 = 0; b2 < 2; ++b2) {
          const int row = 2 * a1 + b1;
          const int col = 2 * a2 + b2;
          if (subsystem == Subsystem::A) {
            out(row, col) = m(2 * a2 + b1, 2 * a1 + b2);
          } else {
            out(row, col) = m(2 * a1 + b2, 2 * a2 + b1);
          }
        }
      }
    }
  }
  return out;
}

ComplexMatrix4 partial_transpose(const TwoQubitDensityMatrix& rho, Subsystem subsystem) {
  return partial_transpose(rho.matrix(), subsystem);
}

double trace_norm(const ComplexMatrix4& m) {
  const auto values = hermitian_eigenvalues(m);
  double sum = 0.0;
  for (double v : values) sum += std::abs(v);
  return sum;
}

ComplexMatrix4 BlochDecomposition::reconstruct() const {
  Eigen::MatrixXcd out = kron(pauli(0), pauli(0));
  for (int i = 0; i < 3; ++i) {
    out += a[i] * kron(pauli(i + 1), pauli(0));
    out += b[i] * kron(pauli(0), pauli(i + 1));
    for (int j = 0; j < 3; ++j) out += T(i, j) * kron(pauli(i + 1), pauli(j + 1));
  }
  return 0.25 * ComplexMatrix4(out);
}

BlochDecomposition bloch_decompose(const TwoQubitDensityMatrix& rho) {
  const auto& m = rho.matrix();
  BlochDecomposition out;
  for (int i = 0; i < 3; ++i) {
    out.a[i] = (m * ComplexMatrix4(kron(pauli(i + 1), pauli(0)))).trace().real();
    out.b[i] = (m * ComplexMatrix4(kron(pauli(0), pauli(i + 1)))).trace().real();
    for (int j = 0; j < 3; ++j) {
      out.T(i, j) = (m * ComplexMatrix4(kron(pauli(i + 1), pauli(j + 1)))).trace().real();
    }
  }
  return out;
}

MeasurementBasis::MeasurementBasis(double theta, double phi) : theta_(theta), phi_(phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw DomainError("MeasurementBasis: theta must lie in [0, pi]");
  }
  if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
    throw DomainError("MeasurementBasis: phi must lie in [0, 2 pi)");
  }
}

MeasurementBasis MeasurementBasis::from_direction(const Eigen::Vector3d& direction) {
  const double norm = direction.norm();
  if (norm == 0.0) return computational();
  const double theta = std::acos(std::clamp(direction.z() / norm, -1.0, 1.0));
  double phi = std::atan2(direction.y(), direction.x());
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
  return {theta, phi};
}

Eigen::Vector3d MeasurementBasis::direction() const {
  return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_), std::cos(theta_)};
}

std::array<ComplexMatrix2, 2> MeasurementBasis::projectors() const {
  Eigen::Vector2cd up;
  up << std::cos(0.5 * theta_), std::polar(std::sin(0.5 * theta_), phi_);
  Eigen::Vector2cd down;
  down << -std::conj(up[1]), std::conj(up[0]);
  return {ComplexMatrix2(up * up.adjoint()), ComplexMatrix2(down * down.adjoint())};
}

TwoQubitDensityMatrix dephase_in_product_basis(const TwoQubitDensityMatrix& rho,
                                               const MeasurementBasis& basis_a,
                                               const MeasurementBasis& basis_b) {
  const auto pa = basis_a.projectors();
  const auto pb = basis_b.projectors();
  ComplexMatrix4 out = ComplexMatrix4::Zero();
  for (const auto& p : pa) {
    for (const auto& q : pb) {
      const ComplexMatrix4 proj(kron(p, q));
      out += proj * rho.matrix() * proj;
    }
  }
  // Symmetrize away the last-bit asymmetry of the products.
  return TwoQubitDensityMatrix(0.5 * (out + out.adjoint()));
}

double mutual_information(const TwoQubitDensityMatrix& rho, LogBase base) {
  const double value = von_neumann_entropy(partial_trace(rho, Subsystem::A), base) +
                       von_neumann_entropy(partial_trace(rho, Subsystem::B), base) -
                       von_neumann_entropy(rho, base);
  // Rounding can push an exactly-zero value a few ulps negative.
  return (value < 0.0 && value > -kStateTolerance) ? 0.0 : value;
}

double binary_entropy_sqrt(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("binary_entropy_sqrt: z must lie in [0, 1]");
  const double r = std::sqrt(z);
  const std::array<double, 2> p{0.5 * (1.0 + r), 0.5 * (1.0 - r)};
  return entropy_of_spectrum(p, LogBase::Bits);
}

}  // namespace qrgitf::qcore
