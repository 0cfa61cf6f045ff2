// Definition-level evaluation of the correlation measures on arbitrary
// two-qubit states. Nothing here assumes the block ground-state structure.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "qrgitf/errors.hpp"
#include "qrgitf/measures.hpp"

namespace qrgitf::measures {

namespace {

using qcore::ComplexMatrix2;
using qcore::ComplexMatrix4;
using qcore::LogBase;
using qcore::MeasurementBasis;
using qcore::Subsystem;
using qcore::TwoQubitDensityMatrix;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZeroBloch = 1e-12;

// p S(sigma / p) in bits for an unnormalized 2x2 Hermitian block sigma with trace p.
double weighted_qubit_entropy(const ComplexMatrix2& sigma) {
  const double a = sigma(0, 0).real();
  const double d = sigma(1, 1).real();
  const double p = a + d;
  if (p <= 0.0) return 0.0;
  const double disc = std::sqrt((a - d) * (a - d) + 4.0 * std::norm(sigma(0, 1)));
  double s = 0.0;
  for (double lambda : {0.5 * (p + disc), 0.5 * (p - disc)}) {
    if (lambda > 0.0) s -= lambda * std::log2(lambda / p);
  }
  return std::max(s, 0.0);
}

// Sends an arbitrary (theta, phi) pair to the canonical chart.
MeasurementBasis canonical_basis(double theta, double phi) {
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  if (theta > kPi) {
    theta = kTwoPi - theta;
    phi += kPi;
  }
  phi = std::fmod(phi, kTwoPi);
  if (phi < 0.0) phi += kTwoPi;
  if (phi >= kTwoPi) phi = 0.0;
  return {std::clamp(theta, 0.0, kPi), phi};
}

MeasurementBasis marginal_eigenbasis(const TwoQubitDensityMatrix& rho, Subsystem side) {
  const Eigen::Vector3d r = qcore::partial_trace(rho, side).bloch_vector();
  // Degenerate marginal: fall back to the computational basis.
  if (r.norm() < kZeroBloch) return MeasurementBasis::computational();
  return MeasurementBasis::from_direction(r);
}

Eigen::Vector3d normalized_or(const Eigen::Vector3d& v, const Eigen::Vector3d& fallback) {
  const double n = v.norm();
  return n > 1e-300 ? Eigen::Vector3d(v / n) : fallback;
}

double correlation_value(const Eigen::Matrix3d& T, const ChshSettings& s) {
  return s.a.dot(T * (s.b + s.b_prime)) + s.a_prime.dot(T * (s.b - s.b_prime));
}

std::vector<Eigen::Vector3d> start_directions() {
  // Golden-angle spiral on the sphere.
  constexpr int kCount = 12;
  std::vector<Eigen::Vector3d> out;
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < kCount; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / kCount;
    const double r = std::sqrt(1.0 - z * z);
    out.emplace_back(r * std::cos(golden * i), r * std::sin(golden * i), z);
  }
  return out;
}

// Values that are exactly zero can come out a few ulps negative.
double clamp_rounding(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

}  // namespace

double oracle_negativity(const TwoQubitDensityMatrix& rho) {
  const double norm = qcore::trace_norm(qcore::partial_transpose(rho, Subsystem::A));
  return clamp_rounding(0.5 * (norm - 1.0));
}

double conditional_entropy(const TwoQubitDensityMatrix& rho, const MeasurementBasis& basis) {
  const auto& m = rho.matrix();
  double total = 0.0;
  for (const auto& proj : basis.projectors()) {
    // tr_B[(I x P) rho (I x P)] = tr_B[(I x P) rho]
    ComplexMatrix2 sigma = ComplexMatrix2::Zero();
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int a2 = 0; a2 < 2; ++a2) {
        for (int b1 = 0; b1 < 2; ++b1) {
          for (int b2 = 0; b2 < 2; ++b2) {
            sigma(a1, a2) += proj(b2, b1) * m(2 * a1 + b1, 2 * a2 + b2);
          }
        }
      }
    }
    total += weighted_qubit_entropy(sigma);
  }
  return total;
}

double oracle_discord(const TwoQubitDensityMatrix& rho, int resolution) {
  if (resolution < kMinDiscordResolution) {
    throw ConfigurationError("oracle_discord: resolution must be at least 8");
  }
  const int theta_points = resolution;
  const int phi_points = 2 * resolution;
  const double dtheta = kPi / (theta_points - 1);
  const double dphi = kTwoPi / phi_points;

  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  double best_phi = 0.0;
  for (int i = 0; i < theta_points; ++i) {
    const double theta = std::min(kPi, i * dtheta);
    for (int j = 0; j < phi_points; ++j) {
      const double phi = j * dphi;
      const double h = conditional_entropy(rho, MeasurementBasis(theta, phi));
      if (h < best) {
        best = h;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }

  constexpr int kRounds = 3;
  constexpr int kHalfSteps = 10;
  double half_theta = dtheta;
  double half_phi = dphi;
  for (int round = 0; round < kRounds; ++round) {
    const double center_theta = best_theta;
    const double center_phi = best_phi;
    for (int i = -kHalfSteps; i <= kHalfSteps; ++i) {
      for (int j = -kHalfSteps; j <= kHalfSteps; ++j) {
        const auto basis = canonical_basis(center_theta + half_theta * i / kHalfSteps,
                                           center_phi + half_phi * j / kHalfSteps);
        const double h = conditional_entropy(rho, basis);
        if (h < best) {
          best = h;
          best_theta = basis.theta();
          best_phi = basis.phi();
        }
      }
    }
    half_theta /= 10.0;
    half_phi /= 10.0;
  }

  const double s_a = qcore::von_neumann_entropy(qcore::partial_trace(rho, Subsystem::A), LogBase::Bits);
  const double classical = s_a - best;
  const double discord = qcore::mutual_information(rho, LogBase::Bits) - classical;
  return clamp_rounding(discord);
}

double oracle_mid(const TwoQubitDensityMatrix& rho) {
  const auto dephased = qcore::dephase_in_product_basis(rho, marginal_eigenbasis(rho, Subsystem::A),
                                                        marginal_eigenbasis(rho, Subsystem::B));
  const double value =
      qcore::mutual_information(rho, LogBase::Bits) - qcore::mutual_information(dephased, LogBase::Bits);
  return clamp_rounding(value);
}

MinGqd oracle_min_gqd(const TwoQubitDensityMatrix& rho) {
  const auto bloch = qcore::bloch_decompose(rho);
  const Eigen::Matrix3d ttt = bloch.T * bloch.T.transpose();
  const double t_norm_sq = bloch.T.squaredNorm();

  double min_value = 0.0;
  const double a_norm_sq = bloch.a.squaredNorm();
  if (std::sqrt(a_norm_sq) < kZeroBloch) {
    const auto eig = qcore::jacobi_eigensolve(ttt.cast<qcore::Complex>());
    min_value = 0.25 * (t_norm_sq - eig.values[2]);
  } else {
    min_value = 0.25 * (t_norm_sq - bloch.a.dot(ttt * bloch.a) / a_norm_sq);
  }

  const Eigen::Matrix3d k = bloch.a * bloch.a.transpose() + ttt;
  const auto eig = qcore::jacobi_eigensolve(k.cast<qcore::Complex>());
  const double gqd = 0.25 * (a_norm_sq + t_norm_sq - eig.values[0]);
  return {clamp_rounding(min_value), clamp_rounding(gqd)};
}

double oracle_quantum_deficit(const TwoQubitDensityMatrix& rho) {
  const auto pa = marginal_eigenbasis(rho, Subsystem::A).projectors();
  const auto pb = marginal_eigenbasis(rho, Subsystem::B).projectors();
  std::vector<double> weights;
  for (const auto& p : pa) {
    for (const auto& q : pb) {
      const ComplexMatrix4 proj(qcore::kron(p, q));
      weights.push_back((proj * rho.matrix()).trace().real());
    }
  }
  const double value = qcore::entropy_of_spectrum(weights, LogBase::Nats) -
                       qcore::von_neumann_entropy(rho, LogBase::Nats);
  return clamp_rounding(value);
}

double oracle_chsh(const TwoQubitDensityMatrix& rho) {
  const auto bloch = qcore::bloch_decompose(rho);
  const Eigen::Matrix3d tt = bloch.T.transpose() * bloch.T;
  const auto eig = qcore::jacobi_eigensolve(tt.cast<qcore::Complex>());
  const double u = std::max(0.0, eig.values[0] + eig.values[1]);
  return 2.0 * std::sqrt(u);
}

qcore::ComplexMatrix4 chsh_operator(const ChshSettings& s) {
  auto dot_sigma = [](const Eigen::Vector3d& v) {
    ComplexMatrix2 out = ComplexMatrix2::Zero();
    for (int i = 0; i < 3; ++i) out += v[i] * qcore::pauli(i + 1);
    return out;
  };
  return ComplexMatrix4(qcore::kron(dot_sigma(s.a), dot_sigma(s.b + s.b_prime)) +
                        qcore::kron(dot_sigma(s.a_prime), dot_sigma(s.b - s.b_prime)));
}

ChshMaximum chsh_direct_maximization(const TwoQubitDensityMatrix& rho) {
  // Expectations <s_i x s_j>, read straight off the state.
  Eigen::Matrix3d T;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      T(i, j) = (rho.matrix() * ComplexMatrix4(qcore::kron(qcore::pauli(i + 1), qcore::pauli(j + 1))))
                    .trace()
                    .real();
    }
  }

  const Eigen::Vector3d ex = Eigen::Vector3d::UnitX();
  const Eigen::Vector3d ey = Eigen::Vector3d::UnitY();
  const auto starts = start_directions();

  ChshSettings best_settings{ex, ey, ex, ey};
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    for (std::size_t j = 0; j < starts.size(); ++j) {
      if (i == j) continue;
      ChshSettings s{ex, ey, starts[i], starts[j]};
      double previous = -std::numeric_limits<double>::infinity();
      for (int iter = 0; iter < 200; ++iter) {
        s.a = normalized_or(T * (s.b + s.b_prime), s.a);
        s.a_prime = normalized_or(T * (s.b - s.b_prime), s.a_prime);
        s.b = normalized_or(T.transpose() * (s.a + s.a_prime), s.b);
        s.b_prime = normalized_or(T.transpose() * (s.a - s.a_prime), s.b_prime);
        const double value = correlation_value(T, s);
        if (value - previous < 1e-15) break;
        previous = value;
      }
      const double value = correlation_value(T, s);
      if (value > best) {
        best = value;
        best_settings = s;
      }
    }
  }
  const double direct = (rho.matrix() * chsh_operator(best_settings)).trace().real();
  return {direct, best_settings};
}

double evaluate_oracle(MeasureId id, const TwoQubitDensityMatrix& rho) {
  switch (id) {
    case MeasureId::Negativity:
      return oracle_negativity(rho);
    case MeasureId::QD:
      return oracle_discord(rho);
    case MeasureId::MID:
      return oracle_mid(rho);
    case MeasureId::MIN:
      return oracle_min_gqd(rho).min;
    case MeasureId::GQD:
      return oracle_min_gqd(rho).gqd;
    case MeasureId::QDeficit:
      return oracle_quantum_deficit(rho);
    case MeasureId::CHSH:
      return oracle_chsh(rho);
  }
  throw DomainError("unknown measure id");
}

}  // namespace qrgitf::measures
