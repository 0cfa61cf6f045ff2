#include "qrgitf/rgflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qrgitf/errors.hpp"

namespace qrgitf::rgflow {

namespace {

using qcore::ComplexMatrix4;
using qcore::kron;
using qcore::pauli;

constexpr double kDoubletTolerance = 1e-10;

void require_field(double g) {
  if (!std::isfinite(g) || g < 0.0) {
    std::ostringstream msg;
    msg << "field strength must be finite and non-negative, got " << g;
    throw DomainError(msg.str());
  }
}

// sigma_p on `site` (0-based) of a chain of `sites` qubits, site 0 most significant.
Eigen::MatrixXcd site_operator(int site, int p, int sites) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int k = 0; k < sites; ++k) out = kron(out, pauli(k == site ? p : 0));
  return out;
}

constexpr int kX = 1;
constexpr int kZ = 3;

}  // namespace

Coupling::Coupling(double J, double g) : J_(J), g_(g) {
  if (!std::isfinite(J) || !(J > 0.0)) {
    std::ostringstream msg;
    msg << "exchange J must be finite and positive, got " << J;
    throw DomainError(msg.str());
  }
  require_field(g);
}

double FlowedCoupling::field() const {
  switch (saturated) {
    case Saturation::Ordered:
      return 0.0;
    case Saturation::Disordered:
      return std::numeric_limits<double>::infinity();
    case Saturation::None:
      break;
  }
  return std::exp(log_g);
}

FlowedCoupling flow(double g0, int n) {
  require_field(g0);
  if (n < 0) throw DomainError("RG step count must be non-negative");

  FlowedCoupling out;
  out.n = n;
  if (g0 == 0.0) {
    out.log_g = -std::numeric_limits<double>::max();
    out.saturated = Saturation::Ordered;
    return out;
  }
  double log_g = std::ldexp(std::log(g0), n);
  if (!std::isfinite(log_g)) {
    log_g = std::copysign(std::numeric_limits<double>::max(), log_g);
  }
  out.log_g = log_g;
  if (log_g < -kSaturationLogThreshold) {
    out.saturated = Saturation::Ordered;
  } else if (log_g > kSaturationLogThreshold) {
    out.saturated = Saturation::Disordered;
  }
  return out;
}

std::uint64_t system_size(int n) {
  if (n < 0 || n > 62) throw DomainError("system_size: step count must lie in 0..62");
  return std::uint64_t{1} << (n + 1);
}

Coupling rg_map(const Coupling& c) {
  return {c.J() / std::hypot(c.g(), 1.0), c.g() * c.g()};
}

BlockAmplitudes block_amplitudes(const FlowedCoupling& c) {
  switch (c.saturated) {
    case Saturation::Ordered:
      return {0.5, 0.5, 0.5};
    case Saturation::Disordered:
      return {1.0, 0.0, 0.0};
    case Saturation::None:
      break;
  }
  const double g = c.field();
  if (g <= 1.0) {
    const double r = std::hypot(g, 1.0);
    return {0.5 * (1.0 + g / r), 0.5 / (r * (r + g)), 0.5 / r};
  }
  // Expand in 1/g so nothing overflows near the saturation threshold.
  const double t = 1.0 / g;
  const double q = std::hypot(t, 1.0);
  return {0.5 * (1.0 + 1.0 / q), 0.5 * t * t / (q * (q + 1.0)), 0.5 * t / q};
}

GroundState ground_state(double g) {
  require_field(g);
  return ground_state(flow(g, 0));
}

GroundState ground_state(const FlowedCoupling& c) {
  const auto amp = block_amplitudes(c);
  const double g = c.field();
  const double s = std::isinf(g) ? g : std::hypot(g, 1.0) + g;
  ComplexMatrix4 rho = ComplexMatrix4::Zero();
  rho(0, 0) = amp.beta_sq;
  rho(0, 3) = amp.alpha_beta;
  rho(3, 0) = amp.alpha_beta;
  rho(3, 3) = amp.alpha_sq;
  return {std::sqrt(amp.alpha_sq), std::sqrt(amp.beta_sq), s, qcore::TwoQubitDensityMatrix(rho)};
}

ProjectionReport verify_effective_hamiltonian(const Coupling& c) {
  const double J = c.J();
  const double g = c.g();

  const Eigen::MatrixXcd block =
      -J * (kron(pauli(kZ), pauli(kZ)) + g * kron(pauli(kX), pauli(0)));
  const auto block_eig = qcore::jacobi_eigensolve(block);
  // Descending order: the ground doublet sits in the last two columns.
  const double block_split = std::abs(block_eig.values[3] - block_eig.values[2]);
  if (block_split > kDoubletTolerance * std::max(1.0, J)) {
    std::ostringstream msg;
    msg << "block ground doublet split by " << block_split << " at g = " << g;
    throw StructuralError(msg.str());
  }
  const Eigen::MatrixXcd doublet = block_eig.vectors.rightCols(2);

  constexpr int kSites = 4;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(16, 16);
  for (int first : {0, 2}) {
    h -= J * (site_operator(first, kZ, kSites) * site_operator(first + 1, kZ, kSites) +
              g * site_operator(first, kX, kSites));
  }
  h -= J * (site_operator(1, kZ, kSites) * site_operator(2, kZ, kSites) +
            g * site_operator(1, kX, kSites));

  const Eigen::MatrixXcd isometry = kron(doublet, doublet);
  const ComplexMatrix4 effective = isometry.adjoint() * h * isometry;
  const auto eff_eig = qcore::jacobi_eigensolve(effective);

  std::array<double, 4> levels{};
  for (int k = 0; k < 4; ++k) levels[static_cast<std::size_t>(k)] = eff_eig.values[3 - k];

  Eigen::Matrix4d coefficients;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const ComplexMatrix4 basis(kron(pauli(i), pauli(j)));
      coefficients(i, j) = 0.25 * (effective * basis).trace().real();
    }
  }

  const Coupling renormalized = rg_map(c);
  return ProjectionReport{
      c,
      renormalized,
      levels,
      0.5 * (levels[3] - levels[0]),
      renormalized.J() * std::hypot(1.0, renormalized.g()),
      std::max(levels[1] - levels[0], levels[3] - levels[2]),
      block_split,
      coefficients,
  };
}

}  // namespace qrgitf::rgflow
