#pragma once

// Two-site block renormalization of the transverse-field Ising chain
//   H = -J sum_i (sz_i sz_{i+1} + g sx_i).
//
// One RG step maps (J, g) -> (J / sqrt(g^2 + 1), g^2). The flowed field
// g_n = g^(2^n) leaves double range after a handful of steps away from g = 1,
// so it is carried as ln g_n plus a saturation flag.

#include <array>
#include <cstdint>

#include <Eigen/Dense>

#include "qrgitf/qcore.hpp"

namespace qrgitf::rgflow {

/// |ln g_n| beyond which the flowed field is replaced by its fixed-point limit.
inline constexpr double kSaturationLogThreshold = 690.0;

class Coupling {
 public:
  /// Throws DomainError unless J > 0, g >= 0 and both are finite.
  Coupling(double J, double g);

  double J() const noexcept { return J_; }
  double g() const noexcept { return g_; }

 private:
  double J_;
  double g_;
};

enum class Saturation { None, Ordered, Disordered };

struct FlowedCoupling {
  double log_g = 0.0;  // 2^n ln g0; finite (clamped to +-max double when it overflows)
  int n = 0;
  Saturation saturated = Saturation::None;

  /// g_n itself: exp(log_g), or the limit 0 / +inf when saturated.
  double field() const;
};

/// Iterate g' = g^2 n times in log space. Throws DomainError for g0 < 0,
/// non-finite g0 or n < 0. g0 = 0 is the exact ordered fixed point and is
/// always flagged Ordered.
FlowedCoupling flow(double g0, int n);

/// Number of sites represented after n steps of two-site blocking.
std::uint64_t system_size(int n);

Coupling rg_map(const Coupling& c);

/// Squared amplitudes of the block ground state, evaluated without forming
/// g_n^2 (stable up to the saturation threshold and exact at the limits).
struct BlockAmplitudes {
  double alpha_sq;    // weight on |11>
  double beta_sq;     // weight on |00>
  double alpha_beta;  // = 1 / (2 sqrt(g^2 + 1))
};

BlockAmplitudes block_amplitudes(const FlowedCoupling& c);

/// alpha = s / sqrt(s^2 + 1), beta = 1 / sqrt(s^2 + 1), s = sqrt(g^2 + 1) + g,
/// rho = [[beta^2, 0, 0, alpha beta], 0, 0, [alpha beta, 0, 0, alpha^2]].
struct GroundState {
  double alpha;
  double beta;
  double s;  // +inf in the disordered limit
  qcore::TwoQubitDensityMatrix rho;
};

/// Throws DomainError for negative or non-finite g.
GroundState ground_state(double g);
GroundState ground_state(const FlowedCoupling& c);

/// Result of projecting two coupled blocks onto their ground doublets.
struct ProjectionReport {
  Coupling bare;
  Coupling renormalized;             // rg_map(bare)
  std::array<double, 4> levels;      // effective spectrum, ascending
  double half_gap;                   // (E_max - E_min) / 2
  double expected_half_gap;          // J' sqrt(1 + g'^2)
  double level_degeneracy_split;     // max splitting inside each of the two levels
  double block_doublet_split;        // splitting of each block's ground doublet
  Eigen::Matrix4d pauli_coefficients;  // c_ij = tr(H_eff s_i x s_j) / 4; gauge dependent

  double half_gap_error() const { return std::abs(half_gap - expected_half_gap); }
  bool passes(double tolerance) const {
    return half_gap_error() <= tolerance && level_degeneracy_split <= tolerance;
  }
};

/// Builds H^B + H^BB on two blocks (16 states): intra-block -J(s1z s2z + g s1x)
/// for each block and the single inter-block term -J(s2z s3z + g s2x),
/// projects onto the tensor product of the block ground doublets and
/// diagonalizes the 4x4 effective operator.
/// Throws StructuralError when a block doublet is not degenerate to 1e-10.
ProjectionReport verify_effective_hamiltonian(const Coupling& c);

}  // namespace qrgitf::rgflow
