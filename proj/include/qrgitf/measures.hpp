#pragma once

// Seven correlation quantifiers for the renormalized block state.
//
// Two independent routes are provided for each quantity:
//   * closed forms in the (flowed) field g, valid on the block ground-state family;
//   * definition-level oracles that accept any two-qubit density matrix.
//
// Units follow the established conventions: discord and MID in bits, quantum
// deficit in nats, the rest dimensionless.

#include <array>
#include <optional>
#include <string_view>

#include "qrgitf/qcore.hpp"
#include "qrgitf/rgflow.hpp"

namespace qrgitf::measures {

enum class MeasureId { Negativity, QD, MID, MIN, GQD, QDeficit, CHSH };

inline constexpr std::array<MeasureId, 7> kAllMeasures{
    MeasureId::Negativity, MeasureId::QD,       MeasureId::MID,  MeasureId::MIN,
    MeasureId::GQD,        MeasureId::QDeficit, MeasureId::CHSH,
};

/// Short CLI identifier: neg, qd, mid, min, gqd, qde, chsh.
std::string_view short_name(MeasureId id);
std::optional<MeasureId> parse_measure(std::string_view name);

enum class Units { Bits, Nats, Dimensionless };
std::string_view units_name(Units units);

struct MeasureValue {
  double value;
  Units units;
};

struct ValueRange {
  double lo;
  double hi;
  bool contains(double v, double slack = 0.0) const { return v >= lo - slack && v <= hi + slack; }
};

/// Declared range of each measure over two-qubit states.
ValueRange declared_range(MeasureId id);
Units units_of(MeasureId id);

// ---------------------------------------------------------------------------
// Closed forms. The FlowedCoupling overloads use the fixed-point limits when
// the flow is saturated; the double overloads evaluate at a bare field.
// ---------------------------------------------------------------------------

/// 1 / (2 sqrt(g^2 + 1))
MeasureValue negativity_closed(const rgflow::FlowedCoupling& c);
/// -alpha^2 log2 alpha^2 - beta^2 log2 beta^2 (shared by QD and MID)
MeasureValue discord_mid_closed(const rgflow::FlowedCoupling& c);
/// 1 / (2 (1 + g^2)) (shared by MIN and GQD)
MeasureValue min_gqd_closed(const rgflow::FlowedCoupling& c);
/// -alpha^2 ln alpha^2 - beta^2 ln beta^2
MeasureValue quantum_deficit_closed(const rgflow::FlowedCoupling& c);
/// 2 sqrt(1 + 1 / (g^2 + 1)), the Horodecki value on this family.
MeasureValue chsh_max_closed(const rgflow::FlowedCoupling& c);

MeasureValue negativity_closed(double g);
MeasureValue discord_mid_closed(double g);
MeasureValue min_gqd_closed(double g);
MeasureValue quantum_deficit_closed(double g);
MeasureValue chsh_max_closed(double g);

MeasureValue evaluate_closed(MeasureId id, const rgflow::FlowedCoupling& c);
MeasureValue evaluate_closed(MeasureId id, double g);

// ---------------------------------------------------------------------------
// Oracles on arbitrary two-qubit states.
// ---------------------------------------------------------------------------

inline constexpr int kDefaultDiscordResolution = 64;
inline constexpr int kMinDiscordResolution = 8;

/// (|rho^T_A|_1 - 1) / 2
double oracle_negativity(const qcore::TwoQubitDensityMatrix& rho);

/// Discord with projective measurement on B (bits). Conditional entropy is
/// minimized on a resolution x 2*resolution (theta, phi) grid followed by three
/// local refinement rounds, each shrinking the search window by 10.
/// Throws ConfigurationError for resolution < 8.
double oracle_discord(const qcore::TwoQubitDensityMatrix& rho,
                      int resolution = kDefaultDiscordResolution);

/// Conditional entropy sum_k p_k S(rho_A|k) (bits) after measuring B in `basis`.
double conditional_entropy(const qcore::TwoQubitDensityMatrix& rho,
                           const qcore::MeasurementBasis& basis);

/// I(rho) - I(Pi(rho)) with Pi the dephasing in the marginal eigenbases (bits).
double oracle_mid(const qcore::TwoQubitDensityMatrix& rho);

struct MinGqd {
  double min;
  double gqd;
};
MinGqd oracle_min_gqd(const qcore::TwoQubitDensityMatrix& rho);

/// sum lambda ln lambda - sum P_ab ln P_ab (nats).
double oracle_quantum_deficit(const qcore::TwoQubitDensityMatrix& rho);

/// Horodecki value 2 sqrt(u1 + u2), u1 >= u2 the two largest eigenvalues of T^T T.
double oracle_chsh(const qcore::TwoQubitDensityMatrix& rho);

struct ChshSettings {
  Eigen::Vector3d a;
  Eigen::Vector3d a_prime;
  Eigen::Vector3d b;
  Eigen::Vector3d b_prime;
};

/// The CHSH operator a.s x (b + b').s + a'.s x (b - b').s.
qcore::ComplexMatrix4 chsh_operator(const ChshSettings& settings);

struct ChshMaximum {
  double value;  // max tr(rho B_CHSH)
  ChshSettings settings;
};

/// Direct maximization of tr(rho B_CHSH) over the four unit vectors: a grid of
/// starting pairs (b, b') refined by alternating exact updates of each side.
ChshMaximum chsh_direct_maximization(const qcore::TwoQubitDensityMatrix& rho);

/// Oracle value of a single measure (MIN/GQD pick their half of the pair).
double evaluate_oracle(MeasureId id, const qcore::TwoQubitDensityMatrix& rho);

}  // namespace qrgitf::measures
