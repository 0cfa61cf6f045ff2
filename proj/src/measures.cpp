#include "qrgitf/measures.hpp"

#include <cmath>
#include <numbers>

#include "qrgitf/errors.hpp"

namespace qrgitf::measures {

using rgflow::FlowedCoupling;

std::string_view short_name(MeasureId id) {
  switch (id) {
    case MeasureId::Negativity: return "neg";
    case MeasureId::QD: return "qd";
    case MeasureId::MID: return "mid";
    case MeasureId::MIN: return "min";
    case MeasureId::GQD: return "gqd";
    case MeasureId::QDeficit: return "qde";
    case MeasureId::CHSH: return "chsh";
  }
  return "?";
}

std::optional<MeasureId> parse_measure(std::string_view name) {
  for (auto id : kAllMeasures) {
    if (short_name(id) == name) return id;
  }
  return std::nullopt;
}

std::string_view units_name(Units units) {
  switch (units) {
    case Units::Bits: return "bits";
    case Units::Nats: return "nats";
    case Units::Dimensionless: return "dimensionless";
  }
  return "?";
}

Units units_of(MeasureId id) {
  switch (id) {
    case MeasureId::QD:
    case MeasureId::MID:
      return Units::Bits;
    case MeasureId::QDeficit:
      return Units::Nats;
    default:
      return Units::Dimensionless;
  }
}

ValueRange declared_range(MeasureId id) {
  switch (id) {
    case MeasureId::Negativity:
    case MeasureId::MIN:
    case MeasureId::GQD:
      return {0.0, 0.5};
    case MeasureId::QD:
      return {0.0, 1.0};
    // Pure block states stay below 1 bit and ln 2; mixed states can exceed
    // both, bounded by the full mutual information and ln 4.
    case MeasureId::MID:
      return {0.0, 2.0};
    case MeasureId::QDeficit:
      return {0.0, 2.0 * std::numbers::ln2};
    case MeasureId::CHSH:
      return {0.0, 2.0 * std::numbers::sqrt2};
  }
  return {0.0, 0.0};
}

MeasureValue negativity_closed(const FlowedCoupling& c) {
  return {rgflow::block_amplitudes(c).alpha_beta, Units::Dimensionless};
}

MeasureValue discord_mid_closed(const FlowedCoupling& c) {
  const auto amp = rgflow::block_amplitudes(c);
  const std::array<double, 2> p{amp.alpha_sq, amp.beta_sq};
  return {qcore::entropy_of_spectrum(p, qcore::LogBase::Bits), Units::Bits};
}

MeasureValue min_gqd_closed(const FlowedCoupling& c) {
  const double ab = rgflow::block_amplitudes(c).alpha_beta;
  return {2.0 * ab * ab, Units::Dimensionless};
}

MeasureValue quantum_deficit_closed(const FlowedCoupling& c) {
  const auto amp = rgflow::block_amplitudes(c);
  const std::array<double, 2> p{amp.alpha_sq, amp.beta_sq};
  return {qcore::entropy_of_spectrum(p, qcore::LogBase::Nats), Units::Nats};
}

MeasureValue chsh_max_closed(const FlowedCoupling& c) {
  const double ab = rgflow::block_amplitudes(c).alpha_beta;
  return {2.0 * std::sqrt(1.0 + 4.0 * ab * ab), Units::Dimensionless};
}

MeasureValue negativity_closed(double g) { return negativity_closed(rgflow::flow(g, 0)); }
MeasureValue discord_mid_closed(double g) { return discord_mid_closed(rgflow::flow(g, 0)); }
MeasureValue min_gqd_closed(double g) { return min_gqd_closed(rgflow::flow(g, 0)); }
MeasureValue quantum_deficit_closed(double g) { return quantum_deficit_closed(rgflow::flow(g, 0)); }
MeasureValue chsh_max_closed(double g) { return chsh_max_closed(rgflow::flow(g, 0)); }

MeasureValue evaluate_closed(MeasureId id, const FlowedCoupling& c) {
  switch (id) {
    case MeasureId::Negativity:
      return negativity_closed(c);
    case MeasureId::QD:
    case MeasureId::MID:
      return discord_mid_closed(c);
    case MeasureId::MIN:
    case MeasureId::GQD:
      return min_gqd_closed(c);
    case MeasureId::QDeficit:
      return quantum_deficit_closed(c);
    case MeasureId::CHSH:
      return chsh_max_closed(c);
  }
  throw DomainError("unknown measure id");
}

MeasureValue evaluate_closed(MeasureId id, double g) { return evaluate_closed(id, rgflow::flow(g, 0)); }

}  // namespace qrgitf::measures
