#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urtu/params.hpp"
#include "urtu/types.hpp"

namespace urtu {

/// The four spreading-rate functions, keyed by the rate matrix they read.
enum class Channel { beta_u, beta_t, gamma_u, gamma_r };

const Matrix& channel_matrix(const UrtuParams& p, Channel ch);

/// Spreading-rate family over a parameter set. The linear kind maps x to
/// M x rowwise; the saturating kind applies u -> u / (1 + c u) to each
/// linear aggregate. Both have Jacobian M at the origin, so they share all
/// spectral thresholds.
struct RateFamily {
  RateKind kind = RateKind::linear;
  const UrtuParams* params = nullptr;
  double saturation = 0.0;  // c, saturating kind only
};

RateFamily linear_family(const UrtuParams& p);
RateFamily saturating_family(const UrtuParams& p, double c);
RateFamily make_family(const ParamsFile& file);

/// Scalar transfer applied to a linear aggregate u >= 0.
inline double rate_value(const RateFamily& fam, double u) {
  return fam.kind == RateKind::linear ? u : u / (1.0 + fam.saturation * u);
}

/// Evaluates one spreading-rate function at x in [0,1]^N.
Vector eval(const RateFamily& fam, Channel ch, const Vector& x);

/// As eval, without the domain check (integrator stages may leave [0,1]^N
/// by less than the step tolerance).
Vector eval_unchecked(const RateFamily& fam, Channel ch, const Vector& x);

/// Exact Jacobian at the origin; equals the underlying rate matrix for both
/// shipped kinds.
Matrix jacobian_at_zero(const RateFamily& fam, Channel ch);

struct ConditionFailure {
  std::string condition;  // "C2", "C3", "C5", "C6"
  Channel channel;
  Index row = -1;
  Index col = -1;
  Vector point;
  double value = 0.0;
};

struct ConditionReport {
  std::vector<ConditionFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// Monte Carlo check of the generic-rate conditions on sampled points of
/// [0,1]^N: nullity exactly, ordering pointwise, monotonicity via positive
/// forward differences along supported coordinates, concavity via
/// nonpositive second central differences.
ConditionReport check_conditions(const RateFamily& fam, int samples,
                                 std::uint64_t seed);

}  // namespace urtu
