#pragma once

#include <utility>

#include "urtu/rates.hpp"
#include "urtu/trajectory.hpp"
#include "urtu/types.hpp"

namespace urtu {

/// Mean-field point inside Omega = {r, t >= 0, r_i + t_i <= 1}.
struct ProbabilityState {
  Vector r;
  Vector t;

  Index node_count() const { return r.size(); }
};

using Derivative = std::pair<Vector, Vector>;  // (dR/dt, dT/dt)

/// Generic-rate right-hand side:
///   dR_i = (1 - R_i - T_i) fU_i(R) - dR_i R_i + T_i fT_i(R) - R_i gR_i(T)
///   dT_i = (1 - R_i - T_i) gU_i(T) - dT_i T_i + R_i gR_i(T) - T_i fT_i(R)
Derivative rhs_generic(const ProbabilityState& s, const UrtuParams& p,
                       const RateFamily& fam);

/// Linear-rate fast path; identical arithmetic to rhs_generic with a
/// linear family.
Derivative rhs_linear(const ProbabilityState& s, const UrtuParams& p);

struct IntegratorOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  /// Components in (-clamp_tol, 0) are zeroed and pair sums in
  /// (1, 1 + clamp_tol] rescaled after each accepted step; anything worse
  /// aborts (Omega-invariance is exact for the model, so a larger breach
  /// is an integrator bug).
  double clamp_tol = 1e-9;
  double max_step = 0.0;  // 0 = unrestricted
};

/// Adaptive Dormand-Prince 5(4) over the output grid (strictly increasing,
/// starting at 0). Throws StiffnessError on step-size underflow.
Trajectory integrate(const ProbabilityState& s0, const UrtuParams& p,
                     const RateFamily& fam, const Vector& t_grid,
                     const IntegratorOptions& opts = {});

/// Population fractions: node means of the marginals.
std::pair<Vector, Vector> aggregate_fractions(const Trajectory& traj);

}  // namespace urtu
