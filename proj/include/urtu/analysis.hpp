#pragma once

#include <array>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "urtu/rates.hpp"
#include "urtu/types.hpp"

namespace urtu {

/// Predicted asymptotic behaviour from the signs of the two spectral
/// abscissas. Ties (s = 0) land on the extinction side of each test.
enum class Regime { both_extinct, rumor_dominant, truth_dominant, indeterminate };

const char* to_string(Regime r);

/// Linearizations at the origin: Q1 = dfU(0)/dx - diag(delta_r),
/// Q2 = dgU(0)/dx - diag(delta_t). Metzler, irreducible when the networks
/// are strongly connected.
std::pair<Matrix, Matrix> build_q(const RateFamily& fam);

struct PerronResult {
  double value = 0.0;
  Vector vector;  // 1-norm-normalized nonnegative eigenvector iterate
  int iterations = 0;
};

/// Dominant eigenvalue of a nonnegative matrix by power iteration with a
/// deterministic all-ones start. The +I shift below keeps the iteration
/// aperiodic without changing the Perron root.
PerronResult perron_root(const Matrix& nonneg, double tol = 1e-13,
                         int max_iter = 300000);

/// rho(A) for A >= 0, computed as perron_root(A + I) - 1.
double spectral_radius(const Matrix& a);

/// s(A) for Metzler A, computed as rho(A + cI) - c with c = 1 + max|A_ii|.
double spectral_abscissa(const Matrix& a);

/// Corollary-style sufficient conditions for extinction of both processes:
/// (a) rho(Q1 Dr^-1 + I) < 1 and rho(Q2 Dt^-1 + I) < 1
/// (b) rho(Bu Dr^-1) < 1 and rho(Cu Dt^-1) < 1
/// (c) column sums of Bu below delta_r and of Cu below delta_t
/// (d) row sums of Bu Dr^-1 and Cu Dt^-1 below 1
std::array<bool, 4> corollary1_criteria(const RateFamily& fam);

Regime classify_regime(double s1, double s2);

struct SpectralReport {
  double s1 = 0.0;
  double s2 = 0.0;
  std::array<bool, 4> criteria{};
  Regime regime = Regime::both_extinct;
};

SpectralReport spectral_report(const RateFamily& fam);
nlohmann::json to_json(const SpectralReport& rep);

enum class EquilibriumKind { rumor_dominant, truth_dominant };

struct EquilibriumResult {
  EquilibriumKind kind;
  Vector point;     // strictly inside (0,1)^N
  double residual;  // sup norm of the full rhs at the embedded state
  int iterations;
};

/// One application of the fixed-point map H_i(x) = f_i(x)/(delta_i + f_i(x))
/// with (f, delta) = (fU, delta_r) for the rumor kind, (gU, delta_t) for
/// the truth kind.
Vector equilibrium_map(const RateFamily& fam, EquilibriumKind kind,
                       const Vector& x);

/// Unique positive fixed point of H, iterated downward from the all-ones
/// supersolution. Requires the matching spectral abscissa to be positive.
EquilibriumResult dominant_equilibrium(const RateFamily& fam,
                                       EquilibriumKind kind,
                                       double step_tol = 1e-13,
                                       int max_iter = 100000);

}  // namespace urtu
