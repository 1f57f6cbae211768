#include "urtu/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "urtu/errors.hpp"
#include "urtu/meanfield.hpp"

namespace urtu {

const char* to_string(Regime r) {
  switch (r) {
    case Regime::both_extinct:
      return "BothExtinct";
    case Regime::rumor_dominant:
      return "RumorDominant";
    case Regime::truth_dominant:
      return "TruthDominant";
    default:
      return "Indeterminate";
  }
}

std::pair<Matrix, Matrix> build_q(const RateFamily& fam) {
  const UrtuParams& p = *fam.params;
  Matrix q1 = jacobian_at_zero(fam, Channel::beta_u);
  Matrix q2 = jacobian_at_zero(fam, Channel::gamma_u);
  q1.diagonal() -= p.delta_r;
  q2.diagonal() -= p.delta_t;
  return {std::move(q1), std::move(q2)};
}

PerronResult perron_root(const Matrix& a, double tol, int max_iter) {
  const Index n = a.rows();
  if (n != a.cols()) throw DomainError("perron_root: matrix not square");
  PerronResult res;
  res.vector = Vector::Constant(n, 1.0 / static_cast<double>(n));
  if (n == 1) {
    res.value = a(0, 0);
    res.vector(0) = 1.0;
    return res;
  }
  double prev = -1.0;
  int stable = 0;
  Vector y(n);
  for (int it = 1; it <= max_iter; ++it) {
    y.noalias() = a * res.vector;
    const double norm = y.sum();  // 1-norm: everything is nonnegative
    if (norm == 0.0) {
      res.value = 0.0;
      res.iterations = it;
      return res;
    }
    res.vector = y / norm;
    res.value = norm;
    res.iterations = it;
    if (std::abs(res.value - prev) <= tol * std::max(1.0, res.value)) {
      if (++stable >= 2) return res;
    } else {
      stable = 0;
    }
    prev = res.value;
  }
  throw NumericError("perron_root: power iteration did not converge");
}

double spectral_radius(const Matrix& a) {
  if (a.rows() != a.cols()) throw DomainError("spectral_radius: not square");
  if ((a.array() < 0.0).any())
    throw DomainError("spectral_radius: negative entry");
  Matrix shifted = a;
  shifted.diagonal().array() += 1.0;
  return std::max(0.0, perron_root(shifted).value - 1.0);
}

double spectral_abscissa(const Matrix& a) {
  const Index n = a.rows();
  if (n != a.cols()) throw DomainError("spectral_abscissa: not square");
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j && a(i, j) < 0.0)
        throw DomainError("spectral_abscissa: matrix is not Metzler");
  const double c = 1.0 + a.diagonal().cwiseAbs().maxCoeff();
  Matrix shifted = a;
  shifted.diagonal().array() += c;
  return perron_root(shifted).value - c;
}

std::array<bool, 4> corollary1_criteria(const RateFamily& fam) {
  const UrtuParams& p = *fam.params;
  const Index n = p.node_count();
  const Vector inv_dr = p.delta_r.cwiseInverse();
  const Vector inv_dt = p.delta_t.cwiseInverse();
  auto [q1, q2] = build_q(fam);

  std::array<bool, 4> crit{};
  {
    Matrix m1 = q1 * inv_dr.asDiagonal();
    Matrix m2 = q2 * inv_dt.asDiagonal();
    m1.diagonal().array() += 1.0;
    m2.diagonal().array() += 1.0;
    crit[0] = spectral_radius(m1) < 1.0 && spectral_radius(m2) < 1.0;
  }
  crit[1] = spectral_radius(p.beta_u * inv_dr.asDiagonal()) < 1.0 &&
            spectral_radius(p.gamma_u * inv_dt.asDiagonal()) < 1.0;
  crit[2] = true;
  for (Index j = 0; j < n && crit[2]; ++j)
    crit[2] = p.beta_u.col(j).sum() < p.delta_r(j) &&
              p.gamma_u.col(j).sum() < p.delta_t(j);
  crit[3] = true;
  for (Index i = 0; i < n && crit[3]; ++i)
    crit[3] = p.beta_u.row(i).dot(inv_dr) < 1.0 &&
              p.gamma_u.row(i).dot(inv_dt) < 1.0;
  return crit;
}

Regime classify_regime(double s1, double s2) {
  if (s1 <= 0.0) return s2 <= 0.0 ? Regime::both_extinct : Regime::truth_dominant;
  return s2 <= 0.0 ? Regime::rumor_dominant : Regime::indeterminate;
}

SpectralReport spectral_report(const RateFamily& fam) {
  auto [q1, q2] = build_q(fam);
  SpectralReport rep;
  rep.s1 = spectral_abscissa(q1);
  rep.s2 = spectral_abscissa(q2);
  rep.criteria = corollary1_criteria(fam);
  rep.regime = classify_regime(rep.s1, rep.s2);
  return rep;
}

nlohmann::json to_json(const SpectralReport& rep) {
  return nlohmann::json{
      {"s1", rep.s1},
      {"s2", rep.s2},
      {"criteria",
       {{"a", rep.criteria[0]},
        {"b", rep.criteria[1]},
        {"c", rep.criteria[2]},
        {"d", rep.criteria[3]}}},
      {"regime", to_string(rep.regime)}};
}

Vector equilibrium_map(const RateFamily& fam, EquilibriumKind kind,
                       const Vector& x) {
  const bool rumor = kind == EquilibriumKind::rumor_dominant;
  const Vector f = eval_unchecked(
      fam, rumor ? Channel::beta_u : Channel::gamma_u, x);
  const Vector& delta = rumor ? fam.params->delta_r : fam.params->delta_t;
  return (f.array() / (delta.array() + f.array())).matrix();
}

EquilibriumResult dominant_equilibrium(const RateFamily& fam,
                                       EquilibriumKind kind, double step_tol,
                                       int max_iter) {
  const UrtuParams& p = *fam.params;
  const Index n = p.node_count();
  {
    auto [q1, q2] = build_q(fam);
    const double s = spectral_abscissa(
        kind == EquilibriumKind::rumor_dominant ? q1 : q2);
    if (!(s > 0.0))
      throw DomainError(
          "no-positive-equilibrium: spectral abscissa is not positive");
  }

  Vector x = Vector::Ones(n);
  int it = 0;
  for (; it < max_iter; ++it) {
    Vector next = equilibrium_map(fam, kind, x);
    const double step = (next - x).lpNorm<Eigen::Infinity>();
    x = std::move(next);
    if (step < step_tol) break;
  }
  if (it >= max_iter)
    throw NumericError("dominant_equilibrium: fixed point did not converge");

  ProbabilityState s;
  if (kind == EquilibriumKind::rumor_dominant)
    s = {x, Vector::Zero(n)};
  else
    s = {Vector::Zero(n), x};
  auto [dr, dt] = rhs_generic(s, p, fam);
  const double residual = std::max(dr.lpNorm<Eigen::Infinity>(),
                                   dt.lpNorm<Eigen::Infinity>());
  return {kind, std::move(x), residual, it + 1};
}

}  // namespace urtu
