#include "urtu/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "urtu/errors.hpp"

namespace urtu {

namespace {

void check_in_omega(const ProbabilityState& s, double tol) {
  if (s.r.size() != s.t.size())
    throw DomainError("state: r/t dimension mismatch");
  if ((s.r.array() < -tol).any() || (s.t.array() < -tol).any() ||
      ((s.r + s.t).array() > 1.0 + tol).any())
    throw DomainError("state outside Omega");
}

// Shared combination of the four spreading-rate vectors into Eq.-style
// derivatives; callers supply fu = fU(r), ft = fT(r), gu = gU(t), gr = gR(t).
Derivative combine(const Vector& r, const Vector& t, const Vector& delta_r,
                   const Vector& delta_t, const Vector& fu, const Vector& ft,
                   const Vector& gu, const Vector& gr) {
  const auto avail = (1.0 - r.array() - t.array());
  Vector dr = (avail * fu.array() - delta_r.array() * r.array() +
               t.array() * ft.array() - r.array() * gr.array())
                  .matrix();
  Vector dt = (avail * gu.array() - delta_t.array() * t.array() +
               r.array() * gr.array() - t.array() * ft.array())
                  .matrix();
  return {std::move(dr), std::move(dt)};
}

Derivative rhs_generic_raw(const Vector& r, const Vector& t,
                           const UrtuParams& p, const RateFamily& fam) {
  return combine(r, t, p.delta_r, p.delta_t, eval_unchecked(fam, Channel::beta_u, r),
                 eval_unchecked(fam, Channel::beta_t, r),
                 eval_unchecked(fam, Channel::gamma_u, t),
                 eval_unchecked(fam, Channel::gamma_r, t));
}

Derivative rhs_linear_raw(const Vector& r, const Vector& t,
                          const UrtuParams& p) {
  return combine(r, t, p.delta_r, p.delta_t, p.beta_u * r, p.beta_t * r,
                 p.gamma_u * t, p.gamma_r * t);
}

}  // namespace

Derivative rhs_generic(const ProbabilityState& s, const UrtuParams& p,
                       const RateFamily& fam) {
  check_in_omega(s, 1e-9);
  return rhs_generic_raw(s.r, s.t, p, fam);
}

Derivative rhs_linear(const ProbabilityState& s, const UrtuParams& p) {
  check_in_omega(s, 1e-9);
  return rhs_linear_raw(s.r, s.t, p);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187,
                 kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33,
                 kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

struct Ode {
  const UrtuParams* p;
  const RateFamily* fam;
  bool linear;

  void operator()(const Vector& y, Vector& dy) const {
    const Index n = y.size() / 2;
    const Vector r = y.head(n);
    const Vector t = y.tail(n);
    Derivative d = linear ? rhs_linear_raw(r, t, *p) : rhs_generic_raw(r, t, *p, *fam);
    dy.resize(2 * n);
    dy.head(n) = d.first;
    dy.tail(n) = d.second;
  }
};

void clamp_accepted(Vector& y, Index n, double tol, double t_now) {
  for (Index i = 0; i < 2 * n; ++i) {
    if (y(i) < 0.0) {
      if (y(i) <= -tol)
        throw NumericError("integrator accuracy: component " +
                           std::to_string(i) + " = " + std::to_string(y(i)) +
                           " below -clamp_tol at t=" + std::to_string(t_now));
      y(i) = 0.0;
    }
  }
  for (Index i = 0; i < n; ++i) {
    const double sum = y(i) + y(n + i);
    if (sum > 1.0) {
      if (sum > 1.0 + tol)
        throw NumericError("integrator accuracy: R+T = " +
                           std::to_string(sum) +
                           " above 1+clamp_tol at t=" + std::to_string(t_now));
      y(i) /= sum;
      y(n + i) /= sum;
    }
  }
}

}  // namespace

Trajectory integrate(const ProbabilityState& s0, const UrtuParams& p,
                     const RateFamily& fam, const Vector& t_grid,
                     const IntegratorOptions& opts) {
  check_in_omega(s0, opts.clamp_tol);
  const Index g_count = t_grid.size();
  if (g_count < 2 || t_grid(0) != 0.0)
    throw DomainError("integrate: grid must start at 0 with >= 2 points");
  for (Index g = 1; g < g_count; ++g)
    if (!(t_grid(g) > t_grid(g - 1)))
      throw DomainError("integrate: grid must be strictly increasing");

  const Index n = s0.node_count();
  const Ode f{&p, &fam, fam.kind == RateKind::linear};

  Trajectory traj;
  traj.times = t_grid;
  traj.r.resize(g_count, n);
  traj.t.resize(g_count, n);

  Vector y(2 * n);
  y.head(n) = s0.r;
  y.tail(n) = s0.t;
  clamp_accepted(y, n, opts.clamp_tol, 0.0);
  traj.r.row(0) = y.head(n);
  traj.t.row(0) = y.tail(n);

  const double span = t_grid(g_count - 1);
  const double h_min = std::max(span * 1e-14, 1e-300);
  double h = std::min(t_grid(1), 0.01 * span);
  if (opts.max_step > 0.0) h = std::min(h, opts.max_step);

  Vector k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n), k5(2 * n), k6(2 * n),
      k7(2 * n), y_new(2 * n), y_stage(2 * n);
  f(y, k1);

  double t_now = 0.0;
  for (Index g = 1; g < g_count; ++g) {
    const double target = t_grid(g);
    while (t_now < target) {
      bool hit = false;
      double h_try = h;
      if (t_now + h_try >= target) {
        h_try = target - t_now;
        hit = true;
      }

      y_stage = y + h_try * (kA21 * k1);
      f(y_stage, k2);
      y_stage = y + h_try * (kA31 * k1 + kA32 * k2);
      f(y_stage, k3);
      y_stage = y + h_try * (kA41 * k1 + kA42 * k2 + kA43 * k3);
      f(y_stage, k4);
      y_stage = y + h_try * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4);
      f(y_stage, k5);
      y_stage =
          y + h_try * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5);
      f(y_stage, k6);
      y_new = y + h_try * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
      f(y_new, k7);

      const Vector err_vec = h_try * (kE1 * k1 + kE3 * k3 + kE4 * k4 +
                                      kE5 * k5 + kE6 * k6 + kE7 * k7);
      double err = 0.0;
      for (Index i = 0; i < 2 * n; ++i) {
        const double scale =
            opts.abs_tol +
            opts.rel_tol * std::max(std::abs(y(i)), std::abs(y_new(i)));
        const double e = err_vec(i) / scale;
        err += e * e;
      }
      err = std::sqrt(err / static_cast<double>(2 * n));

      if (err <= 1.0) {
        t_now = hit ? target : t_now + h_try;
        y = y_new;
        clamp_accepted(y, n, opts.clamp_tol, t_now);
        f(y, k1);  // clamping invalidates the FSAL stage
        double grow =
            err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        h = std::max(h_try * grow, h_min);
      } else {
        h = std::max(h_try * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0),
                     h_min);
        if (h_try <= h_min * (1.0 + 1e-12) && !hit)
          throw StiffnessError("integrate: step size underflow at t=" +
                               std::to_string(t_now));
      }
      if (opts.max_step > 0.0) h = std::min(h, opts.max_step);
    }
    traj.r.row(g) = y.head(n);
    traj.t.row(g) = y.tail(n);
  }
  traj.recompute_aggregates();
  return traj;
}

std::pair<Vector, Vector> aggregate_fractions(const Trajectory& traj) {
  return {traj.r.rowwise().mean(), traj.t.rowwise().mean()};
}

}  // namespace urtu
