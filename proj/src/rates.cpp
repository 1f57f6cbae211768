#include "urtu/rates.hpp"

#include <algorithm>

#include "urtu/errors.hpp"
#include "urtu/rng.hpp"

namespace urtu {

const Matrix& channel_matrix(const UrtuParams& p, Channel ch) {
  switch (ch) {
    case Channel::beta_u:
      return p.beta_u;
    case Channel::beta_t:
      return p.beta_t;
    case Channel::gamma_u:
      return p.gamma_u;
    case Channel::gamma_r:
      return p.gamma_r;
  }
  throw DomainError("unknown rate channel");
}

RateFamily linear_family(const UrtuParams& p) {
  return RateFamily{RateKind::linear, &p, 0.0};
}

RateFamily saturating_family(const UrtuParams& p, double c) {
  if (c < 0.0) throw ValidationError("saturating family: c must be >= 0");
  return RateFamily{RateKind::saturating, &p, c};
}

RateFamily make_family(const ParamsFile& file) {
  return file.family == RateKind::linear
             ? linear_family(file.params)
             : saturating_family(file.params, file.saturation);
}

Vector eval_unchecked(const RateFamily& fam, Channel ch, const Vector& x) {
  Vector u = channel_matrix(*fam.params, ch) * x;
  if (fam.kind == RateKind::saturating) {
    const double c = fam.saturation;
    u = u.unaryExpr([c](double v) { return v / (1.0 + c * v); });
  }
  return u;
}

Vector eval(const RateFamily& fam, Channel ch, const Vector& x) {
  if (!fam.params) throw DomainError("rate family has no parameters");
  if (x.size() != fam.params->node_count())
    throw DomainError("eval: dimension mismatch");
  if ((x.array() < 0.0).any() || (x.array() > 1.0).any())
    throw DomainError("eval: point outside [0,1]^N");
  return eval_unchecked(fam, ch, x);
}

Matrix jacobian_at_zero(const RateFamily& fam, Channel ch) {
  // d/du [u / (1 + c u)] = 1 at u = 0, so both kinds reduce to the matrix.
  return channel_matrix(*fam.params, ch);
}

namespace {

constexpr Channel kChannels[] = {Channel::beta_u, Channel::beta_t,
                                 Channel::gamma_u, Channel::gamma_r};

}  // namespace

ConditionReport check_conditions(const RateFamily& fam, int samples,
                                 std::uint64_t seed) {
  ConditionReport rep;
  const UrtuParams& p = *fam.params;
  const Index n = p.node_count();
  Rng rng(seed);

  // C2: exact nullity at the origin.
  const Vector zero = Vector::Zero(n);
  for (Channel ch : kChannels) {
    Vector v = eval_unchecked(fam, ch, zero);
    for (Index i = 0; i < n; ++i)
      if (v(i) != 0.0)
        rep.failures.push_back({"C2", ch, i, -1, zero, v(i)});
  }

  // Supported coordinates per channel, for the difference probes.
  std::vector<std::pair<Index, Index>> support[4];
  for (int c = 0; c < 4; ++c) {
    const Matrix& m = channel_matrix(p, kChannels[c]);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (m(i, j) > 0.0) support[c].emplace_back(i, j);
  }

  const double h = 1e-4;
  const double concavity_tol = 1e-6;  // floor for FD cancellation noise
  for (int s = 0; s < samples; ++s) {
    Vector x(n);
    for (Index i = 0; i < n; ++i) x(i) = rng.uniform(2 * h, 1.0 - 2 * h);

    // C3: ordering between the uncertain and converted variants.
    {
      Vector fu = eval_unchecked(fam, Channel::beta_u, x);
      Vector ft = eval_unchecked(fam, Channel::beta_t, x);
      Vector gu = eval_unchecked(fam, Channel::gamma_u, x);
      Vector gr = eval_unchecked(fam, Channel::gamma_r, x);
      for (Index i = 0; i < n; ++i) {
        if (ft(i) > fu(i))
          rep.failures.push_back({"C3", Channel::beta_t, i, -1, x, ft(i) - fu(i)});
        if (gr(i) > gu(i))
          rep.failures.push_back({"C3", Channel::gamma_r, i, -1, x, gr(i) - gu(i)});
      }
    }

    for (int c = 0; c < 4; ++c) {
      if (support[c].empty()) continue;
      const Channel ch = kChannels[c];

      // C5: strictly positive forward difference along a supported arc.
      {
        const auto [i, j] = support[c][rng.below(support[c].size())];
        Vector xp = x;
        xp(j) += h;
        const double diff = eval_unchecked(fam, ch, xp)(i) -
                            eval_unchecked(fam, ch, x)(i);
        if (!(diff > 0.0)) rep.failures.push_back({"C5", ch, i, j, x, diff});
      }

      // C6: nonpositive second central difference along an arc pair
      // sharing a row.
      {
        const auto [i, j] = support[c][rng.below(support[c].size())];
        Index k = j;
        for (int tries = 0; tries < 8; ++tries) {
          const auto& cand = support[c][rng.below(support[c].size())];
          if (cand.first == i) {
            k = cand.second;
            break;
          }
        }
        double second;
        if (k == j) {
          Vector xp = x, xm = x;
          xp(j) += h;
          xm(j) -= h;
          second = (eval_unchecked(fam, ch, xp)(i) -
                    2.0 * eval_unchecked(fam, ch, x)(i) +
                    eval_unchecked(fam, ch, xm)(i)) /
                   (h * h);
        } else {
          Vector xpp = x, xpm = x, xmp = x, xmm = x;
          xpp(j) += h, xpp(k) += h;
          xpm(j) += h, xpm(k) -= h;
          xmp(j) -= h, xmp(k) += h;
          xmm(j) -= h, xmm(k) -= h;
          second = (eval_unchecked(fam, ch, xpp)(i) -
                    eval_unchecked(fam, ch, xpm)(i) -
                    eval_unchecked(fam, ch, xmp)(i) +
                    eval_unchecked(fam, ch, xmm)(i)) /
                   (4.0 * h * h);
        }
        if (second > concavity_tol)
          rep.failures.push_back({"C6", ch, i, k, x, second});
      }
    }
  }
  return rep;
}

}  // namespace urtu
