#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "urtu/graph.hpp"
#include "urtu/types.hpp"

namespace urtu {

/// Per-contact rate parameters of the rumor/truth interplay.
///
/// beta_u(i,j)  rate at which rumor-believer j converts uncertain i
/// beta_t(i,j)  rate at which rumor-believer j converts truth-believer i
/// gamma_u(i,j) rate at which truth-believer j converts uncertain i
/// gamma_r(i,j) rate at which truth-believer j converts rumor-believer i
/// delta_r(i)   rate at which rumor-believer i forgets
/// delta_t(i)   rate at which truth-believer i forgets
///
/// The supports of beta_u/beta_t must coincide with the rumor graph arcs,
/// gamma_u/gamma_r with the truth graph arcs; beta_t <= beta_u and
/// gamma_r <= gamma_u elementwise; forgetting rates strictly positive.
struct UrtuParams {
  Matrix beta_u;
  Matrix beta_t;
  Matrix gamma_u;
  Matrix gamma_r;
  Vector delta_r;
  Vector delta_t;

  Index node_count() const { return delta_r.size(); }

  bool operator==(const UrtuParams& o) const {
    return beta_u == o.beta_u && beta_t == o.beta_t && gamma_u == o.gamma_u &&
           gamma_r == o.gamma_r && delta_r == o.delta_r && delta_t == o.delta_t;
  }
};

struct Violation {
  std::string constraint;
  Index i = -1;
  Index j = -1;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

/// Checks every structural constraint against the two networks; returns the
/// full list of violations. Throws only on dimension mismatch.
ValidationReport validate(const UrtuParams& p, const DirectedNetwork& gr,
                          const DirectedNetwork& gt);

struct SamplingRanges {
  double beta_lo = 0.0, beta_hi = 1.0;
  double gamma_lo = 0.0, gamma_hi = 1.0;
  double delta_lo = 0.1, delta_hi = 1.0;
  /// One scalar per rate matrix instead of independent per-arc draws.
  bool homogeneous = false;
};

/// Draws a parameter set supported on the given networks. The ordered-rate
/// constraints hold by construction: beta_t = r * beta_u with r in (0,1),
/// likewise gamma_r. Deterministic in the seed.
UrtuParams sample_random(const DirectedNetwork& gr, const DirectedNetwork& gt,
                         const SamplingRanges& ranges, std::uint64_t seed);

enum class RateKind { linear, saturating };

const char* to_string(RateKind kind);
RateKind rate_kind_from_string(const std::string& s);

/// On-disk parameter file: the rates plus the spreading-rate family
/// selection and provenance seed.
struct ParamsFile {
  UrtuParams params;
  RateKind family = RateKind::linear;
  double saturation = 0.0;
  std::optional<std::uint64_t> seed;
};

nlohmann::json params_to_json(const ParamsFile& file);
ParamsFile params_from_json(const nlohmann::json& j);

ParamsFile load_params(const std::string& path);
void save_params(const ParamsFile& file, const std::string& path);

}  // namespace urtu
