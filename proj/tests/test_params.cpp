#include <doctest.h>

#include <cstdio>
#include <string>

#include "fixtures.hpp"
#include "urtu/analysis.hpp"
#include "urtu/errors.hpp"
#include "urtu/params.hpp"
#include "urtu/rates.hpp"

using namespace urtu;

TEST_SUITE("params") {

TEST_CASE("validate flags support and ordering violations") {
  const auto gr = fixtures::ring2();
  const auto gt = fixtures::ring2();
  auto p = fixtures::homogeneous(gr, gt, 0.5, 0.3, 0.4, 0.2, 1.0, 1.0);
  CHECK(validate(p, gr, gt).ok());

  SUBCASE("positive entry off the rumor graph") {
    p.beta_u(0, 0) = 0.1;
    const auto rep = validate(p, gr, gt);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.to_string().find("support(beta_u)") != std::string::npos);
  }
  SUBCASE("beta_t above beta_u") {
    p.beta_t(0, 1) = 0.9;
    const auto rep = validate(p, gr, gt);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.to_string().find("beta_t > beta_u") != std::string::npos);
  }
  SUBCASE("zero on an arc") {
    p.gamma_u(0, 1) = 0.0;
    p.gamma_r(0, 1) = 0.0;
    CHECK_FALSE(validate(p, gr, gt).ok());
  }
  SUBCASE("nonpositive forgetting rate") {
    p.delta_r(1) = 0.0;
    CHECK_FALSE(validate(p, gr, gt).ok());
  }
  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(validate(p, gr, fixtures::directed_cycle(3)),
                    ValidationError);
  }
}

TEST_CASE("sampled parameters always validate") {
  const auto gr = fixtures::random_connected(12, 0.25, 1);
  const auto gt = fixtures::random_connected(12, 0.25, 2);
  SamplingRanges ranges;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CAPTURE(seed);
    CHECK(validate(sample_random(gr, gt, ranges, seed), gr, gt).ok());
  }
  ranges.homogeneous = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    CHECK(validate(sample_random(gr, gt, ranges, seed), gr, gt).ok());
}

TEST_CASE("sampling is deterministic in the seed") {
  const auto gr = fixtures::random_connected(8, 0.3, 5);
  CHECK(sample_random(gr, gr, {}, 99) == sample_random(gr, gr, {}, 99));
  CHECK_FALSE(sample_random(gr, gr, {}, 99) == sample_random(gr, gr, {}, 100));
}

TEST_CASE("bad sampling ranges are rejected") {
  const auto gr = fixtures::ring2();
  SamplingRanges ranges;
  ranges.beta_hi = 0.0;
  CHECK_THROWS_AS(sample_random(gr, gr, ranges, 1), ValidationError);
  ranges = {};
  ranges.delta_lo = -0.5;
  CHECK_THROWS_AS(sample_random(gr, gr, ranges, 1), ValidationError);
}

TEST_CASE("default ranges produce both signs of s(Q1)") {
  // the sweep's default sampling mode: one scalar per rate matrix
  const auto net = generate_small_world(20, 2, 0.0, 8);
  SamplingRanges ranges;
  ranges.homogeneous = true;
  int negative = 0, positive = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto p = sample_random(net, net, ranges, seed);
    const auto fam = linear_family(p);
    const double s1 = spectral_abscissa(build_q(fam).first);
    (s1 > 0 ? positive : negative)++;
  }
  CHECK(positive > 0);
  CHECK(negative > 0);
  CHECK(positive + negative == 1000);
}

TEST_CASE("JSON round trip reproduces the parameters exactly") {
  const auto gr = fixtures::random_connected(9, 0.3, 12);
  const auto gt = fixtures::random_connected(9, 0.3, 13);
  ParamsFile file;
  file.params = sample_random(gr, gt, {}, 4242);
  file.family = RateKind::saturating;
  file.saturation = 0.75;
  file.seed = 4242;

  const std::string path = "/tmp/urtu_test_params.json";
  save_params(file, path);
  const ParamsFile back = load_params(path);
  CHECK(back.params == file.params);  // exact, not approximate
  CHECK(back.family == RateKind::saturating);
  CHECK(back.saturation == 0.75);
  REQUIRE(back.seed.has_value());
  CHECK(*back.seed == 4242);
  std::remove(path.c_str());
}

TEST_CASE("dense matrix encoding loads too") {
  nlohmann::json j;
  j["n"] = 2;
  j["beta_u"] = {{"format", "dense"}, {"rows", {{0.0, 0.5}, {0.25, 0.0}}}};
  j["beta_t"] = {{"format", "dense"}, {"rows", {{0.0, 0.25}, {0.125, 0.0}}}};
  j["gamma_u"] = {{"format", "dense"}, {"rows", {{0.0, 0.5}, {0.5, 0.0}}}};
  j["gamma_r"] = {{"format", "dense"}, {"rows", {{0.0, 0.5}, {0.5, 0.0}}}};
  j["delta_r"] = {1.0, 1.0};
  j["delta_t"] = {1.0, 1.0};
  const ParamsFile file = params_from_json(j);
  CHECK(file.params.beta_u(0, 1) == 0.5);
  CHECK(file.params.beta_t(1, 0) == 0.125);
  CHECK(file.family == RateKind::linear);
}

TEST_CASE("malformed params files raise parse errors") {
  nlohmann::json j;
  j["n"] = 2;
  j["beta_u"] = {{"format", "triplets"}, {"entries", {{0, 5, 1.0}}}};
  CHECK_THROWS_AS(params_from_json(j), ParseError);
}

}  // TEST_SUITE
