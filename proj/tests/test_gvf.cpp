#include <doctest.h>

#include <cmath>

#include "gvfd/errors.hpp"
#include "gvfd/gvf.hpp"
#include "oracles.hpp"

using namespace gvfd;

namespace {
const CumulantSpec kGrowth{CumulantSpec::Kind::echo_bit, 0};
const CumulantSpec kNoGrowth{CumulantSpec::Kind::echo_bit, 1};
const DiscountSpec kEcho{DiscountSpec::Kind::event_terminated, 0.9};
const TargetPolicy kWater = TargetPolicy::always(Action::water);
}  // namespace

TEST_CASE("echo cumulant reads the event bit") {
  CHECK(echo_cumulant(Observation::from_growth(true), kGrowth) == 1.0);
  CHECK(echo_cumulant(Observation::from_growth(true), kNoGrowth) == 0.0);
  CHECK(echo_cumulant(Observation::from_growth(false), kNoGrowth) == 1.0);
  CHECK_THROWS_AS(echo_cumulant(Observation{}, CumulantSpec{CumulantSpec::Kind::parameterized, 0}),
                  ContractError);
}

TEST_CASE("echo discount terminates on the event") {
  CHECK(echo_discount(1.0, 0.9) == 0.0);
  CHECK(echo_discount(0.0, 0.9) == 0.9);
  CHECK(echo_discount(0.0, 0.0) == 0.0);
}

TEST_CASE("predict is a floored dot product") {
  GvfWeights w(4);
  const auto x = FeatureVector::one_hot(4, 2);
  CHECK(predict(w, x) == 1e-6);
  w.w[2] = 0.9;
  CHECK(predict(w, x) == 0.9);
  w.w[2] = 1.0;
  CHECK(predict(w, x) == 1.0);
  w.w[2] = -3.0;
  CHECK(predict(w, x) == 1e-6);
  CHECK_THROWS_AS(predict(w, FeatureVector::one_hot(5, 0)), ContractError);
}

TEST_CASE("importance ratio") {
  const BehaviorDistribution uniform{0.5, 0.5};
  CHECK(importance_ratio(kWater, uniform, Action::water) == 2.0);
  CHECK(importance_ratio(kWater, uniform, Action::not_water) == 0.0);
  const auto p = TargetPolicy::make({0.3, 0.7});
  CHECK(importance_ratio(p, p.probs, Action::not_water) == doctest::Approx(1.0));
  CHECK(importance_ratio(p, p.probs, Action::water) == doctest::Approx(1.0));
  CHECK_THROWS_AS(importance_ratio(kWater, {1.0, 0.0}, Action::water), ContractError);
}

TEST_CASE("target policies validate") {
  CHECK_THROWS_AS(TargetPolicy::make({0.5, 0.6}), ContractError);
  CHECK_THROWS_AS(TargetPolicy::make({-0.1, 1.1}), ContractError);
  CHECK_NOTHROW(TargetPolicy::make({0.25, 0.75}));
}

TEST_CASE("td_update examples") {
  const auto xi = FeatureVector::one_hot(8, 3);
  const auto xj = FeatureVector::one_hot(8, 5);

  GvfWeights w(8);
  w.w[3] = 0.4;
  w.w[5] = 0.7;
  const GvfWeights before = w;
  (void)td_update(w, xi, xj, 1.0, 0.9, 0.0, 0.1);
  CHECK(w == before);

  GvfWeights z(8);
  CHECK(td_update(z, xi, xj, 1.0, 0.0, 1.0, 0.1) == 1.0);
  CHECK(z.w[3] == doctest::Approx(0.1));

  GvfWeights fp(8);
  fp.w[5] = 0.5;
  fp.w[3] = 0.0 + 0.9 * 0.5;
  const GvfWeights fp0 = fp;
  CHECK(td_update(fp, xi, xj, 0.0, 0.9, 1.0, 0.1) == doctest::Approx(0.0));
  CHECK(fp.w[3] == doctest::Approx(fp0.w[3]));
}

TEST_CASE("td_update is linear in rho") {
  const auto xi = FeatureVector::one_hot(4, 0);
  const auto xj = FeatureVector::one_hot(4, 1);
  GvfWeights a(4), b(4);
  a.w = b.w = {0.2, 0.5, 0.0, 0.0};
  (void)td_update(a, xi, xj, 0.0, 0.9, 1.0, 0.1);
  (void)td_update(b, xi, xj, 0.0, 0.9, 2.0, 0.1);
  CHECK(b.w[0] - 0.2 == doctest::Approx(2.0 * (a.w[0] - 0.2)));
}

TEST_CASE("td_update rejects bad inputs") {
  const auto x = FeatureVector::one_hot(2, 0);
  GvfWeights w(2);
  CHECK_THROWS_AS(td_update(w, x, x, NAN, 0.9, 1.0, 0.1), NumericError);
  CHECK_THROWS_AS(td_update(w, x, x, 1.0, INFINITY, 1.0, 0.1), NumericError);
  CHECK_THROWS_AS(td_update(w, x, x, 1.0, 0.9, 1.0, 0.0), ContractError);
  CHECK_THROWS_AS(td_update(w, x, x, 1.0, 0.9, -1.0, 0.1), ContractError);
  w.w[0] = 1e308;
  CHECK_THROWS_AS(td_update(w, x, FeatureVector::one_hot(2, 1), 0.0, 0.9, 10.0, 10.0),
                  NumericError);
}

TEST_CASE("log transform") {
  CHECK(log_transform(1.0) == 0.0);
  CHECK_FALSE(std::signbit(log_transform(1.0)));
  CHECK(log_transform(0.9) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(log_transform(0.81) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(log_transform(1e-6) == 9.0);
  CHECK(log_transform(1.5) == 0.0);
  CHECK(log_transform(0.5, 1.0) == 1.0);
  CHECK_THROWS_AS(log_transform(0.0), NumericError);
  CHECK_THROWS_AS(log_transform(-1.0), NumericError);
}

TEST_CASE("log transform decreases on [floor, 1] before clipping") {
  double prev = INFINITY;
  for (double v = 0.4; v <= 1.0; v += 0.01) {
    const double t = std::log(v) / std::log(0.9);
    CHECK(t < prev);
    CHECK(log_transform(v) == doctest::Approx(std::clamp(t, 0.0, 9.0)));
    prev = t;
  }
}

TEST_CASE("dp oracle matches forward rollouts") {
  const auto growth = dp_oracle(kWater, kGrowth, kEcho);
  const auto no_growth = dp_oracle(kWater, kNoGrowth, kEcho);
  const auto ref_g = oracle::echo_by_rollout(0, 0.9);
  const auto ref_n = oracle::echo_by_rollout(1, 0.9);
  for (int p = 0; p < 4; ++p) {
    CHECK(growth[p] == doctest::Approx(ref_g[p]).epsilon(1e-12));
    CHECK(no_growth[p] == doctest::Approx(ref_n[p]).epsilon(1e-12));
  }
  // Frozen from the rollout oracle.
  CHECK(growth == std::array<double, 4>{0.81, 0.9, 1.0, 1.0});
  CHECK(no_growth == std::array<double, 4>{1.0, 1.0, 0.81, 0.9});
}

TEST_CASE("transformed oracle values are integers and distinguish the phases") {
  const auto g = dp_oracle(kWater, kGrowth, kEcho);
  const auto n = dp_oracle(kWater, kNoGrowth, kEcho);
  const std::array<std::pair<double, double>, 4> expected{{{2, 0}, {1, 0}, {0, 2}, {0, 1}}};
  for (int p = 0; p < 4; ++p) {
    const double tg = log_transform(g[p]);
    const double tn = log_transform(n[p]);
    CHECK(std::abs(tg - std::round(tg)) < 1e-9);
    CHECK(std::abs(tn - std::round(tn)) < 1e-9);
    CHECK(tg == doctest::Approx(expected[p].first));
    CHECK(tn == doctest::Approx(expected[p].second));
  }
}

TEST_CASE("dp oracle with zero continuation is myopic") {
  const DiscountSpec myopic{DiscountSpec::Kind::fixed, 0.0};
  const auto v = dp_oracle(kWater, kGrowth, myopic);
  for (int p = 0; p < 4; ++p) {
    CHECK(v[p] == step(EnvState{p}, Action::water).observation[0]);
  }
}

TEST_CASE("dp oracle with a fixed discount solves the linear system") {
  // Fixed gamma, stochastic target: v = (I - gamma P)^-1 c on the 4-cycle,
  // where c(p) is the expected echo bit. Closed form for a cycle:
  // v(p) = sum_k gamma^k c(p + k) / (1 - gamma^4) over k = 0..3.
  const auto target = TargetPolicy::make({0.3, 0.7});
  const DiscountSpec fixed{DiscountSpec::Kind::fixed, 0.9};
  const auto v = dp_oracle(target, kGrowth, fixed);
  std::array<double, 4> c{};
  for (int p = 0; p < 4; ++p) {
    c[p] = 0.3 * reward_for(p, Action::not_water) + 0.7 * reward_for(p, Action::water);
  }
  for (int p = 0; p < 4; ++p) {
    double ref = 0.0;
    for (int k = 0; k < 4; ++k) ref += std::pow(0.9, k) * c[(p + k) % 4];
    ref /= 1.0 - std::pow(0.9, 4);
    CHECK(v[p] == doctest::Approx(ref).epsilon(1e-9));
  }
}
