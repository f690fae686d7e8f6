#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "qrl/adam.hpp"
#include "qrl/rng.hpp"

using namespace qrl;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("zero gradient leaves parameters untouched", "[adam]") {
  std::vector<double> params = {1.0, -2.0, 0.25};
  const std::vector<double> before = params;
  AdamState state(params.size(), 0.05);
  const std::vector<double> grads(params.size(), 0.0);
  adam_step(params, grads, state);
  CHECK(params == before);
  CHECK(state.t == 1);
}

TEST_CASE("first step moves by about -lr * sign(gradient)", "[adam]") {
  std::vector<double> params = {1.0, -2.0};
  AdamState state(params.size(), 0.01);
  const std::vector<double> grads = {0.3, -0.7};
  adam_step(params, grads, state);
  CHECK_THAT(params[0], WithinAbs(1.0 - 0.01, 1e-7));
  CHECK_THAT(params[1], WithinAbs(-2.0 + 0.01, 1e-7));
}

TEST_CASE("minimizes a quadratic bowl", "[adam]") {
  std::vector<double> x = {1.0};
  AdamState state(1, 0.1);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> grad = {2.0 * x[0]};
    adam_step(x, grad, state);
  }
  CHECK(std::abs(x[0]) < 0.01);
}

TEST_CASE("length mismatch is rejected", "[adam]") {
  std::vector<double> params = {1.0, 2.0};
  AdamState state(2, 0.01);
  const std::vector<double> grads = {1.0};
  CHECK_THROWS_AS(adam_step(params, grads, state), std::invalid_argument);
  AdamState wrong(3, 0.01);
  const std::vector<double> ok = {1.0, 1.0};
  CHECK_THROWS_AS(adam_step(params, ok, wrong), std::invalid_argument);
}

TEST_CASE("first-step magnitude never exceeds the learning rate", "[adam]") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> params = {uniform_in(rng, -5.0, 5.0)};
    const double before = params[0];
    AdamState state(1, 0.003);
    const std::vector<double> grads = {uniform_in(rng, -10.0, 10.0)};
    adam_step(params, grads, state);
    CHECK(std::abs(params[0] - before) <= 0.003 * (1.0 + 1e-12));
  }
}

TEST_CASE("moments follow the update recurrences", "[adam]") {
  std::vector<double> params = {0.0};
  AdamState state(1, 0.01);
  adam_step(params, std::vector<double>{2.0}, state);
  CHECK_THAT(state.m[0], WithinRel(0.1 * 2.0, 1e-12));
  CHECK_THAT(state.v[0], WithinRel(0.001 * 4.0, 1e-12));
  adam_step(params, std::vector<double>{2.0}, state);
  CHECK_THAT(state.m[0], WithinRel(0.9 * 0.2 + 0.1 * 2.0, 1e-12));
  CHECK(state.t == 2);
}
