#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qrl/vqc_policy.hpp"

using namespace qrl;
using Catch::Matchers::WithinAbs;

namespace {
constexpr double kPi = std::numbers::pi;

PolicyParams random_params(Rng& rng) {
  PolicyParams p;
  for (auto& x : p.w) x = uniform_in(rng, -kPi, kPi);
  return p;
}

std::array<double, 4> random_obs(Rng& rng) {
  return {uniform_in(rng, -2.4, 2.4), uniform_in(rng, -3.0, 3.0), uniform_in(rng, -0.2, 0.2),
          uniform_in(rng, -3.0, 3.0)};
}
}  // namespace

TEST_CASE("observation encoding", "[policy]") {
  SECTION("zero maps to zero") {
    const EncodedState enc = encode_state({0.0, 0.0, 0.0, 0.0});
    for (double a : enc.angles) CHECK(a == 0.0);
  }
  SECTION("a component at its bound maps to pi") {
    const EncodedState enc = encode_state({2.4, 0.0, 0.0, 0.0});
    CHECK_THAT(enc.angles[0], WithinAbs(kPi, 1e-15));
    CHECK(enc.angles[1] == 0.0);
  }
  SECTION("values beyond the bound clamp") {
    const EncodedState enc = encode_state({0.0, 10.0, 0.0, 0.0});
    CHECK_THAT(enc.angles[1], WithinAbs(kPi, 1e-15));
    const EncodedState neg = encode_state({0.0, 0.0, -5.0, 0.0});
    CHECK_THAT(neg.angles[2], WithinAbs(-kPi, 1e-15));
  }
  SECTION("angles never leave [-pi, pi]") {
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
      const EncodedState enc = encode_state({uniform_in(rng, -50.0, 50.0),
                                             uniform_in(rng, -50.0, 50.0),
                                             uniform_in(rng, -50.0, 50.0),
                                             uniform_in(rng, -50.0, 50.0)});
      for (double a : enc.angles) {
        CHECK(a >= -kPi);
        CHECK(a <= kPi);
      }
    }
  }
  SECTION("NaN observation is rejected") {
    CHECK_THROWS_AS(encode_state({std::nan(""), 0.0, 0.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("ansatz structure is pinned gate-for-gate", "[policy]") {
  Rng rng(3);
  const PolicyParams params = random_params(rng);
  const EncodedState enc{{0.1, -0.2, 0.3, -0.4}};
  const CircuitSpec spec = build_policy_circuit(params, enc);
  spec.validate();

  REQUIRE(spec.n_qubits == 4);
  REQUIRE(spec.n_params == 48);
  REQUIRE(spec.ops.size() == 63);
  REQUIRE(spec.observables.size() == 2);

  std::size_t i = 0;
  // data encoding
  for (int q = 0; q < 4; ++q, ++i) {
    CHECK(spec.ops[i].kind == GateKind::RY);
    CHECK(spec.ops[i].wire0 == q);
    CHECK(spec.ops[i].angle == enc.angles[static_cast<std::size_t>(q)]);
    CHECK_FALSE(spec.ops[i].param_index.has_value());
  }
  // four variational layers, CNOT chains between them
  const GateKind axis_order[3] = {GateKind::RX, GateKind::RY, GateKind::RZ};
  for (int layer = 0; layer < 4; ++layer) {
    for (int q = 0; q < 4; ++q)
      for (int axis = 0; axis < 3; ++axis, ++i) {
        CHECK(spec.ops[i].kind == axis_order[axis]);
        CHECK(spec.ops[i].wire0 == q);
        REQUIRE(spec.ops[i].param_index.has_value());
        CHECK(*spec.ops[i].param_index == PolicyParams::index(layer, q, axis));
      }
    if (layer < 3) {
      for (int q = 0; q < 3; ++q, ++i) {
        CHECK(spec.ops[i].kind == GateKind::CNOT);
        CHECK(spec.ops[i].wire0 == q);
        CHECK(spec.ops[i].wire1 == q + 1);
      }
    }
  }
  // readout wiring
  CHECK(spec.ops[i].kind == GateKind::CNOT);
  CHECK(spec.ops[i].wire0 == 0);
  CHECK(spec.ops[i].wire1 == 2);
  ++i;
  CHECK(spec.ops[i].kind == GateKind::CNOT);
  CHECK(spec.ops[i].wire0 == 1);
  CHECK(spec.ops[i].wire1 == 3);
  ++i;
  REQUIRE(i == spec.ops.size());
  CHECK(spec.observables[0].axis == PauliAxis::Y);
  CHECK(spec.observables[0].wire == 2);
  CHECK(spec.observables[1].axis == PauliAxis::Y);
  CHECK(spec.observables[1].wire == 3);
}

TEST_CASE("policy forward pass", "[policy]") {
  SECTION("all-zero parameters and observation give a uniform distribution") {
    const PolicyParams zero{};
    const auto e = policy_expectations(zero, {0.0, 0.0, 0.0, 0.0});
    CHECK_THAT(e[0], WithinAbs(0.0, 1e-12));
    CHECK_THAT(e[1], WithinAbs(0.0, 1e-12));
    const ActionDistribution dist = policy_forward(zero, {0.0, 0.0, 0.0, 0.0});
    CHECK(dist.probs[0] == 0.5);
    CHECK(dist.probs[1] == 0.5);
  }
  SECTION("softmax closed form at expectations (1, -1)") {
    const ActionDistribution dist = softmax_pair(1.0, -1.0, 1.0);
    const double expected0 = std::exp(2.0) / (std::exp(2.0) + 1.0);
    CHECK_THAT(dist.probs[0], WithinAbs(expected0, 1e-12));
    CHECK_THAT(dist.probs[1], WithinAbs(1.0 - expected0, 1e-12));
    CHECK_THAT(dist.probs[0], WithinAbs(0.8808, 5e-5));
  }
  SECTION("temperature rescales the logits") {
    const ActionDistribution hot = softmax_pair(1.0, -1.0, 2.0);
    const ActionDistribution direct = softmax_pair(0.5, -0.5, 1.0);
    CHECK_THAT(hot.probs[0], WithinAbs(direct.probs[0], 1e-15));
    CHECK_THROWS_AS(softmax_pair(0.0, 0.0, 0.0), std::domain_error);
  }
  SECTION("probabilities form a simplex for random inputs") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const PolicyParams params = random_params(rng);
      const ActionDistribution dist = policy_forward(params, random_obs(rng));
      CHECK(dist.probs[0] > 0.0);
      CHECK(dist.probs[0] < 1.0);
      CHECK(dist.probs[1] > 0.0);
      CHECK(dist.probs[1] < 1.0);
      CHECK_THAT(dist.probs[0] + dist.probs[1], WithinAbs(1.0, 1e-12));
    }
  }
  SECTION("forward agrees with the dense unitary oracle") {
    Rng rng(23);
    const PolicyParams params = random_params(rng);
    const std::array<double, 4> obs = random_obs(rng);
    const CircuitSpec spec = build_policy_circuit(params, encode_state(obs));
    const testing::CMatrix u = testing::circuit_unitary(spec, params.w);
    std::vector<Complex> start(16, Complex{0.0, 0.0});
    start[0] = 1.0;
    const std::vector<Complex> final_state = testing::matvec(u, start);
    const auto e = policy_expectations(params, obs);
    CHECK_THAT(e[0], WithinAbs(testing::dense_expectation(final_state, PauliAxis::Y, 2, 4), 1e-10));
    CHECK_THAT(e[1], WithinAbs(testing::dense_expectation(final_state, PauliAxis::Y, 3, 4), 1e-10));
  }
}

TEST_CASE("action sampling", "[policy]") {
  SECTION("a degenerate distribution always yields its support") {
    Rng rng(1);
    const ActionDistribution sure{{1.0, 0.0}};
    for (int i = 0; i < 100; ++i) CHECK(sample_action(sure, rng) == 0);
  }
  SECTION("fixed seed reproduces the sequence") {
    const ActionDistribution dist{{0.5, 0.5}};
    Rng a(12345);
    Rng b(12345);
    for (int i = 0; i < 1000; ++i) REQUIRE(sample_action(dist, a) == sample_action(dist, b));
  }
  SECTION("empirical frequency matches the distribution") {
    const ActionDistribution dist{{0.3, 0.7}};
    Rng rng(999);
    int ones = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ones += sample_action(dist, rng);
    const double freq = static_cast<double>(ones) / draws;
    CHECK_THAT(freq, WithinAbs(0.7, 0.01));
  }
}

TEST_CASE("log probability and gradient", "[policy]") {
  SECTION("uniform case") {
    const PolicyParams zero{};
    const LogProbGrad lp = log_prob_and_grad(zero, {0.0, 0.0, 0.0, 0.0}, 0);
    CHECK_THAT(lp.log_prob, WithinAbs(std::log(0.5), 1e-12));
    // entries whose expectation gradients both vanish must be exactly zero
    const CircuitSpec spec = build_policy_circuit(zero, encode_state({0.0, 0.0, 0.0, 0.0}));
    const auto jac = parameter_shift_jacobian(spec, zero.w);
    for (int k = 0; k < kPolicyParamCount; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      if (jac[0][ku] == 0.0 && jac[1][ku] == 0.0) CHECK(lp.grad[ku] == 0.0);
    }
  }
  SECTION("invalid action") {
    const PolicyParams zero{};
    CHECK_THROWS_AS(log_prob_and_grad(zero, {0.0, 0.0, 0.0, 0.0}, 2), std::invalid_argument);
  }
  SECTION("matches finite differences of log pi") {
    Rng rng(808);
    for (int trial = 0; trial < 5; ++trial) {
      const PolicyParams params = random_params(rng);
      const std::array<double, 4> obs = random_obs(rng);
      const int action = static_cast<int>(rng() % 2);
      const LogProbGrad lp = log_prob_and_grad(params, obs, action);
      const auto fd = testing::finite_difference(
          [&](std::span<const double> x) {
            PolicyParams probe;
            std::copy(x.begin(), x.end(), probe.w.begin());
            const ActionDistribution dist = policy_forward(probe, obs);
            return std::log(dist.probs[static_cast<std::size_t>(action)]);
          },
          params.w);
      for (std::size_t k = 0; k < fd.size(); ++k) REQUIRE_THAT(lp.grad[k], WithinAbs(fd[k], 1e-5));
    }
  }
  SECTION("score function has zero expectation") {
    Rng rng(4711);
    for (int trial = 0; trial < 3; ++trial) {
      const PolicyParams params = random_params(rng);
      const std::array<double, 4> obs = random_obs(rng);
      const ActionDistribution dist = policy_forward(params, obs);
      const LogProbGrad lp0 = log_prob_and_grad(params, obs, 0);
      const LogProbGrad lp1 = log_prob_and_grad(params, obs, 1);
      for (std::size_t k = 0; k < lp0.grad.size(); ++k)
        REQUIRE_THAT(dist.probs[0] * lp0.grad[k] + dist.probs[1] * lp1.grad[k],
                     WithinAbs(0.0, 1e-8));
    }
  }
}
