#pragma once

#include <array>
#include <cmath>

#include "qrl/circuit.hpp"
#include "qrl/rng.hpp"

namespace qrl {

inline constexpr int kPolicyQubits = 4;
inline constexpr int kPolicyLayers = 4;
inline constexpr int kPolicyParamCount = kPolicyLayers * kPolicyQubits * 3;  // 48

// Trainable rotation angles, flat in (layer, qubit, axis) order with axis
// order X, Y, Z.
struct PolicyParams {
  std::array<double, kPolicyParamCount> w{};

  static constexpr int index(int layer, int qubit, int axis) {
    return (layer * kPolicyQubits + qubit) * 3 + axis;
  }
  double& at(int layer, int qubit, int axis) { return w[static_cast<std::size_t>(index(layer, qubit, axis))]; }
  double at(int layer, int qubit, int axis) const { return w[static_cast<std::size_t>(index(layer, qubit, axis))]; }

  static PolicyParams random_init(Rng& rng) {
    PolicyParams p;
    for (auto& x : p.w) x = uniform01(rng);
    return p;
  }
};

// Per-component scaling bounds applied before encoding; values beyond a
// bound clamp to it. Position and angle use the termination thresholds; the
// two velocity components are unbounded in the dynamics and use practical
// clamps.
inline constexpr std::array<double, 4> kObservationBounds = {2.4, 3.0, 0.2095, 3.0};

struct EncodedState {
  std::array<double, 4> angles{};  // each in [-pi, pi]
};

struct ActionDistribution {
  std::array<double, 2> probs{};
};

inline EncodedState encode_state(const std::array<double, 4>& obs) {
  EncodedState enc;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (!std::isfinite(obs[i]))
      throw std::invalid_argument("encode_state: observation must be finite");
    enc.angles[i] = std::numbers::pi * std::clamp(obs[i] / kObservationBounds[i], -1.0, 1.0);
  }
  return enc;
}

// The policy ansatz: RY data encoding on every wire, four variational layers
// of (RX, RY, RZ) per qubit separated by CNOT chains (0,1),(1,2),(2,3), a
// final CNOT(0,2), CNOT(1,3), and Pauli-Y readout on wires 2 and 3.
inline CircuitSpec build_policy_circuit(const PolicyParams& params, const EncodedState& enc) {
  CircuitSpec spec;
  spec.n_qubits = kPolicyQubits;
  spec.n_params = kPolicyParamCount;
  spec.ops.reserve(63);

  for (int q = 0; q < kPolicyQubits; ++q) spec.ops.push_back(GateOp::ry(q, enc.angles[q]));

  const auto push_rotation = [&](GateKind kind, int wire, int param_index) {
    GateOp op{kind, wire, -1, params.w[static_cast<std::size_t>(param_index)], param_index};
    spec.ops.push_back(op);
  };
  const auto rotation_layer = [&](int layer) {
    for (int q = 0; q < kPolicyQubits; ++q) {
      push_rotation(GateKind::RX, q, PolicyParams::index(layer, q, 0));
      push_rotation(GateKind::RY, q, PolicyParams::index(layer, q, 1));
      push_rotation(GateKind::RZ, q, PolicyParams::index(layer, q, 2));
    }
  };
  const auto entangle_chain = [&] {
    for (int q = 0; q + 1 < kPolicyQubits; ++q) spec.ops.push_back(GateOp::cnot(q, q + 1));
  };

  for (int layer = 0; layer < kPolicyLayers; ++layer) {
    rotation_layer(layer);
    if (layer + 1 < kPolicyLayers) entangle_chain();
  }
  spec.ops.push_back(GateOp::cnot(0, 2));
  spec.ops.push_back(GateOp::cnot(1, 3));
  spec.observables = {{PauliAxis::Y, 2}, {PauliAxis::Y, 3}};
  return spec;
}

// Raw readout expectations <Y_2>, <Y_3> for an observation.
inline std::array<double, 2> policy_expectations(const PolicyParams& params,
                                                 const std::array<double, 4>& obs) {
  const CircuitSpec spec = build_policy_circuit(params, encode_state(obs));
  const std::vector<double> outs = run_circuit(spec, params.w);
  return {outs[0], outs[1]};
}

inline ActionDistribution softmax_pair(double e0, double e1, double temperature) {
  if (!(temperature > 0.0)) throw std::domain_error("softmax: temperature must be positive");
  const double z = (e1 - e0) / temperature;
  ActionDistribution dist;
  dist.probs[0] = 1.0 / (1.0 + std::exp(z));
  dist.probs[1] = 1.0 / (1.0 + std::exp(-z));
  return dist;
}

inline ActionDistribution policy_forward(const PolicyParams& params,
                                         const std::array<double, 4>& obs,
                                         double temperature = 1.0) {
  const std::array<double, 2> e = policy_expectations(params, obs);
  return softmax_pair(e[0], e[1], temperature);
}

inline int sample_action(const ActionDistribution& dist, Rng& rng) {
  return uniform01(rng) < dist.probs[0] ? 0 : 1;
}

struct LogProbGrad {
  double log_prob = 0.0;
  std::array<double, kPolicyParamCount> grad{};
};

// log pi(a|s) and its exact gradient: the softmax Jacobian in closed form,
// chained with parameter-shift gradients of both readout expectations. One
// call costs 1 + 2 * 48 circuit evaluations and covers either action.
inline LogProbGrad log_prob_and_grad(const PolicyParams& params,
                                     const std::array<double, 4>& obs, int action,
                                     double temperature = 1.0) {
  if (action != 0 && action != 1)
    throw std::invalid_argument("log_prob_and_grad: action must be 0 or 1");
  const CircuitSpec spec = build_policy_circuit(params, encode_state(obs));
  const std::vector<double> outs = run_circuit(spec, params.w);
  const ActionDistribution dist = softmax_pair(outs[0], outs[1], temperature);
  const auto jac = parameter_shift_jacobian(spec, params.w);

  LogProbGrad res;
  const double z = (outs[1 - action] - outs[action]) / temperature;
  res.log_prob = -std::log1p(std::exp(z));
  const std::array<double, 2> coeff = {
      ((action == 0 ? 1.0 : 0.0) - dist.probs[0]) / temperature,
      ((action == 1 ? 1.0 : 0.0) - dist.probs[1]) / temperature,
  };
  for (int k = 0; k < kPolicyParamCount; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    res.grad[ku] = coeff[0] * jac[0][ku] + coeff[1] * jac[1][ku];
  }
  return res;
}

}  // namespace qrl
