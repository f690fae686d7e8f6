#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "qrl/statevector.hpp"

namespace qrl {

// Ordered gate list plus the observables measured at the end. Trainable
// rotation angles are bound at run time from a flat parameter vector through
// GateOp::param_index; fixed angles (e.g. data encoding) live in the ops.
struct CircuitSpec {
  int n_qubits = 0;
  std::vector<GateOp> ops;
  std::vector<Observable> observables;
  int n_params = 0;

  void validate() const {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
      throw std::invalid_argument("CircuitSpec: n_qubits must be in [1, 16]");
    if (n_params < 0) throw std::invalid_argument("CircuitSpec: negative n_params");
    std::vector<char> used(static_cast<std::size_t>(n_params), 0);
    for (const auto& op : ops) {
      if (op.wire0 < 0 || op.wire0 >= n_qubits)
        throw std::out_of_range("CircuitSpec: gate wire out of range");
      if (op.kind == GateKind::CNOT) {
        if (op.wire1 < 0 || op.wire1 >= n_qubits)
          throw std::out_of_range("CircuitSpec: CNOT target out of range");
        if (op.wire1 == op.wire0)
          throw std::invalid_argument("CircuitSpec: CNOT wires must be distinct");
        if (op.param_index)
          throw std::invalid_argument("CircuitSpec: CNOT cannot carry a parameter");
      } else {
        if (!std::isfinite(op.angle))
          throw std::invalid_argument("CircuitSpec: rotation angle must be finite");
        if (op.param_index) {
          if (*op.param_index < 0 || *op.param_index >= n_params)
            throw std::out_of_range("CircuitSpec: param_index out of range");
          used[static_cast<std::size_t>(*op.param_index)] = 1;
        }
      }
    }
    if (std::find(used.begin(), used.end(), char{0}) != used.end())
      throw std::invalid_argument("CircuitSpec: param indices must cover 0..n_params-1");
    for (const auto& obs : observables)
      if (obs.wire < 0 || obs.wire >= n_qubits)
        throw std::out_of_range("CircuitSpec: observable wire out of range");
  }
};

// Final state after applying all ops in order from |0...0>.
inline Statevector run_circuit_state(const CircuitSpec& spec, std::span<const double> params) {
  if (static_cast<int>(params.size()) != spec.n_params)
    throw std::invalid_argument("run_circuit: expected " + std::to_string(spec.n_params) +
                                " parameters, got " + std::to_string(params.size()));
  Statevector state(spec.n_qubits);
  for (const auto& op : spec.ops) {
    if (op.param_index) {
      GateOp bound = op;
      bound.angle = params[static_cast<std::size_t>(*op.param_index)];
      state.apply(bound);
    } else {
      state.apply(op);
    }
  }
  return state;
}

// One expectation value per declared observable, in declaration order.
inline std::vector<double> run_circuit(const CircuitSpec& spec, std::span<const double> params) {
  const Statevector state = run_circuit_state(spec, params);
  std::vector<double> out;
  out.reserve(spec.observables.size());
  for (const auto& obs : spec.observables) out.push_back(expectation(state, obs));
  return out;
}

// d<obs>/d<param> for every (observable, parameter) pair via the exact
// two-point rule [f(t + pi/2) - f(t - pi/2)] / 2. Each parameter costs two
// full circuit evaluations and every evaluation serves all observables.
// The rule is exact only when a parameter binds exactly one Pauli rotation;
// anything else is rejected.
inline std::vector<std::vector<double>> parameter_shift_jacobian(const CircuitSpec& spec,
                                                                 std::span<const double> params) {
  if (static_cast<int>(params.size()) != spec.n_params)
    throw std::invalid_argument("parameter_shift: parameter count mismatch");
  std::vector<int> uses(static_cast<std::size_t>(spec.n_params), 0);
  for (const auto& op : spec.ops) {
    if (!op.param_index) continue;
    if (!op.is_rotation())
      throw std::invalid_argument("parameter_shift: only Pauli rotations may be trainable");
    ++uses[static_cast<std::size_t>(*op.param_index)];
  }
  for (int u : uses)
    if (u != 1)
      throw std::invalid_argument(
          "parameter_shift: each parameter must bind exactly one rotation gate");

  constexpr double kShift = std::numbers::pi / 2.0;
  const std::size_t n_obs = spec.observables.size();
  std::vector<std::vector<double>> jac(n_obs, std::vector<double>(params.size(), 0.0));
  std::vector<double> shifted(params.begin(), params.end());
  for (std::size_t k = 0; k < shifted.size(); ++k) {
    const double original = shifted[k];
    shifted[k] = original + kShift;
    const std::vector<double> plus = run_circuit(spec, shifted);
    shifted[k] = original - kShift;
    const std::vector<double> minus = run_circuit(spec, shifted);
    shifted[k] = original;
    for (std::size_t o = 0; o < n_obs; ++o) jac[o][k] = 0.5 * (plus[o] - minus[o]);
  }
  return jac;
}

inline std::vector<double> parameter_shift_grad(const CircuitSpec& spec,
                                                std::span<const double> params,
                                                std::size_t obs_index) {
  if (obs_index >= spec.observables.size())
    throw std::out_of_range("parameter_shift: observable index out of range");
  return parameter_shift_jacobian(spec, params)[obs_index];
}

}  // namespace qrl
