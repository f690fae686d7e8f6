#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qrl {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 16;

enum class GateKind { RX, RY, RZ, CNOT };

enum class PauliAxis { X, Y, Z };

// One gate instance. Rotations act on `wire0` with `angle`; CNOT uses
// (`wire0` = control, `wire1` = target) and carries no angle. A rotation
// whose angle is trainable additionally records the index of its entry in a
// flat parameter vector; fixed-angle gates leave `param_index` empty.
//
// Rotation convention: R(theta) = exp(-i * theta * P / 2), so
//   RY(theta)|0> = cos(theta/2)|0> + sin(theta/2)|1>
//   RX(theta)|0> = cos(theta/2)|0> - i sin(theta/2)|1>
//   RZ(theta)    = diag(e^{-i theta/2}, e^{+i theta/2})
struct GateOp {
  GateKind kind = GateKind::RY;
  int wire0 = 0;
  int wire1 = -1;
  double angle = 0.0;
  std::optional<int> param_index{};

  static GateOp rx(int wire, double angle) { return {GateKind::RX, wire, -1, angle, {}}; }
  static GateOp ry(int wire, double angle) { return {GateKind::RY, wire, -1, angle, {}}; }
  static GateOp rz(int wire, double angle) { return {GateKind::RZ, wire, -1, angle, {}}; }
  static GateOp rx_param(int wire, int param_index) { return {GateKind::RX, wire, -1, 0.0, param_index}; }
  static GateOp ry_param(int wire, int param_index) { return {GateKind::RY, wire, -1, 0.0, param_index}; }
  static GateOp rz_param(int wire, int param_index) { return {GateKind::RZ, wire, -1, 0.0, param_index}; }
  static GateOp cnot(int control, int target) { return {GateKind::CNOT, control, target, 0.0, {}}; }

  bool is_rotation() const { return kind != GateKind::CNOT; }
};

// Single-qubit Pauli measurement, identity on all other wires.
struct Observable {
  PauliAxis axis = PauliAxis::Z;
  int wire = 0;
};

// Dense amplitude vector over n qubits. Wire 0 is the most significant bit
// of the amplitude index: |q0 q1 ... q_{n-1}> sits at index
// q0*2^{n-1} + q1*2^{n-2} + ... + q_{n-1}.
class Statevector {
 public:
  explicit Statevector(int n_qubits)
      : n_qubits_(checked(n_qubits)), amps_(std::size_t{1} << n_qubits_) {
    amps_[0] = 1.0;
  }

  Statevector(int n_qubits, std::vector<Complex> amps)
      : n_qubits_(checked(n_qubits)), amps_(std::move(amps)) {
    if (amps_.size() != (std::size_t{1} << n_qubits_))
      throw std::invalid_argument("Statevector: amplitude count must be 2^n_qubits");
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Complex>& amps() const { return amps_; }
  Complex amp(std::size_t i) const { return amps_.at(i); }

  double norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  void apply(const GateOp& op) {
    if (op.kind == GateKind::CNOT) {
      if (op.wire0 == op.wire1) throw std::invalid_argument("CNOT wires must be distinct");
      const std::size_t cbit = wire_bit(op.wire0);
      const std::size_t tbit = wire_bit(op.wire1);
      const std::size_t d = dim();
      for (std::size_t i = 0; i < d; ++i)
        if ((i & cbit) && !(i & tbit)) std::swap(amps_[i], amps_[i | tbit]);
      return;
    }
    if (!std::isfinite(op.angle)) throw std::invalid_argument("rotation angle must be finite");
    const double c = std::cos(0.5 * op.angle);
    const double s = std::sin(0.5 * op.angle);
    switch (op.kind) {
      case GateKind::RX:
        apply_single_qubit(op.wire0, {c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0});
        break;
      case GateKind::RY:
        apply_single_qubit(op.wire0, {c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0});
        break;
      case GateKind::RZ: {
        const std::size_t bit = wire_bit(op.wire0);
        const Complex phase0{c, -s};
        const Complex phase1{c, s};
        for (std::size_t i = 0; i < dim(); ++i) amps_[i] *= (i & bit) ? phase1 : phase0;
        break;
      }
      default:
        break;
    }
  }

 private:
  static int checked(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
      throw std::invalid_argument("Statevector: n_qubits must be in [1, " +
                                  std::to_string(kMaxQubits) + "]");
    return n_qubits;
  }

  std::size_t wire_bit(int wire) const {
    if (wire < 0 || wire >= n_qubits_)
      throw std::out_of_range("wire " + std::to_string(wire) + " out of range for " +
                              std::to_string(n_qubits_) + " qubits");
    return dim() >> (wire + 1);
  }

  void apply_single_qubit(int wire, Complex u00, Complex u01, Complex u10, Complex u11) {
    const std::size_t bit = wire_bit(wire);
    const std::size_t d = dim();
    for (std::size_t i = 0; i < d; ++i) {
      if (i & bit) continue;
      const Complex a0 = amps_[i];
      const Complex a1 = amps_[i | bit];
      amps_[i] = u00 * a0 + u01 * a1;
      amps_[i | bit] = u10 * a0 + u11 * a1;
    }
  }

  int n_qubits_;
  std::vector<Complex> amps_;
};

inline Statevector new_zero_state(int n_qubits) { return Statevector(n_qubits); }

inline Statevector apply_gate(Statevector state, const GateOp& op) {
  state.apply(op);
  return state;
}

// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
inline Statevector bloch_state(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw std::domain_error("bloch_state: theta must lie in [0, pi]");
  if (!std::isfinite(phi)) throw std::domain_error("bloch_state: phi must be finite");
  return Statevector(1, {Complex{std::cos(0.5 * theta), 0.0},
                         std::polar(std::sin(0.5 * theta), phi)});
}

// <psi|P|psi> for a single-qubit Pauli P. The quadratic form is computed as a
// complex number; its imaginary part must vanish (checked to 1e-10) and the
// real part is clamped to [-1, 1] to absorb last-ulp rounding.
inline double expectation(const Statevector& state, const Observable& obs) {
  if (obs.wire < 0 || obs.wire >= state.n_qubits())
    throw std::out_of_range("observable wire out of range");
  const std::size_t bit = state.dim() >> (obs.wire + 1);
  const auto& amps = state.amps();
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (i & bit) continue;
    const Complex a0 = amps[i];
    const Complex a1 = amps[i | bit];
    switch (obs.axis) {
      case PauliAxis::X:
        acc += std::conj(a0) * a1 + std::conj(a1) * a0;
        break;
      case PauliAxis::Y:
        acc += Complex{0.0, -1.0} * std::conj(a0) * a1 + Complex{0.0, 1.0} * std::conj(a1) * a0;
        break;
      case PauliAxis::Z:
        acc += std::conj(a0) * a0 - std::conj(a1) * a1;
        break;
    }
  }
  if (std::abs(acc.imag()) >= 1e-10)
    throw std::logic_error("expectation: quadratic form has non-negligible imaginary part");
  return std::clamp(acc.real(), -1.0, 1.0);
}

}  // namespace qrl
