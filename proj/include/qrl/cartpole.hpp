#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "qrl/rng.hpp"

namespace qrl {

namespace cartpole {
inline constexpr double kGravity = 9.8;
inline constexpr double kMassCart = 1.0;
inline constexpr double kMassPole = 0.1;
inline constexpr double kTotalMass = kMassCart + kMassPole;
inline constexpr double kPoleHalfLength = 0.5;
inline constexpr double kPoleMassLength = kMassPole * kPoleHalfLength;
inline constexpr double kForceMag = 10.0;
inline constexpr double kTau = 0.02;
inline constexpr double kXThreshold = 2.4;
inline constexpr double kThetaThreshold = 12.0 * 2.0 * std::numbers::pi / 360.0;
inline constexpr int kMaxEpisodeSteps = 200;
inline constexpr double kResetBound = 0.05;
}  // namespace cartpole

struct EnvState {
  double x = 0.0;
  double x_dot = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;
  int steps = 0;
};

struct StepResult {
  std::array<double, 4> obs{};
  double reward = 0.0;
  bool done = false;
};

inline std::array<double, 4> observe(const EnvState& s) {
  return {s.x, s.x_dot, s.theta, s.theta_dot};
}

inline bool is_terminal(const EnvState& s) {
  return s.x < -cartpole::kXThreshold || s.x > cartpole::kXThreshold ||
         s.theta < -cartpole::kThetaThreshold || s.theta > cartpole::kThetaThreshold ||
         s.steps >= cartpole::kMaxEpisodeSteps;
}

// All four components uniform in [-0.05, 0.05].
inline EnvState env_reset(Rng& rng) {
  EnvState s;
  s.x = uniform_in(rng, -cartpole::kResetBound, cartpole::kResetBound);
  s.x_dot = uniform_in(rng, -cartpole::kResetBound, cartpole::kResetBound);
  s.theta = uniform_in(rng, -cartpole::kResetBound, cartpole::kResetBound);
  s.theta_dot = uniform_in(rng, -cartpole::kResetBound, cartpole::kResetBound);
  s.steps = 0;
  return s;
}

// Explicit Euler step with accelerations computed from the current state and
// positions integrated before velocities. Action 1 pushes right, 0 left.
// Reward is 1.0 on every step, including the terminating one.
//
// Stepping a state that an earlier step already reported as terminal is a
// usage error. Hand-built probe states (steps == 0) are treated as fresh and
// may be stepped once even if they already violate a threshold.
inline std::pair<EnvState, StepResult> env_step(const EnvState& state, int action) {
  if (action != 0 && action != 1)
    throw std::invalid_argument("env_step: action must be 0 or 1");
  if (state.steps > 0 && is_terminal(state))
    throw std::logic_error("env_step: episode already terminated");

  const double force = action == 1 ? cartpole::kForceMag : -cartpole::kForceMag;
  const double cos_t = std::cos(state.theta);
  const double sin_t = std::sin(state.theta);
  const double temp =
      (force + cartpole::kPoleMassLength * state.theta_dot * state.theta_dot * sin_t) /
      cartpole::kTotalMass;
  const double theta_acc =
      (cartpole::kGravity * sin_t - cos_t * temp) /
      (cartpole::kPoleHalfLength *
       (4.0 / 3.0 - cartpole::kMassPole * cos_t * cos_t / cartpole::kTotalMass));
  const double x_acc =
      temp - cartpole::kPoleMassLength * theta_acc * cos_t / cartpole::kTotalMass;

  EnvState next;
  next.x = state.x + cartpole::kTau * state.x_dot;
  next.x_dot = state.x_dot + cartpole::kTau * x_acc;
  next.theta = state.theta + cartpole::kTau * state.theta_dot;
  next.theta_dot = state.theta_dot + cartpole::kTau * theta_acc;
  next.steps = state.steps + 1;

  StepResult result;
  result.obs = observe(next);
  result.reward = 1.0;
  result.done = is_terminal(next);
  return {next, result};
}

}  // namespace qrl
