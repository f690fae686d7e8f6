#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "qrl/adam.hpp"
#include "qrl/cartpole.hpp"
#include "qrl/critic.hpp"
#include "qrl/vqc_policy.hpp"

namespace qrl {

// Bootstrap used in the TD target: the critic's next-state value, or the max
// over the two raw readout expectations at the next state.
enum class TdTargetMode { kCriticV, kMaxQ };

inline std::string to_string(TdTargetMode mode) {
  return mode == TdTargetMode::kCriticV ? "critic_v" : "max_q";
}

inline TdTargetMode td_target_mode_from_string(const std::string& s) {
  if (s == "critic_v") return TdTargetMode::kCriticV;
  if (s == "max_q") return TdTargetMode::kMaxQ;
  throw std::invalid_argument("unknown td-target mode: " + s);
}

struct TrainerConfig {
  double gamma = 0.98;
  double lam = 0.95;
  double clip_eps = 0.01;
  double lr_actor = 1e-3;
  double lr_critic = 1e-5;
  int k_epochs = 10;
  int episodes = 500;
  std::uint64_t seed = 0;
  TdTargetMode td_target = TdTargetMode::kCriticV;
  double temperature = 1.0;
  double epsilon_greedy = 0.0;  // 0 disables the uniform-random branch

  void validate() const {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::domain_error("gamma must lie in [0, 1]");
    if (!(lam >= 0.0 && lam <= 1.0)) throw std::domain_error("lam must lie in [0, 1]");
    if (!(clip_eps > 0.0)) throw std::domain_error("clip-eps must be positive");
    if (!(lr_actor >= 0.0)) throw std::domain_error("lr-actor must be non-negative");
    if (!(lr_critic >= 0.0)) throw std::domain_error("lr-critic must be non-negative");
    if (k_epochs < 1) throw std::domain_error("k-epochs must be at least 1");
    if (episodes < 1) throw std::domain_error("episodes must be at least 1");
    if (!(temperature > 0.0)) throw std::domain_error("temperature must be positive");
    if (!(epsilon_greedy >= 0.0 && epsilon_greedy <= 1.0))
      throw std::domain_error("epsilon-greedy must lie in [0, 1]");
  }
};

struct Transition {
  std::array<double, 4> s{};
  int a = 0;
  double reward = 0.0;
  std::array<double, 4> s_next{};
  double prob_a = 1.0;  // behaviour-policy probability of `a`, in (0, 1]
  bool done = false;
};

using RolloutBuffer = std::vector<Transition>;

struct EpisodeRecord {
  int episode = 0;             // 1-based
  double total_return = 0.0;
  double moving_avg_100 = 0.0;  // mean over the most recent <= 100 returns
  double seconds = 0.0;         // elapsed since the start of the run
};

// Monotonic time source; injectable so that identical runs can produce
// byte-identical output files.
using Clock = std::function<double()>;

inline Clock steady_clock_seconds() {
  return [] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
}

inline Clock null_clock() {
  return [] { return 0.0; };
}

struct EpisodeResult {
  RolloutBuffer transitions;
  double total_return = 0.0;
};

inline int select_action(const ActionDistribution& dist, double epsilon_greedy, Rng& rng) {
  if (epsilon_greedy > 0.0 && uniform01(rng) < epsilon_greedy)
    return uniform01(rng) < 0.5 ? 0 : 1;
  return sample_action(dist, rng);
}

// One full episode under the current policy. Every transition stores the
// categorical probability the policy assigned to the chosen action.
inline EpisodeResult collect_episode(const PolicyParams& policy, const TrainerConfig& cfg,
                                     Rng& env_rng, Rng& action_rng) {
  EpisodeResult out;
  EnvState state = env_reset(env_rng);
  bool done = false;
  while (!done) {
    const std::array<double, 4> obs = observe(state);
    const ActionDistribution dist = policy_forward(policy, obs, cfg.temperature);
    const int action = select_action(dist, cfg.epsilon_greedy, action_rng);
    const auto [next, res] = env_step(state, action);
    out.transitions.push_back(
        {obs, action, res.reward, res.obs, dist.probs[static_cast<std::size_t>(action)], res.done});
    out.total_return += res.reward;
    state = next;
    done = res.done;
  }
  return out;
}

// y_j = R_j + gamma * bootstrap(s'_j), zeroing the bootstrap at terminals.
inline std::vector<double> td_targets(const RolloutBuffer& buffer, const CriticParams& critic,
                                      const PolicyParams& policy, const TrainerConfig& cfg) {
  if (buffer.empty()) throw std::logic_error("td_targets: empty rollout buffer");
  std::vector<double> y;
  y.reserve(buffer.size());
  for (const Transition& tr : buffer) {
    double bootstrap = 0.0;
    if (!tr.done) {
      if (cfg.td_target == TdTargetMode::kCriticV) {
        bootstrap = critic_forward(critic, tr.s_next);
      } else {
        const std::array<double, 2> e = policy_expectations(policy, tr.s_next);
        bootstrap = std::max(e[0], e[1]);
      }
    }
    y.push_back(tr.reward + cfg.gamma * bootstrap);
  }
  return y;
}

// delta_j = y_j - V(s_j), accumulated backward with factor gamma*lam. The
// running sum resets at done flags, so advantages never cross episode
// boundaries.
inline std::vector<double> compute_gae(const RolloutBuffer& buffer, const CriticParams& critic,
                                       std::span<const double> targets, const TrainerConfig& cfg) {
  if (targets.size() != buffer.size())
    throw std::invalid_argument("compute_gae: target/buffer length mismatch");
  std::vector<double> adv(buffer.size(), 0.0);
  double running = 0.0;
  for (std::size_t j = buffer.size(); j-- > 0;) {
    const double delta = targets[j] - critic_forward(critic, buffer[j].s);
    if (buffer[j].done) running = 0.0;
    running = delta + cfg.gamma * cfg.lam * running;
    adv[j] = running;
  }
  return adv;
}

struct SurrogateEval {
  double objective = 0.0;
  bool pass_through = false;  // gradient flows through the ratio
};

// min(r * A, clip(r, 1-eps, 1+eps) * A). The gradient w.r.t. the ratio is
// nonzero exactly when the unclipped branch attains the min (ties included).
inline constexpr SurrogateEval clipped_surrogate(double ratio, double advantage, double clip_eps) {
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  const double unclipped_obj = ratio * advantage;
  const double clipped_obj = clipped * advantage;
  if (unclipped_obj <= clipped_obj) return {unclipped_obj, true};
  return {clipped_obj, false};
}

struct UpdateDiagnostics {
  double actor_loss = 0.0;   // last epoch, before its update
  double critic_loss = 0.0;  // last epoch, before its update
};

// K epochs over the buffer: recompute targets and advantages with the
// current critic, recompute ratios against the stored behaviour
// probabilities, then take one Adam step per epoch on each parameter set.
// Actor loss is -mean(min(r*A, clip(r)*A)); its gradient collects
// -A*r*grad(log pi) over samples where the unclipped branch is active.
// Critic loss is mean |V(s) - y| with sign(0) taken as 0. The buffer is
// cleared before returning.
inline UpdateDiagnostics ppo_update(PolicyParams& policy, CriticParams& critic,
                                    RolloutBuffer& buffer, const TrainerConfig& cfg,
                                    AdamState& actor_opt, AdamState& critic_opt) {
  if (buffer.empty()) throw std::logic_error("ppo_update: empty rollout buffer");
  const double inv_n = 1.0 / static_cast<double>(buffer.size());
  UpdateDiagnostics diag;
  for (int epoch = 0; epoch < cfg.k_epochs; ++epoch) {
    const std::vector<double> targets = td_targets(buffer, critic, policy, cfg);
    const std::vector<double> advantages = compute_gae(buffer, critic, targets, cfg);

    std::array<double, kPolicyParamCount> actor_grad{};
    std::vector<double> critic_grad(CriticParams::kSize, 0.0);
    double actor_loss = 0.0;
    double critic_loss = 0.0;

    for (std::size_t j = 0; j < buffer.size(); ++j) {
      const Transition& tr = buffer[j];
      const LogProbGrad lp = log_prob_and_grad(policy, tr.s, tr.a, cfg.temperature);
      const double ratio = std::exp(lp.log_prob - std::log(tr.prob_a));
      const SurrogateEval sur = clipped_surrogate(ratio, advantages[j], cfg.clip_eps);
      actor_loss -= sur.objective * inv_n;
      if (sur.pass_through) {
        const double coeff = -advantages[j] * ratio * inv_n;
        for (std::size_t k = 0; k < lp.grad.size(); ++k) actor_grad[k] += coeff * lp.grad[k];
      }

      const double err = critic_forward(critic, tr.s) - targets[j];
      critic_loss += std::abs(err) * inv_n;
      if (err != 0.0) {
        const std::vector<double> g = critic_backward(critic, tr.s, (err > 0.0 ? 1.0 : -1.0) * inv_n);
        for (std::size_t k = 0; k < g.size(); ++k) critic_grad[k] += g[k];
      }
    }

    adam_step(std::span<double>(policy.w), actor_grad, actor_opt);
    adam_step(critic.values(), critic_grad, critic_opt);
    diag = {actor_loss, critic_loss};
  }
  buffer.clear();
  return diag;
}

struct TrainResult {
  std::vector<EpisodeRecord> records;
  PolicyParams policy{};
  CriticParams critic{};
  AdamState actor_opt{};
  AdamState critic_opt{};
};

namespace detail {

class ReturnWindow {
 public:
  void push(double value) {
    values_.push_back(value);
    if (values_.size() > 100) values_.pop_front();
  }
  double mean() const {
    return std::accumulate(values_.begin(), values_.end(), 0.0) /
           static_cast<double>(values_.size());
  }

 private:
  std::deque<double> values_;
};

}  // namespace detail

// Alternates one collected episode with one PPO update phase for
// cfg.episodes episodes. RNG streams: 0 policy init, 1 critic init,
// 2 environment resets, 3 action sampling.
inline TrainResult train(const TrainerConfig& cfg, const Clock& clock = {}) {
  cfg.validate();
  const Clock clk = clock ? clock : steady_clock_seconds();
  Rng policy_rng = make_stream(cfg.seed, 0);
  Rng critic_rng = make_stream(cfg.seed, 1);
  Rng env_rng = make_stream(cfg.seed, 2);
  Rng action_rng = make_stream(cfg.seed, 3);

  TrainResult out;
  out.policy = PolicyParams::random_init(policy_rng);
  out.critic = CriticParams::random_init(critic_rng);
  out.actor_opt = AdamState(kPolicyParamCount, cfg.lr_actor);
  out.critic_opt = AdamState(CriticParams::kSize, cfg.lr_critic);
  out.records.reserve(static_cast<std::size_t>(cfg.episodes));

  const double t0 = clk();
  detail::ReturnWindow window;
  for (int ep = 1; ep <= cfg.episodes; ++ep) {
    EpisodeResult rollout = collect_episode(out.policy, cfg, env_rng, action_rng);
    ppo_update(out.policy, out.critic, rollout.transitions, cfg, out.actor_opt, out.critic_opt);
    window.push(rollout.total_return);
    out.records.push_back({ep, rollout.total_return, window.mean(), clk() - t0});
  }
  return out;
}

// Reference curve: a fresh uniform [0, 1) parameter block is drawn for every
// single time step and no update ever happens.
inline std::vector<EpisodeRecord> random_baseline(const TrainerConfig& cfg,
                                                  const Clock& clock = {}) {
  cfg.validate();
  const Clock clk = clock ? clock : steady_clock_seconds();
  Rng param_rng = make_stream(cfg.seed, 0);
  Rng env_rng = make_stream(cfg.seed, 2);
  Rng action_rng = make_stream(cfg.seed, 3);

  std::vector<EpisodeRecord> records;
  records.reserve(static_cast<std::size_t>(cfg.episodes));
  const double t0 = clk();
  detail::ReturnWindow window;
  for (int ep = 1; ep <= cfg.episodes; ++ep) {
    EnvState state = env_reset(env_rng);
    double total = 0.0;
    bool done = false;
    while (!done) {
      const PolicyParams params = PolicyParams::random_init(param_rng);
      const ActionDistribution dist = policy_forward(params, observe(state), cfg.temperature);
      const int action = select_action(dist, cfg.epsilon_greedy, action_rng);
      const auto [next, res] = env_step(state, action);
      total += res.reward;
      state = next;
      done = res.done;
    }
    window.push(total);
    records.push_back({ep, total, window.mean(), clk() - t0});
  }
  return records;
}

}  // namespace qrl
