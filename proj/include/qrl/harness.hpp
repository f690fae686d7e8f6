#pragma once

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrl/checkpoint.hpp"
#include "qrl/csv.hpp"

namespace qrl {

inline std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Real clock unless QRL_FIXED_CLOCK is set, in which case every timing field
// is pinned to zero so repeated runs emit byte-identical files.
inline Clock default_clock() {
  if (const char* v = std::getenv("QRL_FIXED_CLOCK"); v != nullptr && std::string_view(v) != "" &&
                                                      std::string_view(v) != "0")
    return null_clock();
  return steady_clock_seconds();
}

struct RunOptions {
  TrainerConfig config{};  // per-run seed comes from `seeds`
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path out_dir = "runs";
};

inline std::filesystem::path curve_path(const RunOptions& opt, std::uint64_t seed) {
  return opt.out_dir / ("seed_" + std::to_string(seed) + ".csv");
}

inline std::filesystem::path checkpoint_path(const RunOptions& opt, std::uint64_t seed) {
  return opt.out_dir / ("seed_" + std::to_string(seed) + "_checkpoint.json");
}

namespace detail {

inline void write_manifest(const RunOptions& opt, const std::string& command,
                           bool with_checkpoints, const Clock& clock) {
  OrderedJson j;
  j["command"] = command;
  j["config"] = config_to_json(opt.config);
  j["seeds"] = opt.seeds;
  j["start_time"] = clock() == 0.0 && std::getenv("QRL_FIXED_CLOCK") != nullptr
                        ? "1970-01-01T00:00:00Z"
                        : iso8601_utc_now();
  OrderedJson artifacts;
  std::vector<std::string> curves;
  std::vector<std::string> checkpoints;
  for (std::uint64_t seed : opt.seeds) {
    curves.push_back(curve_path(opt, seed).string());
    if (with_checkpoints) checkpoints.push_back(checkpoint_path(opt, seed).string());
  }
  artifacts["curves"] = curves;
  if (with_checkpoints) artifacts["checkpoints"] = checkpoints;
  artifacts["summary"] = (opt.out_dir / "summary.csv").string();
  artifacts["stats"] = (opt.out_dir / "stats.csv").string();
  artifacts["window_stats"] = (opt.out_dir / "window_stats.csv").string();
  j["artifacts"] = artifacts;

  OrderedJson hashed;
  hashed["config"] = j["config"];
  hashed["seeds"] = j["seeds"];
  j["config_hash"] = fnv1a64_hex(hashed.dump());

  const auto path = opt.out_dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace detail

// Trains every requested seed, writing per-seed curve CSVs and checkpoints
// plus manifest.json, summary.csv and window_stats.csv. The manifest is
// written before any training starts.
inline int cmd_train(const RunOptions& opt, const Clock& clock = {},
                     std::ostream& log = std::cout) {
  try {
    opt.config.validate();
    if (opt.seeds.empty()) throw std::domain_error("at least one seed is required");
    const Clock clk = clock ? clock : default_clock();
    std::filesystem::create_directories(opt.out_dir);
    detail::write_manifest(opt, "train", /*with_checkpoints=*/true, clk);

    std::vector<SeedCurve> curves;
    for (std::uint64_t seed : opt.seeds) {
      TrainerConfig cfg = opt.config;
      cfg.seed = seed;
      log << "train: seed " << seed << " (" << cfg.episodes << " episodes)\n";
      TrainResult result = train(cfg, clk);
      write_curve_csv(curve_path(opt, seed), result.records);
      save_checkpoint(checkpoint_path(opt, seed),
                      Checkpoint{seed, cfg.episodes, config_hash(cfg), result.policy,
                                 result.critic, result.actor_opt, result.critic_opt});
      const EpisodeRecord& last = result.records.back();
      log << "train: seed " << seed << " done, final return " << last.total_return
          << ", moving avg " << last.moving_avg_100 << "\n";
      curves.push_back({seed, std::move(result.records)});
    }
    write_summary_csv(opt.out_dir / "summary.csv", curves);
    write_stats_csv(opt.out_dir / "stats.csv", curves);
    write_window_stats_csv(opt.out_dir / "window_stats.csv", curves);
    return 0;
  } catch (const std::domain_error& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

// Same artifact layout as cmd_train minus checkpoints; the policy is redrawn
// uniformly at every time step and never updated.
inline int cmd_baseline(const RunOptions& opt, const Clock& clock = {},
                        std::ostream& log = std::cout) {
  try {
    opt.config.validate();
    if (opt.seeds.empty()) throw std::domain_error("at least one seed is required");
    const Clock clk = clock ? clock : default_clock();
    std::filesystem::create_directories(opt.out_dir);
    detail::write_manifest(opt, "baseline", /*with_checkpoints=*/false, clk);

    std::vector<SeedCurve> curves;
    for (std::uint64_t seed : opt.seeds) {
      TrainerConfig cfg = opt.config;
      cfg.seed = seed;
      log << "baseline: seed " << seed << " (" << cfg.episodes << " episodes)\n";
      std::vector<EpisodeRecord> records = random_baseline(cfg, clk);
      write_curve_csv(curve_path(opt, seed), records);
      std::vector<double> returns;
      returns.reserve(records.size());
      for (const EpisodeRecord& r : records) returns.push_back(r.total_return);
      log << "baseline: seed " << seed << " done, mean return " << mean_of(returns) << " +- "
          << stddev_of(returns) << "\n";
      curves.push_back({seed, std::move(records)});
    }
    write_summary_csv(opt.out_dir / "summary.csv", curves);
    write_stats_csv(opt.out_dir / "stats.csv", curves);
    write_window_stats_csv(opt.out_dir / "window_stats.csv", curves);
    return 0;
  } catch (const std::domain_error& e) {
    log << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

struct EvalOptions {
  std::filesystem::path checkpoint_path;
  int episodes = 100;
  std::uint64_t seed = 0;
  bool argmax = false;
  double temperature = 1.0;
};

// Loads a checkpoint and reports mean +- std return over fresh episodes,
// sampling actions categorically or greedily per `argmax`.
inline int cmd_eval(const EvalOptions& opt, std::ostream& out = std::cout) {
  if (opt.episodes < 1) {
    out << "error: episodes must be at least 1\n";
    return 2;
  }
  if (!(opt.temperature > 0.0)) {
    out << "error: temperature must be positive\n";
    return 2;
  }
  try {
    const Checkpoint cp = load_checkpoint(opt.checkpoint_path);
    Rng env_rng = make_stream(opt.seed, 2);
    Rng action_rng = make_stream(opt.seed, 3);
    std::vector<double> returns;
    returns.reserve(static_cast<std::size_t>(opt.episodes));
    for (int e = 0; e < opt.episodes; ++e) {
      EnvState state = env_reset(env_rng);
      double total = 0.0;
      bool done = false;
      while (!done) {
        const ActionDistribution dist =
            policy_forward(cp.policy, observe(state), opt.temperature);
        const int action = opt.argmax ? (dist.probs[0] >= dist.probs[1] ? 0 : 1)
                                      : sample_action(dist, action_rng);
        const auto [next, res] = env_step(state, action);
        total += res.reward;
        state = next;
        done = res.done;
      }
      returns.push_back(total);
    }
    out << "episodes=" << opt.episodes << " mean_return=" << format_double(mean_of(returns))
        << " std_return=" << format_double(stddev_of(returns)) << "\n";
    return 0;
  } catch (const std::exception& e) {
    out << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace detail {

inline void add_trainer_flags(CLI::App* cmd, RunOptions& opt, std::string& td_target) {
  cmd->add_option("--gamma", opt.config.gamma, "discount factor")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--lam", opt.config.lam, "advantage decay factor")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--clip-eps", opt.config.clip_eps, "surrogate clipping half-width")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lr-actor", opt.config.lr_actor, "policy learning rate")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--lr-critic", opt.config.lr_critic, "critic learning rate")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--k-epochs", opt.config.k_epochs, "update epochs per episode")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--episodes", opt.config.episodes, "episodes per seed")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seeds, "seed list (one run per seed)")->capture_default_str();
  cmd->add_option("--td-target", td_target, "TD bootstrap: critic_v or max_q")
      ->capture_default_str()
      ->check(CLI::IsMember({"critic_v", "max_q"}));
  cmd->add_option("--temperature", opt.config.temperature, "softmax temperature")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon-greedy", opt.config.epsilon_greedy,
                  "probability of a uniform random action (0 = off)")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
}

}  // namespace detail

// Full command-line front end. Returns the process exit code: 0 success,
// 1 runtime/IO failure, 2 usage error.
inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"4-qubit variational quantum policy trained with PPO on a cart-pole task", "qrl"};
  app.require_subcommand(1);

  RunOptions train_opt;
  RunOptions baseline_opt;
  EvalOptions eval_opt;
  std::string train_td = "critic_v";
  std::string baseline_td = "critic_v";

  CLI::App* train_cmd = app.add_subcommand("train", "train the policy and critic");
  detail::add_trainer_flags(train_cmd, train_opt, train_td);

  CLI::App* baseline_cmd =
      app.add_subcommand("baseline", "random-parameter reference curve, no training");
  detail::add_trainer_flags(baseline_cmd, baseline_opt, baseline_td);

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a saved checkpoint");
  eval_cmd->add_option("--checkpoint", eval_opt.checkpoint_path, "checkpoint file")->required();
  eval_cmd->add_option("--episodes", eval_opt.episodes, "evaluation episodes")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", eval_opt.seed, "evaluation seed")->capture_default_str();
  eval_cmd->add_flag("--argmax", eval_opt.argmax, "act greedily instead of sampling");
  eval_cmd->add_option("--temperature", eval_opt.temperature, "softmax temperature")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes args back to front
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (train_cmd->parsed()) {
      train_opt.config.td_target = td_target_mode_from_string(train_td);
      return cmd_train(train_opt, {}, out);
    }
    if (baseline_cmd->parsed()) {
      baseline_opt.config.td_target = td_target_mode_from_string(baseline_td);
      return cmd_baseline(baseline_opt, {}, out);
    }
    return cmd_eval(eval_opt, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qrl
