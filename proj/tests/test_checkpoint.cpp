#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qrl/checkpoint.hpp"

using namespace qrl;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("qrl_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Checkpoint sample_checkpoint() {
  Checkpoint cp;
  cp.seed = 12345678901234567ULL;
  cp.episode = 42;
  Rng policy_rng = make_stream(3, 0);
  Rng critic_rng = make_stream(3, 1);
  cp.policy = PolicyParams::random_init(policy_rng);
  cp.critic = CriticParams::random_init(critic_rng);
  cp.actor_opt = AdamState(kPolicyParamCount, 1e-3);
  cp.critic_opt = AdamState(CriticParams::kSize, 1e-5);
  // give the optimizer states awkward values so round-tripping is non-trivial
  Rng moment_rng = make_stream(3, 2);
  for (auto& m : cp.actor_opt.m) m = uniform_in(moment_rng, -1.0, 1.0) / 3.0;
  for (auto& v : cp.actor_opt.v) v = uniform01(moment_rng) * 0.1;
  cp.actor_opt.t = 17;
  TrainerConfig cfg;
  cfg.seed = cp.seed;
  cp.config_hash = config_hash(cfg);
  return cp;
}

}  // namespace

TEST_CASE("checkpoint save/load/save is byte-identical and bit-exact", "[checkpoint]") {
  const fs::path dir = temp_dir("checkpoint_roundtrip");
  const Checkpoint original = sample_checkpoint();

  const fs::path first = dir / "a.json";
  const fs::path second = dir / "b.json";
  save_checkpoint(first, original);
  const Checkpoint loaded = load_checkpoint(first);
  save_checkpoint(second, loaded);

  CHECK(slurp(first) == slurp(second));
  CHECK(loaded.seed == original.seed);
  CHECK(loaded.episode == original.episode);
  CHECK(loaded.config_hash == original.config_hash);
  CHECK(loaded.policy.w == original.policy.w);
  CHECK(loaded.critic.values() == original.critic.values());
  CHECK(loaded.actor_opt.m == original.actor_opt.m);
  CHECK(loaded.actor_opt.v == original.actor_opt.v);
  CHECK(loaded.actor_opt.t == original.actor_opt.t);
  CHECK(loaded.critic_opt.m == original.critic_opt.m);
  fs::remove_all(dir);
}

TEST_CASE("awkward doubles survive the round trip bit-for-bit", "[checkpoint]") {
  const fs::path dir = temp_dir("checkpoint_doubles");
  Checkpoint cp = sample_checkpoint();
  cp.policy.w[0] = 0.1 + 0.2;            // 0.30000000000000004
  cp.policy.w[1] = 1.0 / 3.0;
  cp.policy.w[2] = 1e-300;
  cp.policy.w[3] = -2.2250738585072014e-308;  // smallest normal
  cp.policy.w[4] = 0.1951219512195122;
  const fs::path path = dir / "cp.json";
  save_checkpoint(path, cp);
  const Checkpoint loaded = load_checkpoint(path);
  for (std::size_t i = 0; i < 5; ++i) CHECK(loaded.policy.w[i] == cp.policy.w[i]);
  fs::remove_all(dir);
}

TEST_CASE("missing and corrupt checkpoints are runtime errors", "[checkpoint]") {
  const fs::path dir = temp_dir("checkpoint_errors");
  CHECK_THROWS_AS(load_checkpoint(dir / "nope.json"), std::runtime_error);

  const fs::path garbage = dir / "garbage.json";
  std::ofstream(garbage) << "{ not json";
  CHECK_THROWS_AS(load_checkpoint(garbage), std::runtime_error);

  const fs::path truncated = dir / "truncated.json";
  std::ofstream(truncated) << R"({"format":"qrl-checkpoint-v1","seed":1})";
  CHECK_THROWS_AS(load_checkpoint(truncated), std::runtime_error);

  const fs::path wrong_shape = dir / "wrong_shape.json";
  Checkpoint cp = sample_checkpoint();
  OrderedJson j = checkpoint_to_json(cp);
  j["policy"]["values"] = std::vector<double>{1.0, 2.0};
  std::ofstream(wrong_shape) << j.dump();
  CHECK_THROWS_AS(load_checkpoint(wrong_shape), std::runtime_error);

  const fs::path wrong_opt = dir / "wrong_opt.json";
  OrderedJson k = checkpoint_to_json(sample_checkpoint());
  k["optimizers"]["actor"]["m"] = std::vector<double>{1.0};
  k["optimizers"]["actor"]["v"] = std::vector<double>{1.0};
  std::ofstream(wrong_opt) << k.dump();
  CHECK_THROWS_AS(load_checkpoint(wrong_opt), std::runtime_error);
  fs::remove_all(dir);
}

TEST_CASE("config hash tracks content", "[checkpoint]") {
  TrainerConfig a;
  TrainerConfig b;
  CHECK(config_hash(a) == config_hash(b));
  b.gamma = 0.99;
  CHECK(config_hash(a) != config_hash(b));
  b = a;
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
}
