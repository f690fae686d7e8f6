#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qrl/ppo.hpp"

namespace qrl {

// Insertion-ordered JSON keeps serialized files stable byte-for-byte.
using OrderedJson = nlohmann::ordered_json;

inline std::string fnv1a64_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

inline OrderedJson config_to_json(const TrainerConfig& cfg) {
  OrderedJson j;
  j["gamma"] = cfg.gamma;
  j["lam"] = cfg.lam;
  j["clip_eps"] = cfg.clip_eps;
  j["lr_actor"] = cfg.lr_actor;
  j["lr_critic"] = cfg.lr_critic;
  j["k_epochs"] = cfg.k_epochs;
  j["episodes"] = cfg.episodes;
  j["seed"] = cfg.seed;
  j["td_target"] = to_string(cfg.td_target);
  j["temperature"] = cfg.temperature;
  j["epsilon_greedy"] = cfg.epsilon_greedy;
  return j;
}

// Content hash of the fully resolved configuration.
inline std::string config_hash(const TrainerConfig& cfg) {
  return fnv1a64_hex(config_to_json(cfg).dump());
}

inline OrderedJson adam_to_json(const AdamState& st) {
  OrderedJson j;
  j["t"] = st.t;
  j["lr"] = st.lr;
  j["beta1"] = st.beta1;
  j["beta2"] = st.beta2;
  j["eps"] = st.eps;
  j["m"] = st.m;
  j["v"] = st.v;
  return j;
}

inline AdamState adam_from_json(const OrderedJson& j) {
  AdamState st;
  st.t = j.at("t").get<std::uint64_t>();
  st.lr = j.at("lr").get<double>();
  st.beta1 = j.at("beta1").get<double>();
  st.beta2 = j.at("beta2").get<double>();
  st.eps = j.at("eps").get<double>();
  st.m = j.at("m").get<std::vector<double>>();
  st.v = j.at("v").get<std::vector<double>>();
  if (st.m.size() != st.v.size())
    throw std::runtime_error("checkpoint: optimizer moment lengths differ");
  return st;
}

struct Checkpoint {
  std::uint64_t seed = 0;
  int episode = 0;
  std::string config_hash;
  PolicyParams policy{};
  CriticParams critic{};
  AdamState actor_opt{};
  AdamState critic_opt{};
};

inline OrderedJson checkpoint_to_json(const Checkpoint& cp) {
  const auto& cv = cp.critic.values();
  OrderedJson j;
  j["format"] = "qrl-checkpoint-v1";
  j["seed"] = cp.seed;
  j["episode"] = cp.episode;
  j["config_hash"] = cp.config_hash;
  j["policy"]["shape"] = {kPolicyLayers, kPolicyQubits, 3};
  j["policy"]["values"] = cp.policy.w;
  j["critic"]["w1"] = std::vector<double>(cv.begin() + CriticParams::kW1Offset,
                                          cv.begin() + CriticParams::kB1Offset);
  j["critic"]["b1"] = std::vector<double>(cv.begin() + CriticParams::kB1Offset,
                                          cv.begin() + CriticParams::kW2Offset);
  j["critic"]["w2"] = std::vector<double>(cv.begin() + CriticParams::kW2Offset,
                                          cv.begin() + CriticParams::kB2Offset);
  j["critic"]["b2"] = cv[CriticParams::kB2Offset];
  j["optimizers"]["actor"] = adam_to_json(cp.actor_opt);
  j["optimizers"]["critic"] = adam_to_json(cp.critic_opt);
  return j;
}

inline Checkpoint checkpoint_from_json(const OrderedJson& j) {
  Checkpoint cp;
  if (j.at("format").get<std::string>() != "qrl-checkpoint-v1")
    throw std::runtime_error("checkpoint: unknown format tag");
  cp.seed = j.at("seed").get<std::uint64_t>();
  cp.episode = j.at("episode").get<int>();
  cp.config_hash = j.at("config_hash").get<std::string>();

  const auto policy_values = j.at("policy").at("values").get<std::vector<double>>();
  if (policy_values.size() != kPolicyParamCount)
    throw std::runtime_error("checkpoint: policy parameter count mismatch");
  std::copy(policy_values.begin(), policy_values.end(), cp.policy.w.begin());

  const auto& critic = j.at("critic");
  const auto w1 = critic.at("w1").get<std::vector<double>>();
  const auto b1 = critic.at("b1").get<std::vector<double>>();
  const auto w2 = critic.at("w2").get<std::vector<double>>();
  const double b2 = critic.at("b2").get<double>();
  if (w1.size() != CriticParams::kHidden * CriticParams::kInputs ||
      b1.size() != CriticParams::kHidden || w2.size() != CriticParams::kHidden)
    throw std::runtime_error("checkpoint: critic parameter shape mismatch");
  auto& cv = cp.critic.values();
  std::copy(w1.begin(), w1.end(), cv.begin() + CriticParams::kW1Offset);
  std::copy(b1.begin(), b1.end(), cv.begin() + CriticParams::kB1Offset);
  std::copy(w2.begin(), w2.end(), cv.begin() + CriticParams::kW2Offset);
  cv[CriticParams::kB2Offset] = b2;

  cp.actor_opt = adam_from_json(j.at("optimizers").at("actor"));
  cp.critic_opt = adam_from_json(j.at("optimizers").at("critic"));
  if (cp.actor_opt.m.size() != kPolicyParamCount ||
      cp.critic_opt.m.size() != CriticParams::kSize)
    throw std::runtime_error("checkpoint: optimizer state length mismatch");
  return cp;
}

inline void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << checkpoint_to_json(cp).dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  try {
    OrderedJson j;
    in >> j;
    return checkpoint_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt checkpoint " + path.string() + ": " + e.what());
  }
}

}  // namespace qrl
