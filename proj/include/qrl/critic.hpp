#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "qrl/rng.hpp"

namespace qrl {

// 4 -> 256 -> 1 value network with a ReLU hidden layer. Parameters live in
// one flat vector (W1 row-major, then b1, W2, b2) so the optimizer can treat
// them uniformly.
class CriticParams {
 public:
  static constexpr int kInputs = 4;
  static constexpr int kHidden = 256;
  static constexpr int kW1Offset = 0;
  static constexpr int kB1Offset = kHidden * kInputs;
  static constexpr int kW2Offset = kB1Offset + kHidden;
  static constexpr int kB2Offset = kW2Offset + kHidden;
  static constexpr int kSize = kB2Offset + 1;

  CriticParams() : values_(kSize, 0.0) {}

  // Fan-in uniform init: hidden weights and biases from
  // U(-1/sqrt(4), 1/sqrt(4)), output layer from U(-1/sqrt(256), 1/sqrt(256)).
  static CriticParams random_init(Rng& rng) {
    CriticParams p;
    const double hidden_bound = 1.0 / std::sqrt(static_cast<double>(kInputs));
    const double out_bound = 1.0 / std::sqrt(static_cast<double>(kHidden));
    for (int i = 0; i < kW2Offset; ++i) p.values_[static_cast<std::size_t>(i)] = uniform_in(rng, -hidden_bound, hidden_bound);
    for (int i = kW2Offset; i < kSize; ++i) p.values_[static_cast<std::size_t>(i)] = uniform_in(rng, -out_bound, out_bound);
    return p;
  }

  double w1(int h, int i) const { return values_[static_cast<std::size_t>(kW1Offset + h * kInputs + i)]; }
  double b1(int h) const { return values_[static_cast<std::size_t>(kB1Offset + h)]; }
  double w2(int h) const { return values_[static_cast<std::size_t>(kW2Offset + h)]; }
  double b2() const { return values_[kB2Offset]; }

  double& w1(int h, int i) { return values_[static_cast<std::size_t>(kW1Offset + h * kInputs + i)]; }
  double& b1(int h) { return values_[static_cast<std::size_t>(kB1Offset + h)]; }
  double& w2(int h) { return values_[static_cast<std::size_t>(kW2Offset + h)]; }
  double& b2() { return values_[kB2Offset]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

inline double critic_forward(const CriticParams& p, const std::array<double, 4>& obs) {
  double v = p.b2();
  for (int h = 0; h < CriticParams::kHidden; ++h) {
    double pre = p.b1(h);
    for (int i = 0; i < CriticParams::kInputs; ++i) pre += p.w1(h, i) * obs[static_cast<std::size_t>(i)];
    if (pre > 0.0) v += p.w2(h) * pre;
  }
  return v;
}

// Gradient of loss_grad * V(obs) in the flat parameter layout. The ReLU
// subgradient at exactly zero is taken as zero.
inline std::vector<double> critic_backward(const CriticParams& p, const std::array<double, 4>& obs,
                                           double loss_grad) {
  std::vector<double> grad(CriticParams::kSize, 0.0);
  grad[CriticParams::kB2Offset] = loss_grad;
  for (int h = 0; h < CriticParams::kHidden; ++h) {
    double pre = p.b1(h);
    for (int i = 0; i < CriticParams::kInputs; ++i) pre += p.w1(h, i) * obs[static_cast<std::size_t>(i)];
    if (pre > 0.0) {
      grad[static_cast<std::size_t>(CriticParams::kW2Offset + h)] = loss_grad * pre;
      const double gh = loss_grad * p.w2(h);
      grad[static_cast<std::size_t>(CriticParams::kB1Offset + h)] = gh;
      for (int i = 0; i < CriticParams::kInputs; ++i)
        grad[static_cast<std::size_t>(CriticParams::kW1Offset + h * CriticParams::kInputs + i)] =
            gh * obs[static_cast<std::size_t>(i)];
    }
  }
  return grad;
}

}  // namespace qrl
