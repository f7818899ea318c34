#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nasalgan/nn/network.hpp"

namespace nasalgan::nn {

template <typename T>
struct LossAndGradient {
    T loss{};
    Tensor<T> grad;  // d loss / d input of the loss
};

/// Row-wise softmax of logits [batch, classes, 1] (or [batch, classes]).
template <typename T>
Tensor<T> softmax(const Tensor<T>& logits);

/// Mean over the batch of -log softmax(logits)[target].
template <typename T>
LossAndGradient<T> categorical_cross_entropy(const Tensor<T>& logits, const std::vector<std::size_t>& targets);

/// One-hot overload; every row of `one_hot` must contain exactly one 1.
template <typename T>
LossAndGradient<T> categorical_cross_entropy(const Tensor<T>& logits, const Tensor<T>& one_hot);

template <typename T>
struct CriticLoss {
    T loss{};         // wasserstein + penalty
    T wasserstein{};  // mean D(fake) - mean D(real)
    T penalty{};      // lambda * mean (||grad D(x_hat)|| - 1)^2
    T mean_grad_norm{};
    Gradients<T> grads;
};

struct CriticLossOptions {
    double lambda = 10.0;
    std::uint64_t seed = 0;
    /// Apply the critic's phase-shuffle layers (seeded from `seed`).
    bool phase_shuffle = true;
};

/// WGAN-GP critic objective and its exact parameter gradient. Interpolates
/// x_hat = eps*real + (1-eps)*fake use one eps ~ U(0,1) per example from the
/// seeded source. The penalty gradient is obtained by a forward-mode pass
/// along u = g/||g|| (g = grad_x D(x_hat), held fixed) followed by a reverse
/// pass: d||g||/dtheta = d<g, u>/dtheta.
/// Throws NumericalError if an interpolate gradient is non-finite.
template <typename T>
CriticLoss<T> wgan_gp_critic_loss(const Network<T>& critic, const Tensor<T>& real, const Tensor<T>& fake,
                                  const CriticLossOptions& options);

/// Penalty term alone evaluated at given interpolates; exposed for tests.
template <typename T>
CriticLoss<T> gradient_penalty(const Network<T>& critic, const Tensor<T>& interpolates, double lambda,
                               const ForwardOptions& forward_options);

}  // namespace nasalgan::nn
