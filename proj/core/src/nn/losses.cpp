#include "nasalgan/nn/losses.hpp"

#include <algorithm>
#include <cmath>

#include "nasalgan/error.hpp"
#include "nasalgan/random.hpp"

namespace nasalgan::nn {
namespace {

template <typename T>
std::size_t class_count(const Tensor<T>& logits) {
    if (logits.rank() == 2) return logits.dim(1);
    if (logits.rank() == 3 && logits.dim(2) == 1) return logits.dim(1);
    throw UsageError("logits must be [batch, classes] or [batch, classes, 1], got " + shape_string(logits.shape()));
}

template <typename T>
void accumulate(Gradients<T>& into, const Gradients<T>& from) {
    for (std::size_t p = 0; p < into.size(); ++p)
        for (std::size_t j = 0; j < into[p].size(); ++j) into[p][j] += from[p][j];
}

}  // namespace

template <typename T>
Tensor<T> softmax(const Tensor<T>& logits) {
    const std::size_t k = class_count(logits);
    const std::size_t batch = logits.dim(0);
    Tensor<T> out(logits.shape());
    for (std::size_t b = 0; b < batch; ++b) {
        const T* z = logits.data() + b * k;
        T* p = out.data() + b * k;
        const T m = *std::max_element(z, z + k);
        T sum{};
        for (std::size_t c = 0; c < k; ++c) sum += (p[c] = std::exp(z[c] - m));
        for (std::size_t c = 0; c < k; ++c) p[c] /= sum;
    }
    return out;
}

template <typename T>
LossAndGradient<T> categorical_cross_entropy(const Tensor<T>& logits, const std::vector<std::size_t>& targets) {
    const std::size_t k = class_count(logits);
    const std::size_t batch = logits.dim(0);
    if (targets.size() != batch) throw UsageError("cross entropy: one target per row required");
    LossAndGradient<T> r;
    r.grad = softmax(logits);
    double loss = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        if (targets[b] >= k) throw UsageError("cross entropy: target class out of range");
        const T* z = logits.data() + b * k;
        const T m = *std::max_element(z, z + k);
        double lse = 0.0;
        for (std::size_t c = 0; c < k; ++c) lse += std::exp(static_cast<double>(z[c] - m));
        loss += std::log(lse) + static_cast<double>(m) - static_cast<double>(z[targets[b]]);
        r.grad[b * k + targets[b]] -= T{1};
    }
    const T inv = T{1} / static_cast<T>(batch);
    for (auto& g : r.grad.values()) g *= inv;
    r.loss = static_cast<T>(loss / static_cast<double>(batch));
    return r;
}

template <typename T>
LossAndGradient<T> categorical_cross_entropy(const Tensor<T>& logits, const Tensor<T>& one_hot) {
    const std::size_t k = class_count(logits);
    if (one_hot.size() != logits.size()) throw UsageError("cross entropy: one-hot shape mismatch");
    std::vector<std::size_t> targets(logits.dim(0));
    for (std::size_t b = 0; b < targets.size(); ++b) {
        std::size_t hot = k, ones = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const T v = one_hot[b * k + c];
            if (v == T{1}) {
                hot = c;
                ++ones;
            } else if (v != T{}) {
                ones = 2;
            }
        }
        if (ones != 1) throw UsageError("cross entropy: row " + std::to_string(b) + " is not one-hot");
        targets[b] = hot;
    }
    return categorical_cross_entropy(logits, targets);
}

template <typename T>
CriticLoss<T> gradient_penalty(const Network<T>& critic, const Tensor<T>& interpolates, double lambda,
                               const ForwardOptions& fwd) {
    const std::size_t batch = interpolates.dim(0);
    const std::size_t per = interpolates.size() / batch;
    CriticLoss<T> r;
    r.grads = critic.zero_gradients();

    const auto tape = critic.forward(interpolates, fwd);
    if (tape.output().size() != batch) throw UsageError("gradient_penalty: critic must output one value per example");
    const Tensor<T> ones(tape.output().shape(), T{1});
    const Tensor<T> g = critic.input_gradient(tape, ones);
    if (!g.all_finite()) throw NumericalError("gradient penalty: non-finite interpolate gradient");

    // u = g/||g|| per example; coefficient c_b = 2*lambda*(||g_b|| - 1)/batch.
    Tensor<T> direction(g.shape());
    Tensor<T> coeff(tape.output().shape());
    double penalty = 0.0, norms = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        double sq = 0.0;
        for (std::size_t j = 0; j < per; ++j) sq += static_cast<double>(g[b * per + j]) * g[b * per + j];
        const double norm = std::sqrt(sq);
        norms += norm;
        penalty += (norm - 1.0) * (norm - 1.0);
        if (norm > 0.0)
            for (std::size_t j = 0; j < per; ++j) direction[b * per + j] = static_cast<T>(g[b * per + j] / norm);
        coeff[b] = static_cast<T>(2.0 * lambda * (norm - 1.0) / static_cast<double>(batch));
    }
    r.penalty = static_cast<T>(lambda * penalty / static_cast<double>(batch));
    r.mean_grad_norm = static_cast<T>(norms / static_cast<double>(batch));
    r.loss = r.penalty;
    if (lambda == 0.0) return r;

    const auto dual = critic.forward_tangent(interpolates, direction, fwd);
    const Tensor<T> zero(dual.primal.output().shape());
    critic.backward_tangent(dual, zero, coeff, r.grads);
    return r;
}

template <typename T>
CriticLoss<T> wgan_gp_critic_loss(const Network<T>& critic, const Tensor<T>& real, const Tensor<T>& fake,
                                  const CriticLossOptions& options) {
    if (real.shape() != fake.shape()) throw UsageError("critic loss: real/fake batch shapes differ");
    const std::size_t batch = real.dim(0);
    const std::size_t per = real.size() / batch;
    const auto shuffle = [&](std::uint64_t tag) {
        ForwardOptions f;
        if (options.phase_shuffle) f.shuffle_seed = derive_seed(options.seed, tag);
        return f;
    };

    CriticLoss<T> r;
    r.grads = critic.zero_gradients();
    const T inv = T{1} / static_cast<T>(batch);

    const auto real_tape = critic.forward(real, shuffle(1));
    const auto fake_tape = critic.forward(fake, shuffle(2));
    double mean_real = 0.0, mean_fake = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
        mean_real += real_tape.output()[b];
        mean_fake += fake_tape.output()[b];
    }
    r.wasserstein = static_cast<T>((mean_fake - mean_real) / static_cast<double>(batch));
    critic.backward(real_tape, Tensor<T>(real_tape.output().shape(), -inv), r.grads);
    critic.backward(fake_tape, Tensor<T>(fake_tape.output().shape(), inv), r.grads);

    Rng rng(derive_seed(options.seed, 3));
    Tensor<T> interp(real.shape());
    for (std::size_t b = 0; b < batch; ++b) {
        const T eps = static_cast<T>(rng.uniform01());
        for (std::size_t j = 0; j < per; ++j) {
            const std::size_t k = b * per + j;
            interp[k] = eps * real[k] + (T{1} - eps) * fake[k];
        }
    }
    auto gp = gradient_penalty(critic, interp, options.lambda, shuffle(4));
    accumulate(r.grads, gp.grads);
    r.penalty = gp.penalty;
    r.mean_grad_norm = gp.mean_grad_norm;
    r.loss = r.wasserstein + r.penalty;
    if (!std::isfinite(r.loss)) throw NumericalError("critic loss is not finite");
    return r;
}

template Tensor<float> softmax(const Tensor<float>&);
template Tensor<double> softmax(const Tensor<double>&);
template LossAndGradient<float> categorical_cross_entropy(const Tensor<float>&, const std::vector<std::size_t>&);
template LossAndGradient<double> categorical_cross_entropy(const Tensor<double>&, const std::vector<std::size_t>&);
template LossAndGradient<float> categorical_cross_entropy(const Tensor<float>&, const Tensor<float>&);
template LossAndGradient<double> categorical_cross_entropy(const Tensor<double>&, const Tensor<double>&);
template CriticLoss<float> gradient_penalty(const Network<float>&, const Tensor<float>&, double, const ForwardOptions&);
template CriticLoss<double> gradient_penalty(const Network<double>&, const Tensor<double>&, double,
                                             const ForwardOptions&);
template CriticLoss<float> wgan_gp_critic_loss(const Network<float>&, const Tensor<float>&, const Tensor<float>&,
                                               const CriticLossOptions&);
template CriticLoss<double> wgan_gp_critic_loss(const Network<double>&, const Tensor<double>&, const Tensor<double>&,
                                                const CriticLossOptions&);

}  // namespace nasalgan::nn
