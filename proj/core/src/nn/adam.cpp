#include "nasalgan/nn/adam.hpp"

#include <cmath>

#include "nasalgan/error.hpp"

namespace nasalgan::nn {

template <typename T>
AdamState<T>::AdamState(AdamConfig cfg, const std::vector<Tensor<T>>& params) : config(cfg) {
    for (const auto& p : params) {
        first.emplace_back(p.shape());
        second.emplace_back(p.shape());
    }
}

template <typename T>
void adam_step(std::vector<Tensor<T>>& params, const Gradients<T>& grads, AdamState<T>& state) {
    if (params.size() != grads.size() || params.size() != state.first.size())
        throw UsageError("adam_step: parameter/gradient/state count mismatch");
    for (std::size_t p = 0; p < params.size(); ++p) {
        if (params[p].shape() != grads[p].shape() || params[p].shape() != state.first[p].shape())
            throw UsageError("adam_step: shape mismatch for parameter " + std::to_string(p));
        if (!grads[p].all_finite())
            throw NumericalError("adam_step: non-finite gradient in parameter tensor " + std::to_string(p));
    }
    const auto& c = state.config;
    ++state.step;
    const double t = static_cast<double>(state.step);
    const T b1 = static_cast<T>(c.beta1), b2 = static_cast<T>(c.beta2);
    const T corr1 = static_cast<T>(1.0 - std::pow(c.beta1, t));
    const T corr2 = static_cast<T>(1.0 - std::pow(c.beta2, t));
    const T alpha = static_cast<T>(c.alpha), eps = static_cast<T>(c.epsilon);
    for (std::size_t p = 0; p < params.size(); ++p) {
        T* w = params[p].data();
        T* m = state.first[p].data();
        T* v = state.second[p].data();
        const T* g = grads[p].data();
        for (std::size_t j = 0; j < params[p].size(); ++j) {
            m[j] = b1 * m[j] + (T{1} - b1) * g[j];
            v[j] = b2 * v[j] + (T{1} - b2) * g[j] * g[j];
            const T mhat = m[j] / corr1;
            const T vhat = v[j] / corr2;
            w[j] -= alpha * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

template struct AdamState<float>;
template struct AdamState<double>;
template void adam_step(std::vector<Tensor<float>>&, const Gradients<float>&, AdamState<float>&);
template void adam_step(std::vector<Tensor<double>>&, const Gradients<double>&, AdamState<double>&);

}  // namespace nasalgan::nn
