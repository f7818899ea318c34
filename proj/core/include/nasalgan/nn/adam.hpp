#pragma once

#include <cstdint>
#include <vector>

#include "nasalgan/nn/network.hpp"

namespace nasalgan::nn {

struct AdamConfig {
    double alpha = 1e-4;
    double beta1 = 0.5;
    double beta2 = 0.9;
    double epsilon = 1e-8;

    friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

template <typename T>
struct AdamState {
    AdamConfig config;
    std::uint64_t step = 0;
    std::vector<Tensor<T>> first;   // m
    std::vector<Tensor<T>> second;  // v

    AdamState() = default;
    AdamState(AdamConfig cfg, const std::vector<Tensor<T>>& params);

    friend bool operator==(const AdamState&, const AdamState&) = default;
};

/// One bias-corrected Adam update. Throws NumericalError, leaving parameters
/// and state untouched, if any gradient is non-finite.
template <typename T>
void adam_step(std::vector<Tensor<T>>& params, const Gradients<T>& grads, AdamState<T>& state);

}  // namespace nasalgan::nn
