#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nasalgan/nn/layers.hpp"
#include "nasalgan/nn/tensor.hpp"

namespace nasalgan::nn {

/// One gradient tensor per parameter tensor, in Network::parameters() order.
template <typename T>
using Gradients = std::vector<Tensor<T>>;

struct ForwardOptions {
    /// Seed for phase-shuffle shifts; without one, phase shuffle is identity.
    std::optional<std::uint64_t> shuffle_seed;
};

/// Activations recorded by a forward pass. activations[i] is the input of
/// layer i; the last entry is the network output.
template <typename T>
struct Tape {
    std::vector<Tensor<T>> activations;
    std::vector<std::vector<int>> shifts;  // per layer; empty unless phase shuffle

    bool recorded() const noexcept { return !activations.empty(); }
    const Tensor<T>& output() const { return activations.back(); }
};

/// Forward-mode record: primal activations plus their directional
/// derivatives along an input tangent.
template <typename T>
struct DualTape {
    Tape<T> primal;
    std::vector<Tensor<T>> tangents;

    bool recorded() const noexcept { return primal.recorded(); }
    const Tensor<T>& tangent_output() const { return tangents.back(); }
};

/// Fixed sequential network with exact reverse-mode gradients. Besides the
/// usual backward pass it supports a forward-mode tangent pass and the
/// reverse pass through it, which yields parameter gradients of directional
/// input derivatives (used by the gradient penalty).
///
/// A Network is immutable during forward/backward, so a trained instance can
/// be shared across threads.
template <typename T>
class Network {
public:
    Network() = default;
    Network(FeatureShape input, std::vector<LayerSpec> layers);

    /// Glorot-uniform weights, zero biases. Values are drawn in double so float
    /// and double networks initialized from one seed agree up to rounding.
    void initialize(std::uint64_t seed);

    const FeatureShape& input_shape() const noexcept { return input_; }
    const FeatureShape& output_shape() const noexcept { return shapes_.back(); }
    const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
    /// shapes()[i] is the per-example input shape of layer i.
    const std::vector<FeatureShape>& shapes() const noexcept { return shapes_; }

    std::vector<Tensor<T>>& parameters() noexcept { return params_; }
    const std::vector<Tensor<T>>& parameters() const noexcept { return params_; }
    std::size_t parameter_count() const noexcept;

    Gradients<T> zero_gradients() const;

    Tape<T> forward(const Tensor<T>& input, const ForwardOptions& options = {}) const;
    Tensor<T> predict(const Tensor<T>& input, const ForwardOptions& options = {}) const {
        return forward(input, options).output();
    }

    /// Accumulates parameter gradients of <output, grad_output> into `grads`
    /// and returns the input gradient. Throws UsageError on an empty tape.
    Tensor<T> backward(const Tape<T>& tape, const Tensor<T>& grad_output, Gradients<T>& grads) const;

    /// Input gradient only.
    Tensor<T> input_gradient(const Tape<T>& tape, const Tensor<T>& grad_output) const;

    DualTape<T> forward_tangent(const Tensor<T>& input, const Tensor<T>& tangent,
                                const ForwardOptions& options = {}) const;

    /// Reverse pass through a dual forward for the scalar
    /// <output, grad_output> + <tangent_output, grad_tangent>. Accumulates
    /// parameter gradients and returns the input gradient.
    Tensor<T> backward_tangent(const DualTape<T>& tape, const Tensor<T>& grad_output,
                               const Tensor<T>& grad_tangent, Gradients<T>& grads) const;

    template <typename U>
    Network<U> cast() const {
        Network<U> out(input_, layers_);
        for (std::size_t i = 0; i < params_.size(); ++i) out.parameters()[i] = params_[i].template cast<U>();
        return out;
    }

    /// Index of the weight tensor of layer i in parameters(), if any. The bias
    /// follows at index + 1.
    std::optional<std::size_t> parameter_index(std::size_t layer) const;

    friend bool operator==(const Network&, const Network&) = default;

private:
    void check_input(const Tensor<T>& input) const;

    FeatureShape input_{};
    std::vector<LayerSpec> layers_;
    std::vector<FeatureShape> shapes_;
    std::vector<Tensor<T>> params_;
    std::vector<std::ptrdiff_t> param_index_;
};

extern template class Network<float>;
extern template class Network<double>;

}  // namespace nasalgan::nn
