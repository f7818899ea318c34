#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "nasalgan/nn/tensor.hpp"

namespace nasalgan::nn {

enum class LayerKind : std::uint8_t {
    dense = 0,
    conv1d = 1,
    conv1d_transpose = 2,
    leaky_relu = 3,
    tanh = 4,
    reshape = 5,
    phase_shuffle = 6,
};

std::string_view to_string(LayerKind kind) noexcept;

/// Per-example activation shape (channels, length). Dense layers read the
/// flattened channels*length values and emit (out_features, 1).
struct FeatureShape {
    std::size_t channels = 1;
    std::size_t length = 1;

    std::size_t size() const noexcept { return channels * length; }
    friend bool operator==(const FeatureShape&, const FeatureShape&) = default;
};

/// Declarative description of one layer in a sequential network.
///
/// Weight layouts:
///   dense             [out, in]
///   conv1d            [out_channels, in_channels, kernel]
///   conv1d_transpose  [in_channels, out_channels, kernel]
/// conv1d_transpose with a given weight tensor is the exact adjoint of conv1d
/// with the same tensor, stride and padding.
struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    std::size_t in_channels = 0;   // dense: in_features
    std::size_t out_channels = 0;  // dense: out_features
    std::size_t kernel = 0;
    std::size_t stride = 1;
    std::size_t padding = 0;
    double slope = 0.2;
    std::size_t radius = 0;
    FeatureShape target{};  // reshape

    static LayerSpec dense(std::size_t in, std::size_t out);
    static LayerSpec conv1d(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, std::size_t stride,
                            std::size_t padding);
    static LayerSpec conv1d_transpose(std::size_t in_ch, std::size_t out_ch, std::size_t kernel,
                                      std::size_t stride, std::size_t padding);
    static LayerSpec leaky_relu(double slope);
    static LayerSpec tanh();
    static LayerSpec reshape(std::size_t channels, std::size_t length);
    static LayerSpec phase_shuffle(std::size_t radius);

    bool has_params() const noexcept;
    Shape weight_shape() const;
    std::size_t fan_in() const noexcept;
    std::size_t fan_out() const noexcept;

    /// Throws UsageError if `in` is incompatible with this layer.
    FeatureShape output_shape(const FeatureShape& in) const;

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

std::size_t conv1d_output_length(std::size_t length, std::size_t kernel, std::size_t stride,
                                 std::size_t padding);
std::size_t conv1d_transpose_output_length(std::size_t length, std::size_t kernel, std::size_t stride,
                                           std::size_t padding);

/// Cross-correlation of input [batch, in_ch, length] with kernel
/// [out_ch, in_ch, width]; bias may be null.
template <typename T>
Tensor<T> conv1d_forward(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>* bias,
                         std::size_t stride, std::size_t padding);

/// Fractionally strided convolution of input [batch, in_ch, length] with
/// kernel [in_ch, out_ch, width]; bias may be null.
template <typename T>
Tensor<T> conv1d_transpose_forward(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>* bias,
                                   std::size_t stride, std::size_t padding);

/// Reflect-padded index for a time axis of `length` samples.
std::size_t reflect_index(std::ptrdiff_t i, std::size_t length) noexcept;

/// Shifts every channel of example b by shifts[b] samples (out[i] = in[i - s]),
/// reflecting at the edges.
template <typename T>
Tensor<T> phase_shuffle(const Tensor<T>& input, const std::vector<int>& shifts);

/// Draws one shift per example uniformly from [-radius, radius].
std::vector<int> draw_phase_shifts(std::size_t batch, std::size_t radius, std::uint64_t seed);

/// Convenience overload: draws shifts from `seed` and applies them. Throws
/// UsageError when radius >= length.
template <typename T>
Tensor<T> phase_shuffle(const Tensor<T>& input, std::size_t radius, std::uint64_t seed);

}  // namespace nasalgan::nn
