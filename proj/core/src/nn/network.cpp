#include "nasalgan/nn/network.hpp"

#include <cmath>
#include <string>

#include "kernels.hpp"
#include "nasalgan/error.hpp"
#include "nasalgan/random.hpp"

namespace nasalgan::nn {

// ---------------------------------------------------------------- LayerSpec

std::string_view to_string(LayerKind kind) noexcept {
    switch (kind) {
        case LayerKind::dense: return "dense";
        case LayerKind::conv1d: return "conv1d";
        case LayerKind::conv1d_transpose: return "conv1d_transpose";
        case LayerKind::leaky_relu: return "leaky_relu";
        case LayerKind::tanh: return "tanh";
        case LayerKind::reshape: return "reshape";
        case LayerKind::phase_shuffle: return "phase_shuffle";
    }
    return "?";
}

LayerSpec LayerSpec::dense(std::size_t in, std::size_t out) {
    LayerSpec s;
    s.kind = LayerKind::dense;
    s.in_channels = in;
    s.out_channels = out;
    return s;
}

LayerSpec LayerSpec::conv1d(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, std::size_t stride,
                            std::size_t padding) {
    LayerSpec s;
    s.kind = LayerKind::conv1d;
    s.in_channels = in_ch;
    s.out_channels = out_ch;
    s.kernel = kernel;
    s.stride = stride;
    s.padding = padding;
    return s;
}

LayerSpec LayerSpec::conv1d_transpose(std::size_t in_ch, std::size_t out_ch, std::size_t kernel,
                                      std::size_t stride, std::size_t padding) {
    LayerSpec s = conv1d(in_ch, out_ch, kernel, stride, padding);
    s.kind = LayerKind::conv1d_transpose;
    return s;
}

LayerSpec LayerSpec::leaky_relu(double slope) {
    LayerSpec s;
    s.kind = LayerKind::leaky_relu;
    s.slope = slope;
    return s;
}

LayerSpec LayerSpec::tanh() {
    LayerSpec s;
    s.kind = LayerKind::tanh;
    return s;
}

LayerSpec LayerSpec::reshape(std::size_t channels, std::size_t length) {
    LayerSpec s;
    s.kind = LayerKind::reshape;
    s.target = {channels, length};
    return s;
}

LayerSpec LayerSpec::phase_shuffle(std::size_t radius) {
    LayerSpec s;
    s.kind = LayerKind::phase_shuffle;
    s.radius = radius;
    return s;
}

bool LayerSpec::has_params() const noexcept {
    return kind == LayerKind::dense || kind == LayerKind::conv1d || kind == LayerKind::conv1d_transpose;
}

Shape LayerSpec::weight_shape() const {
    switch (kind) {
        case LayerKind::dense: return {out_channels, in_channels};
        case LayerKind::conv1d: return {out_channels, in_channels, kernel};
        case LayerKind::conv1d_transpose: return {in_channels, out_channels, kernel};
        default: return {};
    }
}

std::size_t LayerSpec::fan_in() const noexcept {
    return kind == LayerKind::dense ? in_channels : in_channels * kernel;
}

std::size_t LayerSpec::fan_out() const noexcept {
    return kind == LayerKind::dense ? out_channels : out_channels * kernel;
}

std::size_t conv1d_output_length(std::size_t length, std::size_t kernel, std::size_t stride,
                                 std::size_t padding) {
    if (stride == 0 || kernel == 0 || length + 2 * padding < kernel)
        throw UsageError("conv1d: invalid length arithmetic (length " + std::to_string(length) + ", kernel " +
                         std::to_string(kernel) + ", padding " + std::to_string(padding) + ")");
    return (length + 2 * padding - kernel) / stride + 1;
}

std::size_t conv1d_transpose_output_length(std::size_t length, std::size_t kernel, std::size_t stride,
                                           std::size_t padding) {
    if (stride == 0 || kernel == 0 || length == 0 || (length - 1) * stride + kernel <= 2 * padding)
        throw UsageError("conv1d_transpose: invalid length arithmetic");
    return (length - 1) * stride + kernel - 2 * padding;
}

FeatureShape LayerSpec::output_shape(const FeatureShape& in) const {
    switch (kind) {
        case LayerKind::dense:
            if (in.size() != in_channels)
                throw UsageError("dense: expected " + std::to_string(in_channels) + " inputs, got " +
                                 std::to_string(in.size()));
            return {out_channels, 1};
        case LayerKind::conv1d:
            if (in.channels != in_channels) throw UsageError("conv1d: channel mismatch");
            return {out_channels, conv1d_output_length(in.length, kernel, stride, padding)};
        case LayerKind::conv1d_transpose:
            if (in.channels != in_channels) throw UsageError("conv1d_transpose: channel mismatch");
            return {out_channels, conv1d_transpose_output_length(in.length, kernel, stride, padding)};
        case LayerKind::reshape:
            if (target.size() != in.size()) throw UsageError("reshape: size mismatch");
            return target;
        case LayerKind::phase_shuffle:
            if (radius >= in.length) throw UsageError("phase_shuffle: radius must be smaller than length");
            return in;
        case LayerKind::leaky_relu:
        case LayerKind::tanh: return in;
    }
    return in;
}

// ------------------------------------------------------------ free kernels

namespace {

template <typename T>
std::vector<T>& scratch(int slot) {
    thread_local std::vector<T> buffers[2];
    return buffers[slot];
}

kernels::ConvGeometry conv_geometry(const LayerSpec& L, const FeatureShape& in, const FeatureShape& out) {
    if (L.kind == LayerKind::conv1d) return {in.channels, in.length, out.length, L.kernel, L.stride, L.padding};
    return {out.channels, out.length, in.length, L.kernel, L.stride, L.padding};
}

// y = L(x) (+ bias when non-null) for dense / conv1d / conv1d_transpose.
template <typename T>
void linear_apply(const LayerSpec& L, const FeatureShape& in, const FeatureShape& out, const Tensor<T>& W,
                  const Tensor<T>* bias, const Tensor<T>& x, Tensor<T>& y) {
    const std::size_t batch = x.dim(0);
    y = Tensor<T>({batch, out.channels, out.length});
    const T* w = W.data();
    for (std::size_t b = 0; b < batch; ++b) {
        const T* xb = x.data() + b * in.size();
        T* yb = y.data() + b * out.size();
        switch (L.kind) {
            case LayerKind::dense:
                for (std::size_t o = 0; o < out.channels; ++o)
                    yb[o] = kernels::dot(w + o * in.size(), xb, in.size()) + (bias ? (*bias)[o] : T{});
                break;
            case LayerKind::conv1d: {
                const auto g = conv_geometry(L, in, out);
                auto& P = scratch<T>(0);
                P.resize(g.short_len * g.row());
                kernels::im2col(xb, g, P.data());
                for (std::size_t co = 0; co < out.channels; ++co) {
                    const T* wr = w + co * g.row();
                    const T bv = bias ? (*bias)[co] : T{};
                    T* yr = yb + co * out.length;
                    for (std::size_t i = 0; i < out.length; ++i)
                        yr[i] = kernels::dot(wr, P.data() + i * g.row(), g.row()) + bv;
                }
                break;
            }
            case LayerKind::conv1d_transpose: {
                const auto g = conv_geometry(L, in, out);
                auto& Q = scratch<T>(0);
                Q.assign(g.short_len * g.row(), T{});
                for (std::size_t i = 0; i < in.length; ++i)
                    for (std::size_t ci = 0; ci < in.channels; ++ci)
                        kernels::axpy(xb[ci * in.length + i], w + ci * g.row(), Q.data() + i * g.row(), g.row());
                kernels::col2im(Q.data(), g, yb);
                if (bias)
                    for (std::size_t co = 0; co < out.channels; ++co)
                        for (std::size_t i = 0; i < out.length; ++i) yb[co * out.length + i] += (*bias)[co];
                break;
            }
            default: break;
        }
    }
}

// gx += L^T gy, gW += d<gy, L_W(x)>/dW, gb += sum gy. Any output may be null.
template <typename T>
void linear_adjoint(const LayerSpec& L, const FeatureShape& in, const FeatureShape& out, const Tensor<T>& W,
                    const Tensor<T>& x, const Tensor<T>& gy, Tensor<T>* gx, Tensor<T>* gW, Tensor<T>* gb) {
    const std::size_t batch = x.dim(0);
    const T* w = W.data();
    for (std::size_t b = 0; b < batch; ++b) {
        const T* xb = x.data() + b * in.size();
        const T* gyb = gy.data() + b * out.size();
        T* gxb = gx ? gx->data() + b * in.size() : nullptr;
        if (gb)
            for (std::size_t co = 0; co < out.channels; ++co)
                for (std::size_t i = 0; i < out.length; ++i) (*gb)[co] += gyb[co * out.length + i];
        switch (L.kind) {
            case LayerKind::dense:
                for (std::size_t o = 0; o < out.channels; ++o) {
                    if (gyb[o] == T{}) continue;
                    if (gW) kernels::axpy(gyb[o], xb, gW->data() + o * in.size(), in.size());
                    if (gxb) kernels::axpy(gyb[o], w + o * in.size(), gxb, in.size());
                }
                break;
            case LayerKind::conv1d: {
                const auto g = conv_geometry(L, in, out);
                if (gW) {
                    auto& P = scratch<T>(0);
                    P.resize(g.short_len * g.row());
                    kernels::im2col(xb, g, P.data());
                    for (std::size_t co = 0; co < out.channels; ++co)
                        for (std::size_t i = 0; i < out.length; ++i)
                            kernels::axpy(gyb[co * out.length + i], P.data() + i * g.row(),
                                          gW->data() + co * g.row(), g.row());
                }
                if (gxb) {
                    auto& GP = scratch<T>(1);
                    GP.assign(g.short_len * g.row(), T{});
                    for (std::size_t i = 0; i < out.length; ++i)
                        for (std::size_t co = 0; co < out.channels; ++co)
                            kernels::axpy(gyb[co * out.length + i], w + co * g.row(), GP.data() + i * g.row(),
                                          g.row());
                    kernels::col2im(GP.data(), g, gxb);
                }
                break;
            }
            case LayerKind::conv1d_transpose: {
                const auto g = conv_geometry(L, in, out);
                auto& GQ = scratch<T>(1);
                GQ.resize(g.short_len * g.row());
                kernels::im2col(gyb, g, GQ.data());
                for (std::size_t ci = 0; ci < in.channels; ++ci) {
                    const T* wr = w + ci * g.row();
                    for (std::size_t i = 0; i < in.length; ++i) {
                        const T* q = GQ.data() + i * g.row();
                        if (gxb) gxb[ci * in.length + i] += kernels::dot(wr, q, g.row());
                        if (gW) kernels::axpy(xb[ci * in.length + i], q, gW->data() + ci * g.row(), g.row());
                    }
                }
                break;
            }
            default: break;
        }
    }
}

template <typename T>
void shuffle_apply(const Tensor<T>& x, const std::vector<int>& shifts, bool adjoint, Tensor<T>& y) {
    const std::size_t batch = x.dim(0), channels = x.dim(1), length = x.dim(2);
    y = Tensor<T>(x.shape());
    for (std::size_t b = 0; b < batch; ++b) {
        const int s = shifts[b];
        for (std::size_t c = 0; c < channels; ++c) {
            const T* xr = x.data() + (b * channels + c) * length;
            T* yr = y.data() + (b * channels + c) * length;
            for (std::size_t i = 0; i < length; ++i) {
                const std::size_t j = reflect_index(static_cast<std::ptrdiff_t>(i) - s, length);
                if (adjoint) yr[j] += xr[i];
                else yr[i] = xr[j];
            }
        }
    }
}

}  // namespace

std::size_t reflect_index(std::ptrdiff_t i, std::size_t length) noexcept {
    const auto n = static_cast<std::ptrdiff_t>(length);
    if (n == 1) return 0;
    const std::ptrdiff_t period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return static_cast<std::size_t>(i < n ? i : period - i);
}

std::vector<int> draw_phase_shifts(std::size_t batch, std::size_t radius, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> shifts(batch);
    const auto r = static_cast<std::int64_t>(radius);
    for (auto& s : shifts) s = static_cast<int>(rng.between(-r, r));
    return shifts;
}

template <typename T>
Tensor<T> phase_shuffle(const Tensor<T>& input, const std::vector<int>& shifts) {
    if (input.rank() != 3 || shifts.size() != input.dim(0))
        throw UsageError("phase_shuffle: expected [batch, channels, length] and one shift per example");
    Tensor<T> out;
    shuffle_apply(input, shifts, false, out);
    return out;
}

template <typename T>
Tensor<T> phase_shuffle(const Tensor<T>& input, std::size_t radius, std::uint64_t seed) {
    if (input.rank() != 3) throw UsageError("phase_shuffle: expected [batch, channels, length]");
    if (radius >= input.dim(2)) throw UsageError("phase_shuffle: radius must be smaller than the length");
    return phase_shuffle(input, draw_phase_shifts(input.dim(0), radius, seed));
}

template <typename T>
Tensor<T> conv1d_forward(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>* bias,
                         std::size_t stride, std::size_t padding) {
    if (input.rank() != 3 || kernel.rank() != 3 || kernel.dim(1) != input.dim(1))
        throw UsageError("conv1d_forward: shape mismatch " + shape_string(input.shape()) + " * " +
                         shape_string(kernel.shape()));
    if (bias && bias->size() != kernel.dim(0)) throw UsageError("conv1d_forward: bias size mismatch");
    const auto L = LayerSpec::conv1d(kernel.dim(1), kernel.dim(0), kernel.dim(2), stride, padding);
    const FeatureShape in{input.dim(1), input.dim(2)};
    Tensor<T> y;
    linear_apply(L, in, L.output_shape(in), kernel, bias, input, y);
    return y;
}

template <typename T>
Tensor<T> conv1d_transpose_forward(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>* bias,
                                   std::size_t stride, std::size_t padding) {
    if (input.rank() != 3 || kernel.rank() != 3 || kernel.dim(0) != input.dim(1))
        throw UsageError("conv1d_transpose_forward: shape mismatch " + shape_string(input.shape()) + " * " +
                         shape_string(kernel.shape()));
    if (bias && bias->size() != kernel.dim(1)) throw UsageError("conv1d_transpose_forward: bias size mismatch");
    const auto L = LayerSpec::conv1d_transpose(kernel.dim(0), kernel.dim(1), kernel.dim(2), stride, padding);
    const FeatureShape in{input.dim(1), input.dim(2)};
    Tensor<T> y;
    linear_apply(L, in, L.output_shape(in), kernel, bias, input, y);
    return y;
}

// ------------------------------------------------------------------ Network

template <typename T>
Network<T>::Network(FeatureShape input, std::vector<LayerSpec> layers)
    : input_(input), layers_(std::move(layers)) {
    shapes_.push_back(input_);
    for (const auto& L : layers_) {
        shapes_.push_back(L.output_shape(shapes_.back()));
        if (L.has_params()) {
            param_index_.push_back(static_cast<std::ptrdiff_t>(params_.size()));
            params_.emplace_back(L.weight_shape());
            params_.emplace_back(Shape{L.out_channels});
        } else {
            param_index_.push_back(-1);
        }
    }
}

template <typename T>
void Network<T>::initialize(std::uint64_t seed) {
    Rng rng(seed);
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (param_index_[i] < 0) continue;
        const auto& L = layers_[i];
        const double limit = std::sqrt(6.0 / static_cast<double>(L.fan_in() + L.fan_out()));
        auto& W = params_[static_cast<std::size_t>(param_index_[i])];
        for (auto& w : W.values()) w = static_cast<T>(rng.uniform(-limit, limit));
        params_[static_cast<std::size_t>(param_index_[i]) + 1].fill(T{});
    }
}

template <typename T>
std::size_t Network<T>::parameter_count() const noexcept {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.size();
    return n;
}

template <typename T>
Gradients<T> Network<T>::zero_gradients() const {
    Gradients<T> g;
    g.reserve(params_.size());
    for (const auto& p : params_) g.emplace_back(p.shape());
    return g;
}

template <typename T>
std::optional<std::size_t> Network<T>::parameter_index(std::size_t layer) const {
    if (param_index_.at(layer) < 0) return std::nullopt;
    return static_cast<std::size_t>(param_index_[layer]);
}

template <typename T>
void Network<T>::check_input(const Tensor<T>& input) const {
    if (input.rank() != 3 || input.dim(1) != input_.channels || input.dim(2) != input_.length || input.dim(0) == 0)
        throw UsageError("network input " + shape_string(input.shape()) + " does not match [batch," +
                         std::to_string(input_.channels) + "," + std::to_string(input_.length) + "]");
}

template <typename T>
Tape<T> Network<T>::forward(const Tensor<T>& input, const ForwardOptions& options) const {
    check_input(input);
    Tape<T> tape;
    tape.activations.reserve(layers_.size() + 1);
    tape.shifts.resize(layers_.size());
    tape.activations.push_back(input);
    const std::size_t batch = input.dim(0);
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& L = layers_[i];
        const auto& x = tape.activations[i];
        Tensor<T> y;
        switch (L.kind) {
            case LayerKind::dense:
            case LayerKind::conv1d:
            case LayerKind::conv1d_transpose: {
                const auto p = static_cast<std::size_t>(param_index_[i]);
                linear_apply(L, shapes_[i], shapes_[i + 1], params_[p], &params_[p + 1], x, y);
                break;
            }
            case LayerKind::leaky_relu: {
                y = x;
                const T slope = static_cast<T>(L.slope);
                for (auto& v : y.values()) v = v > T{} ? v : slope * v;
                break;
            }
            case LayerKind::tanh:
                y = x;
                for (auto& v : y.values()) v = std::tanh(v);
                break;
            case LayerKind::reshape:
                y = x;
                y.reshape({batch, shapes_[i + 1].channels, shapes_[i + 1].length});
                break;
            case LayerKind::phase_shuffle:
                if (options.shuffle_seed && L.radius > 0) {
                    tape.shifts[i] = draw_phase_shifts(batch, L.radius, derive_seed(*options.shuffle_seed, i));
                    shuffle_apply(x, tape.shifts[i], false, y);
                } else {
                    y = x;
                }
                break;
        }
        tape.activations.push_back(std::move(y));
    }
    return tape;
}

template <typename T>
Tensor<T> Network<T>::backward(const Tape<T>& tape, const Tensor<T>& grad_output, Gradients<T>& grads) const {
    if (!tape.recorded()) throw UsageError("backward called before forward (empty tape)");
    if (grad_output.shape() != tape.output().shape())
        throw UsageError("backward: gradient shape " + shape_string(grad_output.shape()) + " != output shape " +
                         shape_string(tape.output().shape()));
    if (grads.size() != params_.size()) throw UsageError("backward: gradient buffer mismatch");
    Tensor<T> g = grad_output;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        const auto& L = layers_[i];
        const auto& x = tape.activations[i];
        const auto& y = tape.activations[i + 1];
        switch (L.kind) {
            case LayerKind::dense:
            case LayerKind::conv1d:
            case LayerKind::conv1d_transpose: {
                const auto p = static_cast<std::size_t>(param_index_[i]);
                Tensor<T> gx(x.shape());
                linear_adjoint(L, shapes_[i], shapes_[i + 1], params_[p], x, g, &gx, &grads[p], &grads[p + 1]);
                g = std::move(gx);
                break;
            }
            case LayerKind::leaky_relu: {
                const T slope = static_cast<T>(L.slope);
                for (std::size_t j = 0; j < g.size(); ++j) g[j] *= x[j] > T{} ? T{1} : slope;
                break;
            }
            case LayerKind::tanh:
                for (std::size_t j = 0; j < g.size(); ++j) g[j] *= T{1} - y[j] * y[j];
                break;
            case LayerKind::reshape: g.reshape(x.shape()); break;
            case LayerKind::phase_shuffle:
                if (!tape.shifts[i].empty()) {
                    Tensor<T> gx;
                    shuffle_apply(g, tape.shifts[i], true, gx);
                    g = std::move(gx);
                }
                break;
        }
    }
    return g;
}

template <typename T>
Tensor<T> Network<T>::input_gradient(const Tape<T>& tape, const Tensor<T>& grad_output) const {
    if (!tape.recorded()) throw UsageError("backward called before forward (empty tape)");
    if (grad_output.shape() != tape.output().shape()) throw UsageError("input_gradient: gradient shape mismatch");
    Tensor<T> g = grad_output;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        const auto& L = layers_[i];
        const auto& x = tape.activations[i];
        const auto& y = tape.activations[i + 1];
        switch (L.kind) {
            case LayerKind::dense:
            case LayerKind::conv1d:
            case LayerKind::conv1d_transpose: {
                const auto p = static_cast<std::size_t>(param_index_[i]);
                Tensor<T> gx(x.shape());
                linear_adjoint<T>(L, shapes_[i], shapes_[i + 1], params_[p], x, g, &gx, nullptr, nullptr);
                g = std::move(gx);
                break;
            }
            case LayerKind::leaky_relu: {
                const T slope = static_cast<T>(L.slope);
                for (std::size_t j = 0; j < g.size(); ++j) g[j] *= x[j] > T{} ? T{1} : slope;
                break;
            }
            case LayerKind::tanh:
                for (std::size_t j = 0; j < g.size(); ++j) g[j] *= T{1} - y[j] * y[j];
                break;
            case LayerKind::reshape: g.reshape(x.shape()); break;
            case LayerKind::phase_shuffle:
                if (!tape.shifts[i].empty()) {
                    Tensor<T> gx;
                    shuffle_apply(g, tape.shifts[i], true, gx);
                    g = std::move(gx);
                }
                break;
        }
    }
    return g;
}

template <typename T>
DualTape<T> Network<T>::forward_tangent(const Tensor<T>& input, const Tensor<T>& tangent,
                                        const ForwardOptions& options) const {
    check_input(input);
    if (tangent.shape() != input.shape()) throw UsageError("forward_tangent: tangent shape mismatch");
    DualTape<T> dual;
    dual.primal = forward(input, options);
    dual.tangents.reserve(layers_.size() + 1);
    dual.tangents.push_back(tangent);
    const std::size_t batch = input.dim(0);
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const auto& L = layers_[i];
        const auto& x = dual.primal.activations[i];
        const auto& y = dual.primal.activations[i + 1];
        const auto& tx = dual.tangents[i];
        Tensor<T> ty;
        switch (L.kind) {
            case LayerKind::dense:
            case LayerKind::conv1d:
            case LayerKind::conv1d_transpose: {
                const auto p = static_cast<std::size_t>(param_index_[i]);
                linear_apply<T>(L, shapes_[i], shapes_[i + 1], params_[p], nullptr, tx, ty);
                break;
            }
            case LayerKind::leaky_relu: {
                ty = tx;
                const T slope = static_cast<T>(L.slope);
                for (std::size_t j = 0; j < ty.size(); ++j) ty[j] *= x[j] > T{} ? T{1} : slope;
                break;
            }
            case LayerKind::tanh:
                ty = tx;
                for (std::size_t j = 0; j < ty.size(); ++j) ty[j] *= T{1} - y[j] * y[j];
                break;
            case LayerKind::reshape:
                ty = tx;
                ty.reshape({batch, shapes_[i + 1].channels, shapes_[i + 1].length});
                break;
            case LayerKind::phase_shuffle:
                if (!dual.primal.shifts[i].empty()) shuffle_apply(tx, dual.primal.shifts[i], false, ty);
                else ty = tx;
                break;
        }
        dual.tangents.push_back(std::move(ty));
    }
    return dual;
}

template <typename T>
Tensor<T> Network<T>::backward_tangent(const DualTape<T>& tape, const Tensor<T>& grad_output,
                                       const Tensor<T>& grad_tangent, Gradients<T>& grads) const {
    if (!tape.recorded()) throw UsageError("backward_tangent called before forward_tangent (empty tape)");
    if (grad_output.shape() != tape.primal.output().shape() || grad_tangent.shape() != tape.tangent_output().shape())
        throw UsageError("backward_tangent: gradient shape mismatch");
    if (grads.size() != params_.size()) throw UsageError("backward_tangent: gradient buffer mismatch");
    Tensor<T> g = grad_output;
    Tensor<T> gt = grad_tangent;
    for (std::size_t i = layers_.size(); i-- > 0;) {
        const auto& L = layers_[i];
        const auto& x = tape.primal.activations[i];
        const auto& y = tape.primal.activations[i + 1];
        const auto& tx = tape.tangents[i];
        switch (L.kind) {
            case LayerKind::dense:
            case LayerKind::conv1d:
            case LayerKind::conv1d_transpose: {
                const auto p = static_cast<std::size_t>(param_index_[i]);
                Tensor<T> gx(x.shape());
                Tensor<T> gtx(x.shape());
                linear_adjoint(L, shapes_[i], shapes_[i + 1], params_[p], x, g, &gx, &grads[p], &grads[p + 1]);
                linear_adjoint<T>(L, shapes_[i], shapes_[i + 1], params_[p], tx, gt, &gtx, &grads[p], nullptr);
                g = std::move(gx);
                gt = std::move(gtx);
                break;
            }
            case LayerKind::leaky_relu: {
                const T slope = static_cast<T>(L.slope);
                for (std::size_t j = 0; j < g.size(); ++j) {
                    const T d = x[j] > T{} ? T{1} : slope;
                    g[j] *= d;
                    gt[j] *= d;
                }
                break;
            }
            case LayerKind::tanh:
                for (std::size_t j = 0; j < g.size(); ++j) {
                    const T d = T{1} - y[j] * y[j];
                    g[j] = d * g[j] - T{2} * y[j] * d * tx[j] * gt[j];
                    gt[j] *= d;
                }
                break;
            case LayerKind::reshape:
                g.reshape(x.shape());
                gt.reshape(x.shape());
                break;
            case LayerKind::phase_shuffle:
                if (!tape.primal.shifts[i].empty()) {
                    Tensor<T> a, b;
                    shuffle_apply(g, tape.primal.shifts[i], true, a);
                    shuffle_apply(gt, tape.primal.shifts[i], true, b);
                    g = std::move(a);
                    gt = std::move(b);
                }
                break;
        }
    }
    // The input tangent is a free direction; only the primal input gradient
    // is meaningful to callers.
    return g;
}

template class Network<float>;
template class Network<double>;

template Tensor<float> conv1d_forward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>*, std::size_t,
                                      std::size_t);
template Tensor<double> conv1d_forward(const Tensor<double>&, const Tensor<double>&, const Tensor<double>*,
                                       std::size_t, std::size_t);
template Tensor<float> conv1d_transpose_forward(const Tensor<float>&, const Tensor<float>&, const Tensor<float>*,
                                                std::size_t, std::size_t);
template Tensor<double> conv1d_transpose_forward(const Tensor<double>&, const Tensor<double>&,
                                                 const Tensor<double>*, std::size_t, std::size_t);
template Tensor<float> phase_shuffle(const Tensor<float>&, const std::vector<int>&);
template Tensor<double> phase_shuffle(const Tensor<double>&, const std::vector<int>&);
template Tensor<float> phase_shuffle(const Tensor<float>&, std::size_t, std::uint64_t);
template Tensor<double> phase_shuffle(const Tensor<double>&, std::size_t, std::uint64_t);

}  // namespace nasalgan::nn
