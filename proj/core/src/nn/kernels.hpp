#pragma once

// Inner loops shared by the layer implementations. All routines work on one
// example at a time with raw row-major buffers.

#include <algorithm>
#include <cstddef>

namespace nasalgan::nn::kernels {

// Eight independent partial sums so the compiler can vectorize without
// reassociating; the summation order is fixed, hence deterministic.
template <typename T>
inline T dot(const T* __restrict a, const T* __restrict b, std::size_t n) {
    T acc[8] = {};
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8)
        for (std::size_t u = 0; u < 8; ++u) acc[u] += a[j + u] * b[j + u];
    T tail{};
    for (; j < n; ++j) tail += a[j] * b[j];
    return ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail;
}

template <typename T>
inline void axpy(T alpha, const T* __restrict x, T* __restrict y, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) y[j] += alpha * x[j];
}

// Conv geometry: a "long" signal of `long_len` samples and a "short" one of
// `short_len` positions, position i covering long samples i*stride - padding + k.
struct ConvGeometry {
    std::size_t channels;  // channels of the long signal
    std::size_t long_len;
    std::size_t short_len;
    std::size_t kernel;
    std::size_t stride;
    std::size_t padding;

    std::size_t row() const { return channels * kernel; }
};

// patches[i][c*K + k] = x[c][i*s - p + k] (zero outside).
template <typename T>
void im2col(const T* x, const ConvGeometry& g, T* patches) {
    const std::size_t K = g.kernel;
    for (std::size_t i = 0; i < g.short_len; ++i) {
        T* row = patches + i * g.row();
        const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(i * g.stride) - static_cast<std::ptrdiff_t>(g.padding);
        const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, -base);
        const std::ptrdiff_t k_hi =
            std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(K), static_cast<std::ptrdiff_t>(g.long_len) - base);
        for (std::size_t c = 0; c < g.channels; ++c) {
            T* r = row + c * K;
            const T* xc = x + c * g.long_len;
            for (std::ptrdiff_t k = 0; k < k_lo; ++k) r[k] = T{};
            for (std::ptrdiff_t k = k_lo; k < k_hi; ++k) r[k] = xc[base + k];
            for (std::ptrdiff_t k = std::max(k_hi, k_lo); k < static_cast<std::ptrdiff_t>(K); ++k) r[k] = T{};
        }
    }
}

// Adjoint of im2col: x[c][i*s - p + k] += patches[i][c*K + k].
template <typename T>
void col2im(const T* patches, const ConvGeometry& g, T* x) {
    const std::size_t K = g.kernel;
    for (std::size_t i = 0; i < g.short_len; ++i) {
        const T* row = patches + i * g.row();
        const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(i * g.stride) - static_cast<std::ptrdiff_t>(g.padding);
        const std::ptrdiff_t k_lo = std::max<std::ptrdiff_t>(0, -base);
        const std::ptrdiff_t k_hi =
            std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(K), static_cast<std::ptrdiff_t>(g.long_len) - base);
        for (std::size_t c = 0; c < g.channels; ++c) {
            const T* r = row + c * K;
            T* xc = x + c * g.long_len;
            for (std::ptrdiff_t k = k_lo; k < k_hi; ++k) xc[base + k] += r[k];
        }
    }
}

}  // namespace nasalgan::nn::kernels
