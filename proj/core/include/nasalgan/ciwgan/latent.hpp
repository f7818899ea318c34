#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nasalgan/nn/tensor.hpp"
#include "nasalgan/random.hpp"

namespace nasalgan::ciwgan {

/// Generator input: a one-hot categorical part and a continuous part. During
/// training z is uniform on (-1, 1); probing may set components outside it.
struct LatentCode {
    std::vector<float> phi;
    std::vector<float> z;

    std::size_t size() const noexcept { return phi.size() + z.size(); }
    /// Index of the hot category. Throws UsageError if phi is not one-hot.
    std::size_t category() const;

    friend bool operator==(const LatentCode&, const LatentCode&) = default;
};

LatentCode make_code(std::size_t n_phi, std::size_t category, std::vector<float> z);

/// Uniform category, z i.i.d. uniform on the open interval (-1, 1).
LatentCode sample_latent(std::size_t n_phi, std::size_t n_z, Rng& rng);

/// Deterministic stream of latent codes from one seed.
class LatentSampler {
public:
    LatentSampler(std::size_t n_phi, std::size_t n_z, std::uint64_t seed);
    LatentCode next() { return sample_latent(n_phi_, n_z_, rng_); }
    std::vector<LatentCode> take(std::size_t n);

private:
    std::size_t n_phi_;
    std::size_t n_z_;
    Rng rng_;
};

/// Packs codes as generator input [batch, n_phi + n_z, 1] (phi first).
nn::Tensor<float> to_tensor(const std::vector<LatentCode>& codes);

}  // namespace nasalgan::ciwgan
