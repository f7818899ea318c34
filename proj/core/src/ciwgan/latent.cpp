#include "nasalgan/ciwgan/latent.hpp"

#include "nasalgan/error.hpp"

namespace nasalgan::ciwgan {

std::size_t LatentCode::category() const {
    std::size_t hot = phi.size(), ones = 0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (phi[i] == 1.0f) {
            hot = i;
            ++ones;
        } else if (phi[i] != 0.0f) {
            ones = 2;
        }
    }
    if (ones != 1) throw UsageError("latent code: phi is not one-hot");
    return hot;
}

LatentCode make_code(std::size_t n_phi, std::size_t category, std::vector<float> z) {
    if (category >= n_phi) throw UsageError("latent code: category out of range");
    LatentCode c;
    c.phi.assign(n_phi, 0.0f);
    c.phi[category] = 1.0f;
    c.z = std::move(z);
    return c;
}

LatentCode sample_latent(std::size_t n_phi, std::size_t n_z, Rng& rng) {
    if (n_phi == 0 || n_z == 0) throw UsageError("sample_latent: sizes must be positive");
    const auto cat = static_cast<std::size_t>(rng.below(n_phi));
    std::vector<float> z(n_z);
    for (auto& v : z) {
        // Rounding to float may land on +-1; redraw to keep the interval open.
        do {
            v = static_cast<float>(rng.uniform(-1.0, 1.0));
        } while (v <= -1.0f || v >= 1.0f);
    }
    return make_code(n_phi, cat, std::move(z));
}

LatentSampler::LatentSampler(std::size_t n_phi, std::size_t n_z, std::uint64_t seed)
    : n_phi_(n_phi), n_z_(n_z), rng_(seed) {
    if (n_phi == 0 || n_z == 0) throw UsageError("LatentSampler: sizes must be positive");
}

std::vector<LatentCode> LatentSampler::take(std::size_t n) {
    std::vector<LatentCode> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(next());
    return out;
}

nn::Tensor<float> to_tensor(const std::vector<LatentCode>& codes) {
    if (codes.empty()) throw UsageError("to_tensor: no codes");
    const std::size_t d = codes.front().size();
    nn::Tensor<float> t({codes.size(), d, 1});
    for (std::size_t b = 0; b < codes.size(); ++b) {
        if (codes[b].size() != d) throw UsageError("to_tensor: codes differ in size");
        std::copy(codes[b].phi.begin(), codes[b].phi.end(), t.data() + b * d);
        std::copy(codes[b].z.begin(), codes[b].z.end(), t.data() + b * d + codes[b].phi.size());
    }
    return t;
}

}  // namespace nasalgan::ciwgan
