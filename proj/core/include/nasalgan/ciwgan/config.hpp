#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nasalgan/keyvalue.hpp"
#include "nasalgan/nn/adam.hpp"
#include "nasalgan/nn/layers.hpp"

namespace nasalgan::ciwgan {

/// Architecture and training hyperparameters. Defaults follow the WaveGAN
/// training convention, scaled to 4096-sample tokens at 8 kHz.
struct CiwganConfig {
    std::size_t n_phi = 3;
    std::size_t n_z = 97;
    std::size_t audio_len = 4096;
    int sample_rate = 8000;

    /// Generator channels entering each transposed conv; the last one maps to
    /// a single output channel. Critic channels are the outputs of each conv.
    std::vector<std::size_t> generator_channels{32, 32, 16, 8, 4};
    std::vector<std::size_t> critic_channels{4, 8, 16, 32, 32};
    std::size_t kernel = 24;
    std::size_t stride = 4;
    double leaky_slope = 0.2;
    std::size_t phase_shuffle = 2;

    std::size_t batch_size = 16;
    double gp_lambda = 10.0;
    nn::AdamConfig adam{};
    std::size_t critic_iters = 5;
    double q_weight = 1.0;

    std::size_t epochs = 1;
    std::size_t checkpoint_interval = 500;  // generator steps; 0 disables
    std::size_t report_interval = 50;       // generator steps
    std::uint64_t seed = 0;

    /// Samples at the dense projection: audio_len / stride^layers.
    std::size_t base_length() const;
    std::size_t padding() const { return (kernel - stride) / 2; }
    std::size_t latent_size() const { return n_phi + n_z; }

    /// Throws UsageError on inconsistent settings.
    void validate() const;

    KeyValueFile to_keyvalue() const;
    /// Unknown keys are ignored so sidecars may carry extra fields.
    static CiwganConfig from_keyvalue(const KeyValueFile& kv);

    friend bool operator==(const CiwganConfig&, const CiwganConfig&) = default;
};

std::vector<nn::LayerSpec> generator_layers(const CiwganConfig& config);
std::vector<nn::LayerSpec> critic_layers(const CiwganConfig& config, std::size_t outputs);

std::string join_sizes(const std::vector<std::size_t>& v);
std::vector<std::size_t> parse_sizes(const std::string& s);

}  // namespace nasalgan::ciwgan
