#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "nasalgan/audio/audio_clip.hpp"
#include "nasalgan/ciwgan/config.hpp"
#include "nasalgan/ciwgan/latent.hpp"
#include "nasalgan/nn/network.hpp"

namespace nasalgan::ciwgan {

/// Generator, Wasserstein critic and Q-network. The Q-network has the critic
/// topology with an n_phi-way head.
struct CiwganModel {
    CiwganConfig config;
    nn::Network<float> generator;
    nn::Network<float> critic;
    nn::Network<float> qnet;

    /// Builds and initializes all three networks from config.seed.
    static CiwganModel create(const CiwganConfig& config);

    friend bool operator==(const CiwganModel&, const CiwganModel&) = default;
};

/// Audio for one code: exactly audio_len samples in [-1, 1]. Throws
/// UsageError when the code size does not match the generator input.
audio::AudioClip generate(const nn::Network<float>& generator, const LatentCode& code, int sample_rate);

/// Batched generation; clips[i] belongs to codes[i].
std::vector<audio::AudioClip> generate(const nn::Network<float>& generator, const std::vector<LatentCode>& codes,
                                       int sample_rate);

/// n fresh codes from `seed` with their clips.
std::vector<std::pair<LatentCode, audio::AudioClip>> generate_batch(const CiwganModel& model, std::size_t n,
                                                                    std::uint64_t seed);

/// Q-network argmax category for each clip.
std::vector<std::size_t> predict_category(const nn::Network<float>& qnet, const std::vector<audio::AudioClip>& clips);

/// Fraction of n generated clips whose Q-network argmax equals the code's category.
double q_accuracy(const CiwganModel& model, std::size_t n, std::uint64_t seed);

/// Mean Q cross-entropy over n generated clips.
double q_loss(const CiwganModel& model, std::size_t n, std::uint64_t seed);

/// Stacks clips as [batch, 1, length].
nn::Tensor<float> clips_to_tensor(const std::vector<audio::AudioClip>& clips);

}  // namespace nasalgan::ciwgan
