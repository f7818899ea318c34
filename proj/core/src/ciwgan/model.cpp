#include "nasalgan/ciwgan/model.hpp"

#include <algorithm>

#include "nasalgan/error.hpp"
#include "nasalgan/nn/losses.hpp"

namespace nasalgan::ciwgan {
namespace {
constexpr std::size_t kChunk = 64;
}

CiwganModel CiwganModel::create(const CiwganConfig& config) {
    config.validate();
    CiwganModel m;
    m.config = config;
    m.generator = nn::Network<float>({config.latent_size(), 1}, generator_layers(config));
    m.critic = nn::Network<float>({1, config.audio_len}, critic_layers(config, 1));
    m.qnet = nn::Network<float>({1, config.audio_len}, critic_layers(config, config.n_phi));
    m.generator.initialize(derive_seed(config.seed, "generator"));
    m.critic.initialize(derive_seed(config.seed, "critic"));
    m.qnet.initialize(derive_seed(config.seed, "qnet"));
    return m;
}

std::vector<audio::AudioClip> generate(const nn::Network<float>& generator, const std::vector<LatentCode>& codes,
                                       int sample_rate) {
    std::vector<audio::AudioClip> clips;
    clips.reserve(codes.size());
    for (const auto& c : codes)
        if (c.size() != generator.input_shape().channels)
            throw UsageError("generate: latent code has " + std::to_string(c.size()) + " dims, generator expects " +
                             std::to_string(generator.input_shape().channels));
    for (std::size_t start = 0; start < codes.size(); start += kChunk) {
        const std::size_t end = std::min(codes.size(), start + kChunk);
        const std::vector<LatentCode> part(codes.begin() + static_cast<std::ptrdiff_t>(start),
                                           codes.begin() + static_cast<std::ptrdiff_t>(end));
        const auto out = generator.predict(to_tensor(part));
        const std::size_t len = out.dim(2);
        for (std::size_t b = 0; b < part.size(); ++b)
            clips.emplace_back(std::vector<float>(out.data() + b * len, out.data() + (b + 1) * len), sample_rate);
    }
    return clips;
}

audio::AudioClip generate(const nn::Network<float>& generator, const LatentCode& code, int sample_rate) {
    return generate(generator, std::vector<LatentCode>{code}, sample_rate).front();
}

std::vector<std::pair<LatentCode, audio::AudioClip>> generate_batch(const CiwganModel& model, std::size_t n,
                                                                    std::uint64_t seed) {
    if (n == 0) throw UsageError("generate_batch: n must be at least 1");
    LatentSampler sampler(model.config.n_phi, model.config.n_z, seed);
    auto codes = sampler.take(n);
    auto clips = generate(model.generator, codes, model.config.sample_rate);
    std::vector<std::pair<LatentCode, audio::AudioClip>> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(std::move(codes[i]), std::move(clips[i]));
    return out;
}

nn::Tensor<float> clips_to_tensor(const std::vector<audio::AudioClip>& clips) {
    if (clips.empty()) throw UsageError("clips_to_tensor: no clips");
    const std::size_t len = clips.front().size();
    nn::Tensor<float> t({clips.size(), 1, len});
    for (std::size_t b = 0; b < clips.size(); ++b) {
        if (clips[b].size() != len) throw UsageError("clips_to_tensor: clips differ in length");
        std::copy(clips[b].samples().begin(), clips[b].samples().end(), t.data() + b * len);
    }
    return t;
}

std::vector<std::size_t> predict_category(const nn::Network<float>& qnet, const std::vector<audio::AudioClip>& clips) {
    std::vector<std::size_t> out;
    for (std::size_t start = 0; start < clips.size(); start += kChunk) {
        const std::size_t end = std::min(clips.size(), start + kChunk);
        const std::vector<audio::AudioClip> part(clips.begin() + static_cast<std::ptrdiff_t>(start),
                                                 clips.begin() + static_cast<std::ptrdiff_t>(end));
        const auto logits = qnet.predict(clips_to_tensor(part));
        const std::size_t k = logits.dim(1);
        for (std::size_t b = 0; b < part.size(); ++b) {
            const float* row = logits.data() + b * k;
            out.push_back(static_cast<std::size_t>(std::max_element(row, row + k) - row));
        }
    }
    return out;
}

double q_accuracy(const CiwganModel& model, std::size_t n, std::uint64_t seed) {
    const auto batch = generate_batch(model, n, seed);
    std::vector<audio::AudioClip> clips;
    for (const auto& [code, clip] : batch) clips.push_back(clip);
    const auto pred = predict_category(model.qnet, clips);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += pred[i] == batch[i].first.category();
    return static_cast<double>(hits) / static_cast<double>(n);
}

double q_loss(const CiwganModel& model, std::size_t n, std::uint64_t seed) {
    const auto batch = generate_batch(model, n, seed);
    std::vector<audio::AudioClip> clips;
    std::vector<std::size_t> targets;
    for (const auto& [code, clip] : batch) {
        clips.push_back(clip);
        targets.push_back(code.category());
    }
    const auto logits = model.qnet.predict(clips_to_tensor(clips));
    return nn::categorical_cross_entropy(logits, targets).loss;
}

}  // namespace nasalgan::ciwgan
