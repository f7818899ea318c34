#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nasalgan/audio/audio_clip.hpp"
#include "nasalgan/ciwgan/latent.hpp"
#include "nasalgan/detector/detector.hpp"
#include "nasalgan/nn/network.hpp"

namespace nasalgan::probe {

/// Anything that turns latent codes into audio. Implementations must be
/// deterministic and must not depend on how codes are batched.
class ClipSource {
public:
    virtual ~ClipSource() = default;
    virtual std::size_t n_phi() const = 0;
    virtual std::size_t n_z() const = 0;
    virtual int sample_rate() const = 0;
    virtual std::string id() const = 0;
    virtual std::vector<audio::AudioClip> generate(const std::vector<ciwgan::LatentCode>& codes) const = 0;
};

/// Anything that turns audio into nasality verdicts.
class TokenLabeler {
public:
    virtual ~TokenLabeler() = default;
    virtual int sample_rate() const = 0;
    virtual std::string id() const = 0;
    virtual std::vector<detector::TokenLabel> label(const std::vector<audio::AudioClip>& clips) const = 0;
};

/// A trained ciwGAN generator.
class GeneratorSource final : public ClipSource {
public:
    GeneratorSource(const nn::Network<float>& generator, std::size_t n_phi, int sample_rate, std::string id);
    std::size_t n_phi() const override { return n_phi_; }
    std::size_t n_z() const override { return n_z_; }
    int sample_rate() const override { return rate_; }
    std::string id() const override { return id_; }
    std::vector<audio::AudioClip> generate(const std::vector<ciwgan::LatentCode>& codes) const override;

private:
    const nn::Network<float>& generator_;
    std::size_t n_phi_;
    std::size_t n_z_;
    int rate_;
    std::string id_;
};

class DetectorLabeler final : public TokenLabeler {
public:
    DetectorLabeler(const detector::DetectorModel& model, std::string id);
    int sample_rate() const override { return model_.config.sample_rate; }
    std::string id() const override { return id_; }
    std::vector<detector::TokenLabel> label(const std::vector<audio::AudioClip>& clips) const override;

private:
    const detector::DetectorModel& model_;
    std::string id_;
};

/// Throws UsageError when source and labeler disagree on sample rate.
void check_compatible(const ClipSource& source, const TokenLabeler& labeler);

}  // namespace nasalgan::probe
