#include "nasalgan/probe/sources.hpp"

#include "nasalgan/ciwgan/model.hpp"
#include "nasalgan/error.hpp"

namespace nasalgan::probe {

GeneratorSource::GeneratorSource(const nn::Network<float>& generator, std::size_t n_phi, int sample_rate, std::string id)
    : generator_(generator), n_phi_(n_phi), rate_(sample_rate), id_(std::move(id)) {
    const std::size_t total = generator.input_shape().channels;
    if (n_phi == 0 || n_phi >= total)
        throw UsageError("generator input of " + std::to_string(total) + " cannot hold " + std::to_string(n_phi) +
                         " categories plus z");
    n_z_ = total - n_phi;
}

std::vector<audio::AudioClip> GeneratorSource::generate(const std::vector<ciwgan::LatentCode>& codes) const {
    return ciwgan::generate(generator_, codes, rate_);
}

DetectorLabeler::DetectorLabeler(const detector::DetectorModel& model, std::string id) : model_(model), id_(std::move(id)) {}

std::vector<detector::TokenLabel> DetectorLabeler::label(const std::vector<audio::AudioClip>& clips) const {
    std::vector<detector::TokenLabel> out;
    out.reserve(clips.size());
    for (const auto& c : clips) out.push_back(detector::label_token(model_, c));
    return out;
}

void check_compatible(const ClipSource& source, const TokenLabeler& labeler) {
    if (source.sample_rate() != labeler.sample_rate())
        throw UsageError("generator produces " + std::to_string(source.sample_rate()) + " Hz audio but the detector expects " +
                         std::to_string(labeler.sample_rate()) + " Hz");
}

}  // namespace nasalgan::probe
