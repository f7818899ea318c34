#include "nasalgan/detector/frames.hpp"

#include <algorithm>
#include <cmath>

#include "nasalgan/error.hpp"
#include "nasalgan/random.hpp"

namespace nasalgan::detector {

std::string_view to_string(FrameClass c) noexcept {
    switch (c) {
        case FrameClass::oral_vowel: return "oral_vowel";
        case FrameClass::nasal_vowel: return "nasal_vowel";
        case FrameClass::nasal_consonant: return "nasal_consonant";
        case FrameClass::other: return "other";
    }
    return "?";
}

std::vector<std::size_t> frame_centers(std::size_t clip_length, std::size_t hop) {
    if (hop == 0) throw UsageError("frame hop must be positive");
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < clip_length; c += hop) out.push_back(c);
    return out;
}

void extract_window(const audio::AudioClip& clip, std::size_t center, std::size_t window, float* out) {
    if (window % 2 == 0) throw UsageError("window length must be odd, got " + std::to_string(window));
    const auto& s = clip.samples();
    const auto half = static_cast<std::ptrdiff_t>(window / 2);
    const auto n = static_cast<std::ptrdiff_t>(s.size());
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(window); ++i) {
        const std::ptrdiff_t k = static_cast<std::ptrdiff_t>(center) - half + i;
        out[i] = (k >= 0 && k < n) ? s[static_cast<std::size_t>(k)] : 0.0f;
    }
}

double frame_rms(const audio::AudioClip& clip, std::size_t center, std::size_t hop) {
    const auto& s = clip.samples();
    const auto begin = static_cast<std::ptrdiff_t>(center) - static_cast<std::ptrdiff_t>(hop / 2);
    double acc = 0;
    for (std::size_t i = 0; i < hop; ++i) {
        const std::ptrdiff_t k = begin + static_cast<std::ptrdiff_t>(i);
        if (k >= 0 && k < static_cast<std::ptrdiff_t>(s.size())) {
            const double v = s[static_cast<std::size_t>(k)];
            acc += v * v;
        }
    }
    return std::sqrt(acc / static_cast<double>(hop));
}

FrameClass sample_label(const audio::SyllableLayout& layout, SyllableClass cls, std::size_t sample) {
    if (sample >= layout.vowel_begin && sample < layout.vowel_end)
        return has_nasal_vowel(cls) ? FrameClass::nasal_vowel : FrameClass::oral_vowel;
    if (sample >= layout.coda_begin && sample < layout.coda_end && has_nasal_coda(cls))
        return FrameClass::nasal_consonant;
    return FrameClass::other;
}

std::vector<SyntheticToken> synth_corpus_counts(const std::map<SyllableClass, std::size_t>& counts, std::uint64_t seed,
                                                int sample_rate, std::size_t length, const audio::SynthVariation& variation) {
    std::size_t most = 0, total = 0;
    for (const auto& [cls, n] : counts) {
        most = std::max(most, n);
        total += n;
    }
    std::vector<SyntheticToken> out;
    out.reserve(total);
    for (std::size_t i = 0; i < most; ++i) {
        for (const auto& [cls, n] : counts) {
            if (i >= n) continue;
            const std::uint64_t token_seed = derive_seed(seed, i, static_cast<std::uint64_t>(cls));
            Rng rng(token_seed);
            const auto spec = audio::random_syllable_spec(cls, rng, variation);
            auto r = audio::synth_syllable(spec, sample_rate, length, derive_seed(token_seed, "noise"));
            out.push_back({std::move(r.clip), cls, r.layout});
        }
    }
    return out;
}

std::vector<SyntheticToken> synth_corpus(const std::vector<SyllableClass>& classes, std::size_t per_class,
                                         std::uint64_t seed, int sample_rate, std::size_t length,
                                         const audio::SynthVariation& variation) {
    std::vector<SyntheticToken> out;
    out.reserve(classes.size() * per_class);
    for (std::size_t i = 0; i < per_class; ++i) {
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const std::uint64_t token_seed = derive_seed(seed, i, static_cast<std::uint64_t>(classes[c]));
            Rng rng(token_seed);
            const auto spec = audio::random_syllable_spec(classes[c], rng, variation);
            auto r = audio::synth_syllable(spec, sample_rate, length, derive_seed(token_seed, "noise"));
            out.push_back({std::move(r.clip), classes[c], r.layout});
        }
    }
    return out;
}

LabeledFrames collect_frames(const std::vector<SyntheticToken>& tokens, std::size_t window, std::size_t hop,
                             double silence_rms) {
    LabeledFrames f;
    f.window = window;
    for (const auto& t : tokens) {
        for (std::size_t c : frame_centers(t.clip.size(), hop)) {
            const std::size_t at = f.samples.size();
            f.samples.resize(at + window);
            extract_window(t.clip, c, window, f.samples.data() + at);
            f.labels.push_back(sample_label(t.layout, t.cls, c));
            f.silent.push_back(frame_rms(t.clip, c, hop) < silence_rms);
        }
    }
    return f;
}

}  // namespace nasalgan::detector
