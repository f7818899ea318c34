#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <map>
#include <vector>

#include "nasalgan/audio/audio_clip.hpp"
#include "nasalgan/audio/synth.hpp"
#include "nasalgan/syllable_class.hpp"

namespace nasalgan::detector {

enum class FrameClass : std::uint8_t { oral_vowel = 0, nasal_vowel = 1, nasal_consonant = 2, other = 3 };

inline constexpr std::size_t kFrameClassCount = 4;

std::string_view to_string(FrameClass c) noexcept;

/// Frame k is centered on sample k*hop; centers run while they lie inside the clip.
std::vector<std::size_t> frame_centers(std::size_t clip_length, std::size_t hop);

/// `window` samples centered on `center`, zero-extended past either edge.
/// `window` must be odd.
void extract_window(const audio::AudioClip& clip, std::size_t center, std::size_t window, float* out);

/// RMS of the hop-length frame [center - hop/2, center + hop/2) (zero-extended).
double frame_rms(const audio::AudioClip& clip, std::size_t center, std::size_t hop);

/// Ground-truth label of one sample of a synthetic token.
FrameClass sample_label(const audio::SyllableLayout& layout, SyllableClass cls, std::size_t sample);

/// A rendered token with its class and segment boundaries.
struct SyntheticToken {
    audio::AudioClip clip;
    SyllableClass cls = SyllableClass::VT;
    audio::SyllableLayout layout;
};

/// `per_class` tokens of every class in `classes`, interleaved by class.
std::vector<SyntheticToken> synth_corpus(const std::vector<SyllableClass>& classes, std::size_t per_class,
                                         std::uint64_t seed, int sample_rate = 8000, std::size_t length = 4096,
                                         const audio::SynthVariation& variation = {});

/// counts[c] tokens of each class. Token i of class c is the same clip the
/// per_class `synth_corpus` produces, so the two agree on shared classes.
std::vector<SyntheticToken> synth_corpus_counts(const std::map<SyllableClass, std::size_t>& counts, std::uint64_t seed,
                                                int sample_rate = 8000, std::size_t length = 4096,
                                                const audio::SynthVariation& variation = {});

/// Flattened windows with their center labels.
struct LabeledFrames {
    std::size_t window = 0;
    std::vector<float> samples;  // size() * window values
    std::vector<FrameClass> labels;
    std::vector<bool> silent;

    std::size_t size() const noexcept { return labels.size(); }
    const float* window_data(std::size_t i) const { return samples.data() + i * window; }
};

/// Every frame of every token, labeled from the synthesis layout.
LabeledFrames collect_frames(const std::vector<SyntheticToken>& tokens, std::size_t window, std::size_t hop,
                             double silence_rms);

}  // namespace nasalgan::detector
