#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "nasalgan/audio/audio_clip.hpp"

namespace nasalgan::audio {

enum class CodaKind { stop, nasal };

/// Parameters of one synthetic vowel + coda syllable.
struct SyllableSpec {
    std::array<double, 3> vowel_formants{650.0, 1100.0, 2500.0};  // F1, F2, F3 in Hz
    bool vowel_nasal = false;
    CodaKind coda = CodaKind::stop;
    double f0 = 120.0;
    double vowel_duration = 0.2;  // seconds
    double coda_duration = 0.1;   // seconds

    /// Throws UsageError unless 0 < F1 < F2 < F3 < sample_rate/2 and durations > 0.
    void validate(int sample_rate) const;
};

/// Sample boundaries of the rendered segments (vowel first, then coda).
struct SyllableLayout {
    std::size_t vowel_begin = 0;
    std::size_t vowel_end = 0;
    std::size_t coda_begin = 0;
    std::size_t coda_end = 0;
    /// Start of the stop release burst; equals coda_end for nasal codas.
    std::size_t burst_begin = 0;
};

struct SynthResult {
    AudioClip clip;
    SyllableLayout layout;
};

inline constexpr double kNasalResonanceHz = 250.0;
inline constexpr float kSynthPeak = 0.9f;

/// Source-filter rendering: impulse train at f0 through parallel two-pole
/// resonators. Nasal vowels gain a ~250 Hz resonance and lose F1 amplitude;
/// nasal codas are a murmur dominated by that resonance; stop codas are
/// closure silence followed by a high-passed noise burst drawn from
/// `noise_seed`. Output is peak-normalized to 0.9 and zero-padded to
/// total_len samples.
SynthResult synth_syllable(const SyllableSpec& spec, int sample_rate, std::size_t total_len,
                           std::uint64_t noise_seed = 0);

/// Independent spectral labeling rule for synthetic tokens: a segment whose
/// dominant frequency is below 400 Hz is nasal.
inline constexpr double kNasalPeakThresholdHz = 400.0;

}  // namespace nasalgan::audio

#include "nasalgan/random.hpp"
#include "nasalgan/syllable_class.hpp"

namespace nasalgan::audio {

/// Per-token variability of the synthetic corpus, as fractional half-ranges.
struct SynthVariation {
    double formant_jitter = 0.08;
    double f0_jitter = 0.15;
    double duration_jitter = 0.20;
    double base_f0 = 120.0;
    double base_vowel_duration = 0.2;
    double base_coda_duration = 0.1;
};

/// Draws a jittered spec for `cls` from a small open-vowel inventory.
SyllableSpec random_syllable_spec(SyllableClass cls, Rng& rng, const SynthVariation& var = {});

}  // namespace nasalgan::audio
