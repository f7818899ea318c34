#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nasalgan/audio/audio_clip.hpp"
#include "nasalgan/corpus/alignment.hpp"
#include "nasalgan/corpus/phone_classes.hpp"
#include "nasalgan/syllable_class.hpp"

namespace nasalgan::corpus {

enum class WordPosition { monosyllabic, final_syllable };

std::string_view to_string(WordPosition p) noexcept;

struct SyllableToken {
    SyllableClass cls = SyllableClass::VT;
    audio::AudioClip audio;
    std::string source_utterance;
    std::size_t word_index = 0;
    WordPosition word_position = WordPosition::monosyllabic;
    std::string vowel;
    std::string coda;
    /// Matched span in source samples, [span_begin, span_end).
    std::size_t span_begin = 0;
    std::size_t span_end = 0;
};

struct SkippedToken {
    std::string source_utterance;
    std::size_t word_index = 0;
    std::string reason;
};

struct ExtractConfig {
    /// Token length after padding, in samples at the output rate.
    std::size_t fixed_len = 4096;
    /// Output sample rate; 0 keeps the source rate. Otherwise the source
    /// rate must be an integer multiple of it.
    int target_rate = 0;
};

struct ExtractionResult {
    std::vector<SyllableToken> tokens;
    std::vector<SkippedToken> skipped;
};

/// Examines each word's final vowel + coda. A word-final closure/release pair
/// such as `dcl d` counts as a single stop. Emits at most one token per word;
/// spans longer than fixed_len are skipped and reported, never truncated.
ExtractionResult extract_tokens(const UtteranceAlignment& utterance, const PhoneClassMap& classes,
                                const audio::AudioClip& audio, const ExtractConfig& config);

}  // namespace nasalgan::corpus
