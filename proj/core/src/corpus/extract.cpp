#include "nasalgan/corpus/extract.hpp"

#include "nasalgan/error.hpp"

namespace nasalgan::corpus {
namespace {

bool is_closure_of(const std::string& closure, const std::string& release) {
    return closure.size() == release.size() + 2 && closure.compare(0, release.size(), release) == 0 &&
           closure.compare(release.size(), 2, "cl") == 0;
}

// Number of vowel nuclei: maximal runs of consecutive vowel-class phones.
std::size_t count_nuclei(const UtteranceAlignment& u, const WordSegment& w, const PhoneClassMap& classes) {
    std::size_t n = 0;
    bool in_run = false;
    for (std::size_t i = w.first_phone; i < w.last_phone; ++i) {
        const bool v = classes.is_vowel(u.phones[i].label);
        if (v && !in_run) ++n;
        in_run = v;
    }
    return n;
}

}  // namespace

std::string_view to_string(WordPosition p) noexcept {
    return p == WordPosition::monosyllabic ? "monosyllabic" : "final_syllable";
}

ExtractionResult extract_tokens(const UtteranceAlignment& u, const PhoneClassMap& classes,
                                const audio::AudioClip& audio, const ExtractConfig& config) {
    int factor = 1;
    if (config.target_rate > 0 && config.target_rate != audio.sample_rate()) {
        if (audio.sample_rate() % config.target_rate != 0)
            throw UsageError("extract_tokens: source rate " + std::to_string(audio.sample_rate()) +
                             " is not a multiple of target rate " + std::to_string(config.target_rate));
        factor = audio.sample_rate() / config.target_rate;
    }

    ExtractionResult result;
    for (std::size_t wi = 0; wi < u.words.size(); ++wi) {
        const auto& w = u.words[wi];
        if (w.phone_count() < 2) continue;
        std::size_t coda_last = w.last_phone - 1;
        std::size_t coda_first = coda_last;
        if (coda_first > w.first_phone &&
            is_closure_of(u.phones[coda_first - 1].label, u.phones[coda_last].label))
            --coda_first;
        if (coda_first == w.first_phone) continue;
        const auto& vowel = u.phones[coda_first - 1];
        const auto& coda = u.phones[coda_last];
        const auto cls = classes.classify(vowel.label, coda.label);
        if (!cls) continue;

        const std::size_t begin = vowel.start;
        const std::size_t end = coda.end;
        if (end > audio.size()) {
            result.skipped.push_back({u.id, wi, "span exceeds utterance audio"});
            continue;
        }
        const std::size_t out_len = (end - begin + factor - 1) / factor;
        if (out_len > config.fixed_len) {
            result.skipped.push_back({u.id, wi,
                                      "span of " + std::to_string(out_len) +
                                          " samples exceeds fixed length " +
                                          std::to_string(config.fixed_len)});
            continue;
        }

        std::vector<float> span(audio.samples().begin() + static_cast<std::ptrdiff_t>(begin),
                                audio.samples().begin() + static_cast<std::ptrdiff_t>(end));
        audio::AudioClip clip(std::move(span), audio.sample_rate());
        if (factor > 1) clip = audio::decimate(clip, factor);

        SyllableToken tok;
        tok.cls = *cls;
        tok.audio = clip.slice_padded(0, clip.size(), config.fixed_len);
        tok.source_utterance = u.id;
        tok.word_index = wi;
        tok.word_position = count_nuclei(u, w, classes) <= 1 ? WordPosition::monosyllabic
                                                             : WordPosition::final_syllable;
        tok.vowel = vowel.label;
        tok.coda = coda.label;
        tok.span_begin = begin;
        tok.span_end = end;
        result.tokens.push_back(std::move(tok));
    }
    return result;
}

}  // namespace nasalgan::corpus
