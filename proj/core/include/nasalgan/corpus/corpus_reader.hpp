#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "nasalgan/corpus/extract.hpp"
#include "nasalgan/corpus/manifest.hpp"

namespace nasalgan::corpus {

/// Result of running extraction over a whole corpus directory. tokens[i]
/// corresponds to manifest.entries[i].
struct CorpusExtraction {
    std::vector<SyllableToken> tokens;
    DatasetManifest manifest;
    std::vector<SkippedToken> skipped;
    std::vector<std::string> excluded_utterances;  // SA sentences
};

/// Reads either layout:
///  - TIMIT style: any `<id>.phn` with sibling `<id>.wrd` and `<id>.wav`
///    (searched recursively; id is the path relative to `dir`);
///  - aligner export: `alignment.csv` plus `<utterance>.wav` per utterance.
/// An optional `utterances.csv` (`utterance,flags`) marks SA sentences with
/// the flag `sa`; TIMIT file stems `sa<digit>` are flagged automatically.
/// Flagged utterances are never token sources. Manifest file names are
/// `tokens/tok_<n>.wav`.
CorpusExtraction extract_corpus(const std::filesystem::path& dir, const PhoneClassMap& classes,
                                const ExtractConfig& config);

/// Writes each token WAV under out_dir and `manifest.csv`.
void write_extraction(const CorpusExtraction& extraction, const std::filesystem::path& out_dir);

}  // namespace nasalgan::corpus
