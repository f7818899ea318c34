#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nasalgan/corpus/extract.hpp"
#include "nasalgan/syllable_class.hpp"

namespace nasalgan::corpus {

struct ManifestEntry {
    std::string file;
    SyllableClass cls = SyllableClass::VT;
    std::string source;
    WordPosition word_position = WordPosition::monosyllabic;
    /// Vowel and coda phone labels; empty when unknown.
    std::string vowel;
    std::string coda;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    std::map<SyllableClass, std::size_t> counts() const;
};

/// CSV `file,class,source,word_position,vowel,coda`. The reader also accepts
/// the four-column form without vowel/coda.
void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
std::string manifest_to_csv(const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(std::string_view text);

struct BalanceResult {
    DatasetManifest manifest;
    /// target / available per class; > 1 means sampled with replacement.
    std::map<SyllableClass, double> oversampling;
};

/// Draws exactly targets[c] entries of each class c. The vowel filter is
/// applied first. A class with at least as many entries as its target is
/// sampled without replacement; otherwise every entry is kept once and the
/// remainder is drawn with replacement. Classes absent from `targets` are
/// dropped. Throws DataError if a targeted class has no source entries.
BalanceResult balance_dataset(const DatasetManifest& manifest,
                              const std::map<SyllableClass, std::size_t>& targets,
                              const std::optional<std::set<std::string>>& vowel_filter,
                              std::uint64_t seed);

}  // namespace nasalgan::corpus
