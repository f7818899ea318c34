#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "nasalgan/syllable_class.hpp"

namespace nasalgan::corpus {

/// Phone inventories for token extraction. The four sets are pairwise disjoint.
struct PhoneClassMap {
    std::set<std::string> stops;        // T
    std::set<std::string> nasals;       // N
    std::set<std::string> oral_vowels;  // V
    std::set<std::string> nasal_vowels; // Ṽ

    bool is_vowel(const std::string& p) const {
        return oral_vowels.contains(p) || nasal_vowels.contains(p);
    }
    bool is_coda(const std::string& p) const { return stops.contains(p) || nasals.contains(p); }

    /// Class of a (vowel, coda) phone pair, or nullopt when the pair does not
    /// match [V|Ṽ][T|N].
    std::optional<SyllableClass> classify(const std::string& vowel, const std::string& coda) const;

    /// Throws DataError if any two sets share a symbol.
    void validate() const;
};

/// Plain-text preset: lines `T: ...`, `N: ...`, `V_oral: ...`, `V_nasal: ...`
/// with whitespace-separated symbols; '#' starts a comment.
PhoneClassMap parse_phone_classes(std::string_view text);

/// Bundled presets: "english" or "french".
PhoneClassMap preset(std::string_view name);

}  // namespace nasalgan::corpus
