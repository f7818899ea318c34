#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace nasalgan {

/// (oral | nasal) vowel followed by (stop | nasal) coda.
enum class SyllableClass { VT, VN, NasalVT, NasalVN };

inline constexpr std::array<SyllableClass, 4> kAllClasses{
    SyllableClass::VT, SyllableClass::VN, SyllableClass::NasalVT, SyllableClass::NasalVN};

constexpr bool has_nasal_vowel(SyllableClass c) noexcept {
    return c == SyllableClass::NasalVT || c == SyllableClass::NasalVN;
}
constexpr bool has_nasal_coda(SyllableClass c) noexcept {
    return c == SyllableClass::VN || c == SyllableClass::NasalVN;
}
constexpr SyllableClass make_class(bool nasal_vowel, bool nasal_coda) noexcept {
    if (nasal_vowel) return nasal_coda ? SyllableClass::NasalVN : SyllableClass::NasalVT;
    return nasal_coda ? SyllableClass::VN : SyllableClass::VT;
}

/// ASCII names used in every CSV: VT, VN, V~T, V~N.
constexpr std::string_view to_string(SyllableClass c) noexcept {
    switch (c) {
        case SyllableClass::VT: return "VT";
        case SyllableClass::VN: return "VN";
        case SyllableClass::NasalVT: return "V~T";
        case SyllableClass::NasalVN: return "V~N";
    }
    return "?";
}

/// Accepts the ASCII names plus the UTF-8 spellings with a combining or
/// precomposed tilde (ṼT, ṼN).
inline std::optional<SyllableClass> parse_syllable_class(std::string_view s) {
    if (s == "VT") return SyllableClass::VT;
    if (s == "VN") return SyllableClass::VN;
    if (s == "V~T" || s == "\xE1\xB9\xBCT" || s == "V\xCC\x83T") return SyllableClass::NasalVT;
    if (s == "V~N" || s == "\xE1\xB9\xBCN" || s == "V\xCC\x83N") return SyllableClass::NasalVN;
    return std::nullopt;
}

}  // namespace nasalgan
