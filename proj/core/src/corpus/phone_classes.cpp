#include "nasalgan/corpus/phone_classes.hpp"

#include <sstream>
#include <vector>

#include "nasalgan/corpus/presets_data.hpp"
#include "nasalgan/error.hpp"

namespace nasalgan::corpus {

std::optional<SyllableClass> PhoneClassMap::classify(const std::string& vowel,
                                                     const std::string& coda) const {
    const bool oral = oral_vowels.contains(vowel);
    const bool nasal = nasal_vowels.contains(vowel);
    if (!oral && !nasal) return std::nullopt;
    if (stops.contains(coda)) return make_class(nasal, false);
    if (nasals.contains(coda)) return make_class(nasal, true);
    return std::nullopt;
}

void PhoneClassMap::validate() const {
    const std::vector<std::pair<const char*, const std::set<std::string>*>> sets{
        {"T", &stops}, {"N", &nasals}, {"V_oral", &oral_vowels}, {"V_nasal", &nasal_vowels}};
    for (std::size_t i = 0; i < sets.size(); ++i)
        for (std::size_t j = i + 1; j < sets.size(); ++j)
            for (const auto& p : *sets[i].second)
                if (sets[j].second->contains(p))
                    throw DataError("phone classes: '" + p + "' is in both " + sets[i].first +
                                    " and " + sets[j].first);
}

PhoneClassMap parse_phone_classes(std::string_view text) {
    PhoneClassMap map;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw DataError("phone classes line " + std::to_string(line_no) + ": expected '<set>: symbols'");
        std::string key = line.substr(0, colon);
        key.erase(0, key.find_first_not_of(" \t"));
        key.erase(key.find_last_not_of(" \t") + 1);
        std::set<std::string>* target = nullptr;
        if (key == "T") target = &map.stops;
        else if (key == "N") target = &map.nasals;
        else if (key == "V_oral" || key == "V") target = &map.oral_vowels;
        else if (key == "V_nasal") target = &map.nasal_vowels;
        else
            throw DataError("phone classes line " + std::to_string(line_no) + ": unknown set '" + key + "'");
        std::istringstream syms(line.substr(colon + 1));
        std::string s;
        while (syms >> s) target->insert(s);
    }
    map.validate();
    return map;
}

PhoneClassMap preset(std::string_view name) {
    if (name == "english") return parse_phone_classes(detail::kEnglishPreset);
    if (name == "french") return parse_phone_classes(detail::kFrenchPreset);
    throw UsageError("unknown phone-class preset '" + std::string(name) + "' (english|french)");
}

}  // namespace nasalgan::corpus
