#include "nasalgan/corpus/manifest.hpp"

#include <fstream>
#include <sstream>

#include "nasalgan/error.hpp"
#include "nasalgan/random.hpp"

namespace nasalgan::corpus {
namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::map<SyllableClass, std::size_t> DatasetManifest::counts() const {
    std::map<SyllableClass, std::size_t> c;
    for (const auto& e : entries) ++c[e.cls];
    return c;
}

std::string manifest_to_csv(const DatasetManifest& manifest) {
    std::string out = "file,class,source,word_position,vowel,coda\n";
    for (const auto& e : manifest.entries) {
        out += e.file;
        out += ',';
        out += to_string(e.cls);
        out += ',';
        out += e.source;
        out += ',';
        out += to_string(e.word_position);
        out += ',';
        out += e.vowel;
        out += ',';
        out += e.coda;
        out += '\n';
    }
    return out;
}

void write_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write manifest '" + path.string() + "'");
    out << manifest_to_csv(manifest);
}

DatasetManifest parse_manifest(std::string_view text) {
    DatasetManifest m;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("file,", 0) == 0) continue;
        const auto f = split_csv(line);
        if (f.size() != 4 && f.size() != 6)
            throw DataError("manifest line " + std::to_string(line_no) + ": expected 4 or 6 columns");
        ManifestEntry e;
        e.file = f[0];
        const auto cls = parse_syllable_class(f[1]);
        if (!cls) throw DataError("manifest line " + std::to_string(line_no) + ": unknown class '" + f[1] + "'");
        e.cls = *cls;
        e.source = f[2];
        if (f[3] == "monosyllabic") e.word_position = WordPosition::monosyllabic;
        else if (f[3] == "final_syllable") e.word_position = WordPosition::final_syllable;
        else throw DataError("manifest line " + std::to_string(line_no) + ": bad word_position '" + f[3] + "'");
        if (f.size() == 6) {
            e.vowel = f[4];
            e.coda = f[5];
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read manifest '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str());
}

BalanceResult balance_dataset(const DatasetManifest& manifest,
                              const std::map<SyllableClass, std::size_t>& targets,
                              const std::optional<std::set<std::string>>& vowel_filter,
                              std::uint64_t seed) {
    std::map<SyllableClass, std::vector<std::size_t>> pools;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto& e = manifest.entries[i];
        if (vowel_filter && !vowel_filter->contains(e.vowel)) continue;
        pools[e.cls].push_back(i);
    }

    BalanceResult result;
    for (const auto& [cls, target] : targets) {
        if (target == 0) continue;
        const auto& pool = pools[cls];
        if (pool.empty())
            throw DataError("balance: class " + std::string(to_string(cls)) + " has no source tokens" +
                            (vowel_filter ? " after the vowel filter" : ""));
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
        std::vector<std::size_t> picked = pool;
        rng.shuffle(picked.begin(), picked.end());
        if (target <= picked.size()) {
            picked.resize(target);
        } else {
            const std::size_t n = pool.size();
            while (picked.size() < target) picked.push_back(pool[rng.below(n)]);
        }
        for (auto i : picked) result.manifest.entries.push_back(manifest.entries[i]);
        result.oversampling[cls] = static_cast<double>(target) / static_cast<double>(pool.size());
    }
    return result;
}

}  // namespace nasalgan::corpus
