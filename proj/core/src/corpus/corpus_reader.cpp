#include "nasalgan/corpus/corpus_reader.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nasalgan/error.hpp"

namespace nasalgan::corpus {
namespace fs = std::filesystem;
namespace {

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw DataError("cannot read '" + p.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool timit_sa_stem(const std::string& stem) {
    const auto s = lower(stem);
    return s.size() >= 3 && s[0] == 's' && s[1] == 'a' && std::isdigit(static_cast<unsigned char>(s[2]));
}

fs::path sibling(const fs::path& p, const std::string& ext) {
    for (const auto& e : {ext, [&] {
                              std::string u = ext;
                              for (char& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                              return u;
                          }()}) {
        auto q = p;
        q.replace_extension(e);
        if (fs::exists(q)) return q;
    }
    auto q = p;
    q.replace_extension(ext);
    return q;
}

std::set<std::string> read_flagged(const fs::path& dir) {
    std::set<std::string> sa;
    const auto index = dir / "utterances.csv";
    if (!fs::exists(index)) return sa;
    std::istringstream in(read_text(index));
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        const std::string utt = line.substr(0, comma);
        const std::string flags = comma == std::string::npos ? "" : line.substr(comma + 1);
        if (first && utt == "utterance") {
            first = false;
            continue;
        }
        first = false;
        std::string normalized = flags;
        std::replace(normalized.begin(), normalized.end(), ';', ' ');
        std::replace(normalized.begin(), normalized.end(), '|', ' ');
        std::istringstream fl(normalized);
        std::string flag;
        while (fl >> flag)
            if (lower(flag) == "sa") sa.insert(utt);
    }
    return sa;
}

struct Source {
    UtteranceAlignment alignment;
    fs::path wav;
};

std::vector<Source> discover(const fs::path& dir) {
    std::vector<Source> out;
    const auto csv = dir / "alignment.csv";
    if (fs::exists(csv)) {
        const std::string text = read_text(csv);
        // Times need a rate; read it from each utterance's audio header.
        const auto probe = parse_alignment_csv(text, 1000000);
        std::map<std::string, int> rates;
        for (const auto& u : probe) rates[u.id] = audio::load_wav(dir / (u.id + ".wav")).sample_rate();
        std::map<int, std::vector<UtteranceAlignment>> by_rate;
        for (const auto& [id, rate] : rates)
            if (!by_rate.contains(rate)) by_rate[rate] = parse_alignment_csv(text, rate);
        for (const auto& u : probe) {
            for (auto& parsed : by_rate[rates[u.id]])
                if (parsed.id == u.id) out.push_back({parsed, dir / (u.id + ".wav")});
        }
    } else {
        std::vector<fs::path> phns;
        for (const auto& e : fs::recursive_directory_iterator(dir))
            if (e.is_regular_file() && lower(e.path().extension().string()) == ".phn") phns.push_back(e.path());
        for (const auto& phn : phns) {
            const auto wrd = sibling(phn, ".wrd");
            const auto wav = sibling(phn, ".wav");
            if (!fs::exists(wrd) || !fs::exists(wav))
                throw DataError("corpus: '" + phn.string() + "' lacks a sibling .wrd or .wav");
            UtteranceAlignment u;
            auto rel = fs::relative(phn, dir);
            rel.replace_extension();
            u.id = rel.generic_string();
            try {
                u.phones = parse_phn(read_text(phn));
                u.words = group_words(u.phones, parse_wrd(read_text(wrd)));
            } catch (const DataError& e) {
                throw DataError(phn.string() + ": " + e.what());
            }
            out.push_back({std::move(u), wav});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Source& a, const Source& b) { return a.alignment.id < b.alignment.id; });
    return out;
}

}  // namespace

CorpusExtraction extract_corpus(const fs::path& dir, const PhoneClassMap& classes,
                                const ExtractConfig& config) {
    if (!fs::is_directory(dir)) throw DataError("corpus directory '" + dir.string() + "' not found");
    const auto flagged = read_flagged(dir);
    CorpusExtraction result;
    for (const auto& src : discover(dir)) {
        const auto& u = src.alignment;
        const auto stem = fs::path(u.id).filename().string();
        if (flagged.contains(u.id) || timit_sa_stem(stem)) {
            result.excluded_utterances.push_back(u.id);
            continue;
        }
        const auto clip = audio::load_wav(src.wav);
        auto part = extract_tokens(u, classes, clip, config);
        for (auto& t : part.tokens) {
            char name[32];
            std::snprintf(name, sizeof name, "tokens/tok_%05zu.wav", result.tokens.size());
            result.manifest.entries.push_back(
                ManifestEntry{name, t.cls, t.source_utterance, t.word_position, t.vowel, t.coda});
            result.tokens.push_back(std::move(t));
        }
        for (auto& s : part.skipped) result.skipped.push_back(std::move(s));
    }
    return result;
}

void write_extraction(const CorpusExtraction& extraction, const fs::path& out_dir) {
    fs::create_directories(out_dir / "tokens");
    for (std::size_t i = 0; i < extraction.tokens.size(); ++i)
        audio::save_wav(extraction.tokens[i].audio, out_dir / extraction.manifest.entries[i].file);
    write_manifest(extraction.manifest, out_dir / "manifest.csv");
}

}  // namespace nasalgan::corpus
