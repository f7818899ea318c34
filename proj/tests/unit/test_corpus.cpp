#include <doctest.h>

#include <algorithm>

#include "nasalgan/corpus/alignment.hpp"
#include "nasalgan/corpus/corpus_reader.hpp"
#include "nasalgan/corpus/extract.hpp"
#include "nasalgan/corpus/manifest.hpp"
#include "nasalgan/corpus/phone_classes.hpp"
#include "nasalgan/error.hpp"
#include "test_support.hpp"

using namespace nasalgan;
using namespace nasalgan::corpus;

namespace {

UtteranceAlignment utterance(const std::string& phn, const std::string& wrd) {
    UtteranceAlignment u;
    u.id = "u";
    u.phones = parse_phn(phn);
    u.words = group_words(u.phones, parse_wrd(wrd));
    return u;
}

audio::AudioClip silence(std::size_t n, int rate = 8000) { return {std::vector<float>(n, 0.1f), rate}; }

DatasetManifest synthetic_manifest(const std::map<SyllableClass, std::size_t>& counts,
                                   const std::map<SyllableClass, std::vector<std::string>>& vowels = {}) {
    DatasetManifest m;
    std::size_t id = 0;
    for (const auto& [cls, n] : counts) {
        for (std::size_t i = 0; i < n; ++i) {
            ManifestEntry e;
            e.file = "tok_" + std::to_string(id++) + ".wav";
            e.cls = cls;
            e.source = "utt" + std::to_string(i % 17);
            auto it = vowels.find(cls);
            e.vowel = it == vowels.end() ? "aa" : it->second[i % it->second.size()];
            e.coda = has_nasal_coda(cls) ? "n" : "t";
            m.entries.push_back(e);
        }
    }
    return m;
}

}  // namespace

TEST_CASE("parse_phn reads segments in order") {
    auto p = parse_phn("0 1000 b\n1000 2400 ae\n2400 3000 n");
    REQUIRE(p.size() == 3);
    CHECK(p[0] == PhoneSegment{"b", 0, 1000});
    CHECK(p[1] == PhoneSegment{"ae", 1000, 2400});
    CHECK(p[2] == PhoneSegment{"n", 2400, 3000});
}

TEST_CASE("parse_phn accepts an empty file") { CHECK(parse_phn("").empty()); }

TEST_CASE("parse_phn rejects reversed and overlapping segments") {
    CHECK_THROWS_AS(parse_phn("1000 900 ae"), DataError);
    CHECK_THROWS_AS(parse_phn("0 1000 b\n900 2000 ae"), DataError);
    try {
        parse_phn("0 10 a\n10 20 b\nnot a line");
        FAIL("expected an error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
}

TEST_CASE("alignment csv groups phones into words") {
    const char* text =
        "utterance,word_index,phone,start_sec,end_sec\n"
        "u1,,sil,0.00,0.05\n"
        "u1,0,b,0.05,0.10\nu1,0,O,0.10,0.20\n"
        "u1,1,a,0.20,0.30\nu1,1,m,0.30,0.35\nu1,1,i,0.35,0.50\n";
    auto us = parse_alignment_csv(text, 16000);
    REQUIRE(us.size() == 1);
    CHECK(us[0].phones.size() == 6);
    REQUIRE(us[0].words.size() == 2);
    CHECK(us[0].words[0].phone_count() == 2);
    CHECK(us[0].words[1].phone_count() == 3);
}

TEST_CASE("alignment csv converts seconds to samples") {
    auto us = parse_alignment_csv("u,0,a,0.10,0.20\n", 16000);
    CHECK(us[0].phones[0].start == 1600);
    CHECK(us[0].phones[0].end == 3200);
}

TEST_CASE("alignment csv rejects rows ending before they start") {
    CHECK_THROWS_AS(parse_alignment_csv("u,0,a,0.30,0.20\n", 16000), DataError);
    CHECK_THROWS_AS(parse_alignment_csv("u,0,a,0.10,0.30\nu,0,b,0.20,0.40\n", 16000), DataError);
}

TEST_CASE("presets mirror the phone inventories") {
    auto en = preset("english");
    CHECK(en.stops.size() == 12);
    CHECK(en.nasals == std::set<std::string>{"n", "m", "ng"});
    CHECK(en.oral_vowels.size() == 24);
    CHECK(en.oral_vowels.contains("axr"));
    CHECK(en.oral_vowels.contains("w"));
    CHECK(en.nasal_vowels.empty());
    auto fr = preset("french");
    CHECK(fr.nasals == std::set<std::string>{"n", "m", "ng", "nj"});
    CHECK(fr.oral_vowels.size() == 11);
    CHECK(fr.nasal_vowels == std::set<std::string>{"A~", "E~", "o~", "OE~"});
    CHECK_THROWS_AS(preset("klingon"), UsageError);
}

TEST_CASE("phone sets must be disjoint") {
    CHECK_THROWS_AS(parse_phone_classes("T: t d\nN: n t\nV_oral: a\nV_nasal:\n"), DataError);
}

TEST_CASE("ban yields one VN token spanning the vowel and nasal") {
    auto u = utterance("0 800 bcl\n800 1000 b\n1000 2400 ae\n2400 3000 n\n", "0 3000 ban\n");
    auto r = extract_tokens(u, preset("english"), silence(3000), {});
    REQUIRE(r.tokens.size() == 1);
    const auto& t = r.tokens[0];
    CHECK(t.cls == SyllableClass::VN);
    CHECK(t.vowel == "ae");
    CHECK(t.coda == "n");
    CHECK(t.span_begin == 1000);
    CHECK(t.span_end == 3000);
    CHECK(t.audio.size() == 4096);
    CHECK(t.word_position == WordPosition::monosyllabic);
    for (std::size_t i = 2000; i < 4096; ++i) REQUIRE(t.audio.samples()[i] == 0.0f);
}

TEST_CASE("mon ami yields a nasal-vowel nasal-coda token") {
    const char* text =
        "mon_ami,0,m,0.10,0.18\nmon_ami,0,o~,0.18,0.38\nmon_ami,0,n,0.38,0.46\n"
        "mon_ami,1,a,0.46,0.60\nmon_ami,1,m,0.60,0.68\nmon_ami,1,i,0.68,0.84\n";
    auto us = parse_alignment_csv(text, 8000);
    auto r = extract_tokens(us[0], preset("french"), silence(8000), {});
    REQUIRE(r.tokens.size() == 1);
    CHECK(r.tokens[0].cls == SyllableClass::NasalVN);
    CHECK(r.tokens[0].vowel == "o~");
    CHECK(r.tokens[0].coda == "n");
}

TEST_CASE("words ending in a vowel yield nothing") {
    auto u = utterance("0 500 dh\n500 1500 ax\n", "0 1500 the\n");
    CHECK(extract_tokens(u, preset("english"), silence(1500), {}).tokens.empty());
}

TEST_CASE("closure and release count as one stop coda") {
    auto u = utterance("0 200 b\n200 1400 ae\n1400 1800 dcl\n1800 2000 d\n", "0 2000 bad\n");
    auto r = extract_tokens(u, preset("english"), silence(2000), {});
    REQUIRE(r.tokens.size() == 1);
    CHECK(r.tokens[0].cls == SyllableClass::VT);
    CHECK(r.tokens[0].coda == "d");
    CHECK(r.tokens[0].span_begin == 200);
    CHECK(r.tokens[0].span_end == 2000);
}

TEST_CASE("the english preset never emits nasal-vowel classes") {
    auto u = utterance("0 200 b\n200 1400 o~\n1400 2000 n\n", "0 2000 bon\n");
    CHECK(extract_tokens(u, preset("english"), silence(2000), {}).tokens.empty());
}

TEST_CASE("multi-syllable words are tagged final_syllable") {
    auto u = utterance("0 500 hh\n500 1500 ae\n1500 1800 pcl\n1800 2000 p\n2000 2600 ax\n2600 3400 n\n",
                       "0 3400 happen\n");
    auto r = extract_tokens(u, preset("english"), silence(3400), {});
    REQUIRE(r.tokens.size() == 1);
    CHECK(r.tokens[0].word_position == WordPosition::final_syllable);
}

TEST_CASE("over-long spans are skipped and reported") {
    auto u = utterance("0 200 m\n200 5000 ae\n5000 5400 n\n", "0 5400 man\n");
    auto r = extract_tokens(u, preset("english"), silence(5400), {});
    CHECK(r.tokens.empty());
    REQUIRE(r.skipped.size() == 1);
    CHECK(r.skipped[0].word_index == 0);
}

TEST_CASE("extraction can decimate to a target rate") {
    auto u = utterance("0 400 b\n400 2400 ae\n2400 4000 n\n", "0 4000 ban\n");
    ExtractConfig cfg;
    cfg.target_rate = 8000;
    auto r = extract_tokens(u, preset("english"), silence(4000, 16000), cfg);
    REQUIRE(r.tokens.size() == 1);
    CHECK(r.tokens[0].audio.sample_rate() == 8000);
    CHECK(r.tokens[0].audio.size() == 4096);
    cfg.target_rate = 7000;
    CHECK_THROWS_AS(extract_tokens(u, preset("english"), silence(4000, 16000), cfg), UsageError);
}

TEST_CASE("extracted classes agree with the phone labels") {
    auto en = preset("english");
    auto ex = extract_corpus(testing::data_dir() / "english_mini", en, ExtractConfig{4096, 8000});
    for (const auto& t : ex.tokens) CHECK(en.classify(t.vowel, t.coda) == t.cls);
}

TEST_CASE("english fixture reproduces its golden manifest") {
    testing::TempDir out;
    ExtractConfig cfg;
    cfg.target_rate = 8000;
    auto ex = extract_corpus(testing::data_dir() / "english_mini", preset("english"), cfg);
    write_extraction(ex, out.path());
    CHECK(testing::read_file(out.path() / "manifest.csv") ==
          testing::read_file(testing::data_dir() / "english_mini.golden.csv"));
    CHECK(ex.excluded_utterances == std::vector<std::string>{"dr1/mabc0/sa1"});
    REQUIRE(ex.skipped.size() == 1);
    CHECK(ex.skipped[0].source_utterance == "dr2/fxyz0/si3");
    for (const auto& e : ex.manifest.entries) {
        CHECK(e.source != "dr1/mabc0/sa1");
        auto clip = audio::load_wav(out.path() / e.file);
        CHECK(clip.size() == 4096);
        CHECK(clip.sample_rate() == 8000);
    }
}

TEST_CASE("french fixture reproduces its golden manifest") {
    ExtractConfig cfg;
    cfg.target_rate = 8000;
    auto ex = extract_corpus(testing::data_dir() / "french_mini", preset("french"), cfg);
    CHECK(manifest_to_csv(ex.manifest) == testing::read_file(testing::data_dir() / "french_mini.golden.csv"));
    CHECK(ex.excluded_utterances == std::vector<std::string>{"fr_sa_bon"});
    REQUIRE(ex.skipped.size() == 1);
    CHECK(ex.skipped[0].source_utterance == "fr_mode");
    auto counts = ex.manifest.counts();
    CHECK(counts.size() == 4);
}

TEST_CASE("missing corpus directory is a data error") {
    CHECK_THROWS_AS(extract_corpus(testing::data_dir() / "nowhere", preset("english"), {}), DataError);
}

TEST_CASE("manifest csv round trips and accepts four columns") {
    auto m = synthetic_manifest({{SyllableClass::VT, 3}, {SyllableClass::NasalVN, 2}});
    CHECK(parse_manifest(manifest_to_csv(m)).entries == m.entries);
    auto short_form = parse_manifest("file,class,source,word_position\na.wav,V~T,u1,final_syllable\n");
    REQUIRE(short_form.entries.size() == 1);
    CHECK(short_form.entries[0].cls == SyllableClass::NasalVT);
    CHECK(short_form.entries[0].vowel.empty());
    auto utf8 = parse_manifest("file,class,source,word_position\na.wav,\xE1\xB9\xBCN,u1,monosyllabic\n");
    CHECK(utf8.entries[0].cls == SyllableClass::NasalVN);
    CHECK_THROWS_AS(parse_manifest("file,class,source,word_position\na.wav,XX,u1,monosyllabic\n"), DataError);
}

TEST_CASE("manifest counts equal the class multiset") {
    auto m = synthetic_manifest({{SyllableClass::VT, 5}, {SyllableClass::VN, 2}});
    auto c = m.counts();
    CHECK(c[SyllableClass::VT] == 5);
    CHECK(c[SyllableClass::VN] == 2);
}

TEST_CASE("english-like balancing meets 5570/5570 from table counts") {
    auto src = synthetic_manifest({{SyllableClass::VT, 5570}, {SyllableClass::VN, 3159}});
    auto r = balance_dataset(src, {{SyllableClass::VT, 5570}, {SyllableClass::VN, 5570}}, std::nullopt, 1);
    auto c = r.manifest.counts();
    CHECK(c[SyllableClass::VT] == 5570);
    CHECK(c[SyllableClass::VN] == 5570);
    CHECK(r.oversampling[SyllableClass::VT] == doctest::Approx(1.0));
    CHECK(r.oversampling[SyllableClass::VN] == doctest::Approx(5570.0 / 3159.0));
    // Every VN source entry is kept at least once before resampling.
    std::set<std::string> vn_files;
    for (const auto& e : r.manifest.entries)
        if (e.cls == SyllableClass::VN) vn_files.insert(e.file);
    CHECK(vn_files.size() == 3159);
}

TEST_CASE("french-like balancing filters to /o/ before sampling") {
    auto src = synthetic_manifest(
        {{SyllableClass::VT, 2577}, {SyllableClass::VN, 1031}, {SyllableClass::NasalVT, 1031}, {SyllableClass::NasalVN, 47}},
        {{SyllableClass::VT, {"o", "a", "i"}},
         {SyllableClass::VN, {"o", "E"}},
         {SyllableClass::NasalVT, {"o~", "A~"}},
         {SyllableClass::NasalVN, {"o~"}}});
    const std::set<std::string> filter{"o", "o~"};
    auto r = balance_dataset(src, {{SyllableClass::VT, 1031}, {SyllableClass::VN, 1031}, {SyllableClass::NasalVT, 1031}, {SyllableClass::NasalVN, 1031}},
                             filter, 9);
    for (auto cls : kAllClasses) CHECK(r.manifest.counts()[cls] == 1031);
    for (const auto& e : r.manifest.entries) CHECK(filter.contains(e.vowel));
}

TEST_CASE("balancing at current counts is the identity up to order") {
    auto src = synthetic_manifest({{SyllableClass::VT, 40}, {SyllableClass::VN, 25}});
    auto r = balance_dataset(src, {{SyllableClass::VT, 40}, {SyllableClass::VN, 25}}, std::nullopt, 3);
    auto a = src.entries, b = r.manifest.entries;
    auto by_file = [](const ManifestEntry& x, const ManifestEntry& y) { return x.file < y.file; };
    std::sort(a.begin(), a.end(), by_file);
    std::sort(b.begin(), b.end(), by_file);
    CHECK(a == b);
}

TEST_CASE("balancing is deterministic, drops untargeted classes and names empty ones") {
    auto src = synthetic_manifest({{SyllableClass::VT, 30}, {SyllableClass::VN, 10}});
    auto a = balance_dataset(src, {{SyllableClass::VT, 12}}, std::nullopt, 5);
    auto b = balance_dataset(src, {{SyllableClass::VT, 12}}, std::nullopt, 5);
    CHECK(a.manifest.entries == b.manifest.entries);
    CHECK(a.manifest.counts().size() == 1);
    try {
        balance_dataset(src, {{SyllableClass::NasalVT, 3}}, std::nullopt, 5);
        FAIL("expected an error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("V~T") != std::string::npos);
    }
}
