#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "nasalgan/ciwgan/trainer.hpp"
#include "nasalgan/keyvalue.hpp"
#include "test_support.hpp"

using namespace nasalgan;
namespace fs = std::filesystem;
using nasalgan::testing::read_file;
using nasalgan::testing::TempDir;
using nasalgan::testing::tree_checksum;

namespace {

struct Result {
    int code = -1;
    std::string output;
};

Result cli(const std::string& args) {
    const std::string cmd = std::string(NASALGAN_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    Result r;
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::size_t count_lines(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

std::size_t count_files(const fs::path& dir) {
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(dir)) n += e.is_regular_file();
    return n;
}

// Classes in column `col` of a CSV with a header.
std::vector<std::string> column(const fs::path& csv, std::size_t col) {
    std::istringstream in(read_file(csv));
    std::string line;
    std::getline(in, line);
    std::vector<std::string> out;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string f;
        for (std::size_t i = 0; i <= col; ++i) std::getline(fields, f, ',');
        out.push_back(f);
    }
    return out;
}

const std::string kTinyGan =
    " --generator-channels 8,4 --critic-channels 4,8 --kernel 8 --phase-shuffle 1 --batch-size 4 --critic-iters 1"
    " --report-interval 1";

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("usage errors exit 1") {
    TempDir dir;
    CHECK(cli("").code == 1);
    CHECK(cli("frobnicate").code == 1);
    CHECK(cli("synth").code == 1);  // --out is required
    CHECK(cli("synth --out " + quoted(dir.path() / "a") + " --no-such-flag 3").code == 1);
    CHECK(cli("synth --out " + quoted(dir.path() / "b") + " --seed banana").code == 1);
    CHECK(cli("synth --out " + quoted(dir.path() / "c") + " --counts VX=3").code == 1);
    CHECK(cli("extract --out " + quoted(dir.path() / "d")).code == 1);  // --corpus is required
}

TEST_CASE("synth writes the requested class counts") {
    TempDir dir;
    const auto out = dir.path() / "syn";
    const auto r = cli("synth -q --out " + quoted(out) + " --counts VT=3,VN=2,V~T=0,V~N=4 --seed 9");
    REQUIRE_MESSAGE(r.code == 0, r.output);
    CHECK(count_files(out / "tokens") == 9);
    CHECK(count_lines(out / "labels.csv") == 10);
    CHECK(count_lines(out / "manifest.csv") == 10);
    std::map<std::string, int> seen;
    for (const auto& c : column(out / "labels.csv", 1)) ++seen[c];
    CHECK(seen == std::map<std::string, int>{{"VT", 3}, {"VN", 2}, {"V~N", 4}});

    SUBCASE("same seed, same bytes; another seed differs") {
        const auto again = dir.path() / "again", other = dir.path() / "other";
        REQUIRE(cli("synth -q --out " + quoted(again) + " --counts VT=3,VN=2,V~T=0,V~N=4 --seed 9").code == 0);
        REQUIRE(cli("synth -q --out " + quoted(other) + " --counts VT=3,VN=2,V~T=0,V~N=4 --seed 10").code == 0);
        CHECK(tree_checksum(out) == tree_checksum(again));
        CHECK(tree_checksum(out, {"config.lock"}) != tree_checksum(other, {"config.lock"}));
    }
}

TEST_CASE("parameter precedence and config files") {
    TempDir dir;
    const auto cfg = dir.path() / "run.cfg";
    std::ofstream(cfg) << "command=synth\ncounts=VT=2\nseed=5\n";

    const auto out = dir.path() / "a";
    REQUIRE(cli("synth -q --config " + quoted(cfg) + " --seed 6 --out " + quoted(out)).code == 0);
    const auto lock = KeyValueFile::load(out / "config.lock");
    CHECK(lock.get("command") == "synth");
    CHECK(lock.get("counts") == "VT=2");
    CHECK(lock.get("seed") == "6");
    CHECK(lock.get("sample_rate") == "8000");
    CHECK_FALSE(lock.contains("out"));

    SUBCASE("unknown key") {
        std::ofstream(cfg) << "command=synth\ncountz=VT=2\n";
        CHECK(cli("synth -q --config " + quoted(cfg) + " --out " + quoted(dir.path() / "b")).code == 1);
    }
    SUBCASE("config for another command") {
        std::ofstream(cfg) << "command=probe\n";
        CHECK(cli("synth -q --config " + quoted(cfg) + " --out " + quoted(dir.path() / "c")).code == 1);
    }
    SUBCASE("rerun into the same directory with another setting") {
        const auto r = cli("synth -q --counts VT=2 --seed 7 --out " + quoted(out));
        CHECK(r.code == 1);
        CHECK(r.output.find("seed") != std::string::npos);
    }
    SUBCASE("rerun with identical settings is a no-op success") {
        const auto before = tree_checksum(out);
        CHECK(cli("synth -q --config " + quoted(out / "config.lock") + " --out " + quoted(out)).code == 0);
        CHECK(tree_checksum(out) == before);
    }
}

TEST_CASE("a held output directory is refused") {
    TempDir dir;
    const auto out = dir.path() / "held";
    fs::create_directories(out);
    std::ofstream(out / ".nasalgan.lock") << "12345\n";
    const auto r = cli("synth -q --counts VT=1 --out " + quoted(out));
    CHECK(r.code == 2);
    CHECK(r.output.find(".nasalgan.lock") != std::string::npos);
    CHECK_FALSE(fs::exists(out / "tokens"));
}

TEST_CASE("missing prerequisites exit 2 and name the missing file") {
    TempDir dir;
    const auto nowhere = dir.path() / "nowhere";
    auto r = cli("train-gan -q --data " + quoted(nowhere) + " --out " + quoted(dir.path() / "g"));
    CHECK(r.code == 2);
    CHECK(r.output.find("manifest.csv") != std::string::npos);
    r = cli("train-detector -q --data " + quoted(nowhere) + " --out " + quoted(dir.path() / "d"));
    CHECK(r.code == 2);
    CHECK(r.output.find("labels.csv") != std::string::npos);
    r = cli("generate -q --model " + quoted(nowhere) + " --out " + quoted(dir.path() / "x"));
    CHECK(r.code == 2);
    r = cli("probe -q --generator " + quoted(nowhere) + " --detector " + quoted(nowhere) + " --out " +
            quoted(dir.path() / "p"));
    CHECK(r.code == 2);
    CHECK(r.output.find("generator.ckpt") != std::string::npos);
}

TEST_CASE("extract matches the golden manifest and English has no nasal vowels") {
    TempDir dir;
    const auto data = nasalgan::testing::data_dir();
    const auto out = dir.path() / "en";
    const auto r = cli("extract -q --corpus " + quoted(data / "english_mini") + " --preset english --out " + quoted(out));
    REQUIRE_MESSAGE(r.code == 0, r.output);
    CHECK(read_file(out / "manifest.csv") == read_file(data / "english_mini.golden.csv"));
    for (const auto& c : column(out / "manifest.csv", 1)) CHECK(c.find('~') == std::string::npos);
}

TEST_CASE("GAN training, generation and probing end to end") {
    TempDir dir;
    const auto syn = dir.path() / "syn";
    REQUIRE(cli("synth -q --counts VT=6,VN=6 --out " + quoted(syn)).code == 0);

    SUBCASE("zero steps stores the initialization") {
        const auto g = dir.path() / "g0";
        const auto r = cli("train-gan -q --steps 0 --seed 4 --data " + quoted(syn) + " --out " + quoted(g) + kTinyGan);
        REQUIRE_MESSAGE(r.code == 0, r.output);
        const auto loaded = ciwgan::load_model(g);
        const auto fresh = ciwgan::CiwganModel::create(loaded.config);
        REQUIRE(loaded.generator.parameters().size() == fresh.generator.parameters().size());
        for (std::size_t p = 0; p < fresh.generator.parameters().size(); ++p)
            CHECK(loaded.generator.parameters()[p].values() == fresh.generator.parameters()[p].values());
        CHECK(ciwgan::load_state(g).step == 0);
    }

    SUBCASE("resuming matches an uninterrupted run") {
        const auto direct = dir.path() / "direct", resumed = dir.path() / "resumed";
        const std::string common = " --seed 4 --data " + quoted(syn) + kTinyGan;
        REQUIRE(cli("train-gan -q --steps 3" + common + " --out " + quoted(direct)).code == 0);
        REQUIRE(cli("train-gan -q --steps 1" + common + " --out " + quoted(resumed)).code == 0);
        REQUIRE(cli("train-gan -q --steps 3" + common + " --out " + quoted(resumed)).code == 0);
        for (const char* f : {"generator.ckpt", "critic.ckpt", "qnet.ckpt", "ciwgan.cfg", "train_report.csv"})
            CHECK_MESSAGE(read_file(direct / f) == read_file(resumed / f), f);

        const auto r = cli("train-gan -q --steps 4 --kernel 4" + common + " --out " + quoted(resumed));
        CHECK(r.code == 1);
    }

    SUBCASE("numerical failure exits 3 and keeps the last good step") {
        const auto g = dir.path() / "blowup";
        const auto r = cli("train-gan -q --steps 2 --gp-lambda 1e308 --data " + quoted(syn) + " --out " + quoted(g) + kTinyGan);
        CHECK(r.code == 3);
        CHECK(r.output.find("last good step") != std::string::npos);
        CHECK(ciwgan::load_state(g).step == 0);
    }

    SUBCASE("generate and probe") {
        const auto g = dir.path() / "g";
        REQUIRE(cli("train-gan -q --steps 1 --data " + quoted(syn) + " --out " + quoted(g) + kTinyGan).code == 0);

        const auto gen = dir.path() / "gen";
        auto r = cli("generate -q --model " + quoted(g) + " --out " + quoted(gen));
        REQUIRE_MESSAGE(r.code == 0, r.output);
        CHECK(count_files(gen / "clips") == 3840);
        CHECK(count_lines(gen / "codes.csv") == 3841);

        const auto det_data = dir.path() / "det_data";
        REQUIRE(cli("synth -q --counts VT=4,VN=4,V~T=4,V~N=4 --seed 2 --out " + quoted(det_data)).code == 0);
        const auto det = dir.path() / "det";
        REQUIRE(cli("train-detector -q --epochs 1 --data " + quoted(det_data) + " --out " + quoted(det)).code == 0);

        const auto pr = dir.path() / "probe";
        r = cli("probe -q -n 120 --n-base 3 --levels=-1,1 --sweep 3,5 --pairs 3:5 --generator " + quoted(g) + " --detector " + quoted(det) +
                " --out " + quoted(pr));
        REQUIRE_MESSAGE(r.code == 0, r.output);
        const auto lock = KeyValueFile::load(pr / "config.lock");
        CHECK(lock.get("top_k") == "7");
        CHECK(lock.get("include_phi") == "false");
        CHECK(count_lines(pr / "batch.csv") == 121);
        CHECK(fs::exists(pr / "report.csv"));
        CHECK(fs::exists(pr / "covariance.csv"));
        std::size_t sweeps = 0;
        for (const auto& e : fs::directory_iterator(pr))
            sweeps += e.path().filename().string().starts_with("sweep_z");
        CHECK(sweeps == 2);
        for (const char* f : {"grid_3_5_nasal_vowel.csv", "grid_3_5_nasal_vowel.ppm", "grid_3_5_nasal_consonant.ppm"})
            CHECK_MESSAGE(fs::exists(pr / f), f);
        // A barely trained model may label everything alike; the feature then
        // gets one empty row instead of a ranking.
        const auto features = column(pr / "report.csv", 0), tops = column(pr / "report.csv", 5);
        for (const char* f : {"nasal_vowel", "nasal_consonant"}) {
            std::size_t rows = 0, marked = 0;
            for (std::size_t i = 0; i < features.size(); ++i)
                if (features[i] == f) {
                    ++rows;
                    marked += tops[i] == "1";
                }
            CHECK_MESSAGE((marked == 7 || (rows == 1 && marked == 0)), f);
        }

        SUBCASE("sample-rate mismatch") {
            const auto d16 = dir.path() / "d16";
            const auto s16 = dir.path() / "s16";
            REQUIRE(cli("synth -q --counts VT=4,VN=4,V~T=4,V~N=4 --length 8192 --sample-rate 16000 --out " +
                        quoted(s16)).code == 0);
            REQUIRE(cli("train-detector -q --epochs 1 --sample-rate 16000 --data " + quoted(s16) + " --out " +
                        quoted(d16)).code == 0);
            r = cli("probe -q -n 20 --generator " + quoted(g) + " --detector " + quoted(d16) + " --out " +
                    quoted(dir.path() / "mismatch"));
            CHECK(r.code == 2);
            CHECK(r.output.find("16000") != std::string::npos);
        }
    }
}
