#include <algorithm>
#include <cmath>
#include <cstring>

#include "doctest.h"
#include "nasalgan/ciwgan/model.hpp"
#include "nasalgan/error.hpp"
#include "nasalgan/probe/chi_square.hpp"
#include "nasalgan/probe/manipulation.hpp"
#include "nasalgan/probe/report.hpp"
#include "nasalgan/probe/sources.hpp"
#include "test_support.hpp"

using namespace nasalgan;
using namespace nasalgan::probe;
using nasalgan::testing::PlantedSource;
using nasalgan::testing::SpectralOracleLabeler;

namespace {

// Labels every clip the same way.
class FixedLabeler final : public TokenLabeler {
public:
    explicit FixedLabeler(detector::TokenLabel l) : l_(l) {}
    int sample_rate() const override { return 8000; }
    std::string id() const override { return "fixed"; }
    std::vector<detector::TokenLabel> label(const std::vector<audio::AudioClip>& clips) const override {
        return std::vector<detector::TokenLabel>(clips.size(), l_);
    }

private:
    detector::TokenLabel l_;
};

ManipulationGrid uniform_grid(std::size_t L, std::size_t nv) {
    ManipulationGrid g;
    g.var_x = 1;
    g.var_y = 2;
    g.levels.resize(L);
    for (std::size_t i = 0; i < L; ++i) g.levels[i] = static_cast<double>(i);
    g.n_base = 4;
    g.cells.resize(L * L);
    for (auto& c : g.cells) {
        c.n = 4;
        c.nasal_vowel = nv;
    }
    return g;
}

}  // namespace

TEST_CASE("chi-square statistic") {
    CHECK(chi_square(Table{{{10, 0}, {0, 10}}}) == doctest::Approx(20.0));
    CHECK(chi_square(Table{{{25, 25}, {25, 25}}}) == doctest::Approx(0.0));
    CHECK(chi_square(Table{{{0, 0}, {5, 7}}}) == 0.0);
    // 2x2 shortcut N (ad - bc)^2 / (row and column products).
    const Table t{{{12, 5}, {7, 20}}};
    const double n = 44, ad_bc = 12.0 * 20 - 5.0 * 7;
    CHECK(chi_square(t) == doctest::Approx(n * ad_bc * ad_bc / (17.0 * 27 * 19 * 25)));
    // Relabeling rows or columns leaves it unchanged.
    CHECK(chi_square(Table{{{7, 20}, {12, 5}}}) == doctest::Approx(chi_square(t)));
    CHECK(chi_square(Table{{{5, 12}, {20, 7}}}) == doctest::Approx(chi_square(t)));
    CHECK(low_expected(Table{{{1, 1}, {1, 30}}}));
    CHECK_FALSE(low_expected(Table{{{25, 25}, {25, 25}}}));

    CHECK(point_biserial({-1, -2, 1, 2}, {false, false, true, true}) > 0.9);
    CHECK(point_biserial({1, 2, 3}, {true, true, true}) == 0.0);
    CHECK(parse_feature("nasal_consonant") == Feature::nasal_consonant);
    CHECK_THROWS_AS(parse_feature("nasal"), UsageError);
}

TEST_CASE("planted variables rank first") {
    const PlantedSource src(2, 12, 5, 9);
    const SpectralOracleLabeler oracle;
    const auto batch = label_batch(src, oracle, 240, 3);
    REQUIRE(batch.size() == 240);
    CHECK(batch.generator_id == "planted");
    CHECK(batch.detector_id == "spectral-oracle");

    const auto v = chi_square_scores(batch, Feature::nasal_vowel);
    REQUIRE(v.scorable);
    CHECK(v.variables.size() == 12);
    CHECK(v.variables[v.ranking[0]].name == "z5");
    CHECK(v.variables[v.ranking[0]].chi_square > 200);
    CHECK(v.variables[5].rank == 1);
    CHECK(std::count_if(v.variables.begin(), v.variables.end(), [](const auto& s) { return s.top; }) == 7);

    const auto c = chi_square_scores(batch, Feature::nasal_consonant);
    CHECK(c.variables[c.ranking[0]].name == "z9");
    for (std::size_t i = 1; i < c.ranking.size(); ++i)
        CHECK(c.variables[c.ranking[i - 1]].chi_square >= c.variables[c.ranking[i]].chi_square);

    ChiSquareOptions with_phi;
    with_phi.include_phi = true;
    with_phi.top_k = 3;
    const auto p = chi_square_scores(batch, Feature::nasal_vowel, with_phi);
    CHECK(p.variables.size() == 14);
    CHECK(p.variables[0].name == "phi0");
    CHECK(p.variables[0].categorical);
    CHECK(std::count_if(p.variables.begin(), p.variables.end(), [](const auto& s) { return s.top; }) == 3);

    const auto csv = chi_square_csv({v, c});
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 25);
    CHECK(csv.rfind("feature,variable,chi_square,point_biserial,rank,top,low_expected\n", 0) == 0);

    const auto cov = covariance_check(batch);
    REQUIRE(cov.consonant_given_vowel);
    CHECK(*cov.consonant_given_vowel > 0.3);
    CHECK(*cov.consonant_given_vowel < 0.7);
}

TEST_CASE("degenerate targets are not scorable") {
    const PlantedSource src(2, 4, 0);
    const FixedLabeler none(detector::TokenLabel{false, false, false, 5});
    const auto batch = label_batch(src, none, 20, 1);
    const auto r = chi_square_scores(batch, Feature::nasal_vowel);
    CHECK_FALSE(r.scorable);
    CHECK_FALSE(r.note.empty());
    const auto csv = chi_square_csv({r});
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

    const auto cov = covariance_check(batch);
    CHECK_FALSE(cov.consonant_given_vowel.has_value());
    CHECK(cov.consonant_rate == 0.0);
    CHECK(covariance_csv(cov).find("consonant_given_vowel") != std::string::npos);
}

TEST_CASE("covariance follows the planted structure") {
    const SpectralOracleLabeler oracle;
    const PlantedSource tied(2, 4, 1);
    const auto t = covariance_check(label_batch(tied, oracle, 60, 2));
    REQUIRE(t.consonant_given_vowel);
    CHECK(*t.consonant_given_vowel == doctest::Approx(1.0));
    CHECK(t.table[1][0] == 0);
    CHECK(t.table[0][1] == 0);
}

TEST_CASE("sample rates must agree") {
    const PlantedSource fast(2, 4, 0, std::nullopt, 16000);
    const SpectralOracleLabeler oracle(8000);
    CHECK_THROWS_AS(check_compatible(fast, oracle), UsageError);
    CHECK_THROWS_AS(label_batch(fast, oracle, 4, 1), UsageError);
    CHECK_THROWS_AS(manipulate_single(fast, oracle, 0), UsageError);
}

TEST_CASE("single-variable manipulation") {
    const ManipulationOptions defaults;
    CHECK(defaults.levels == std::vector<double>{-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5});
    CHECK(defaults.n_base == 100);
    CHECK(defaults.phi_class == 0);

    const PlantedSource src(3, 6, 2, 4);
    for (const auto& c : base_vectors(src, defaults)) CHECK(c.category() == 0);

    const SpectralOracleLabeler oracle;
    ManipulationOptions o;
    o.levels = {-1, 0, 1};
    o.n_base = 20;
    o.seed = 4;
    o.keep_clips = true;
    const auto s = manipulate_single(src, oracle, 2, o);
    REQUIRE(s.tallies.size() == 3);
    CHECK(s.tallies[0].proportion(Feature::nasal_vowel) == 0.0);
    CHECK(s.tallies[1].proportion(Feature::nasal_vowel) == 0.0);
    CHECK(s.tallies[2].proportion(Feature::nasal_vowel) == 1.0);
    // The coda variable is untouched, so its rate is the same at every level.
    CHECK(s.tallies[0].nasal_consonant == s.tallies[2].nasal_consonant);
    REQUIRE(s.clips.size() == 3);
    CHECK(s.clips[0].size() == 20);
    const auto sweep = sweep_csv(s);
    CHECK(std::count(sweep.begin(), sweep.end(), '\n') == 4);

    // A variable the source ignores for class leaves every verdict alone.
    const auto idle = manipulate_single(src, oracle, 5, o);
    CHECK(idle.tallies[0].nasal_vowel == idle.tallies[2].nasal_vowel);
    CHECK(idle.tallies[0].nasal_consonant == idle.tallies[2].nasal_consonant);

    CHECK_THROWS_AS(manipulate_single(src, oracle, 6, o), UsageError);
}

TEST_CASE("pair manipulation") {
    const PlantedSource src(2, 6, 1, 3);
    const SpectralOracleLabeler oracle;
    ManipulationOptions o;
    o.levels = {-2, 2};
    o.n_base = 8;
    o.seed = 5;
    const auto g = manipulate_pair(src, oracle, 1, 3, o);
    REQUIRE(g.cells.size() == 4);
    CHECK(g.cell(1, 0).proportion(Feature::nasal_vowel) == 1.0);
    CHECK(g.cell(1, 0).proportion(Feature::nasal_consonant) == 0.0);
    CHECK(g.cell(0, 1).proportion(Feature::nasal_consonant) == 1.0);
    CHECK(g.cell(1, 1).modal_class() == SyllableClass::NasalVN);
    CHECK(g.cell(0, 0).modal_class() == SyllableClass::VT);

    CHECK(transpose(manipulate_pair(src, oracle, 3, 1, o)) == g);
    CHECK(transpose(transpose(g)) == g);
    CHECK_THROWS_AS(manipulate_pair(src, oracle, 2, 2, o), UsageError);
}

TEST_CASE("constant generator gives identical cells") {
    ciwgan::CiwganConfig c;
    c.n_phi = 2;
    c.n_z = 6;
    c.audio_len = 4096;
    auto model = ciwgan::CiwganModel::create(c);
    for (auto& p : model.generator.parameters()) p.fill(0.0f);
    const GeneratorSource gen(model.generator, 2, 8000, "zero");
    CHECK(gen.n_z() == 6);
    const SpectralOracleLabeler oracle;
    ManipulationOptions o;
    o.levels = {-5, 0, 5};
    o.n_base = 3;
    const auto g = manipulate_pair(gen, oracle, 0, 1, o);
    for (const auto& cell : g.cells) CHECK(cell == g.cells[0]);
}

TEST_CASE("heatmaps") {
    CHECK(heat_color(Feature::nasal_vowel, 0.0) == Rgb{255, 255, 255});
    CHECK(heat_color(Feature::nasal_vowel, 1.0) == feature_color(Feature::nasal_vowel));
    CHECK(feature_color(Feature::nasal_vowel) == Rgb{0, 128, 0});
    CHECK(feature_color(Feature::nasal_consonant) == Rgb{192, 0, 0});

    const auto blank = grid_ppm(uniform_grid(3, 0), Feature::nasal_vowel, 2);
    const std::string header = "P6\n6 6\n255\n";
    REQUIRE(blank.size() == header.size() + 6 * 6 * 3);
    CHECK(std::string(blank.begin(), blank.begin() + static_cast<long>(header.size())) == header);
    CHECK(std::all_of(blank.begin() + static_cast<long>(header.size()), blank.end(), [](unsigned char b) { return b == 255; }));

    const auto full = grid_ppm(uniform_grid(3, 4), Feature::nasal_vowel, 2);
    for (std::size_t px = header.size(); px < full.size(); px += 3) {
        CHECK(full[px] == 0);
        CHECK(full[px + 1] == 128);
        CHECK(full[px + 2] == 0);
    }

    // One hot cell at (x = 2, y = 0) lands in the bottom-right corner.
    auto g = uniform_grid(3, 0);
    g.cells[2 * 3 + 0].nasal_vowel = 4;
    const auto img = grid_ppm(g, Feature::nasal_vowel, 1);
    const std::size_t h = header.size();
    CHECK(img[h + (2 * 3 + 2) * 3 + 1] == 128);
    CHECK(img[h + (0 * 3 + 2) * 3 + 1] == 255);

    const auto csv = grid_csv(uniform_grid(11, 2), Feature::nasal_vowel);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 122);
    CHECK(csv.rfind("x_level,y_level,proportion,modal_class\n", 0) == 0);

    testing::TempDir dir;
    export_heatmap(g, Feature::nasal_vowel, dir.path());
    CHECK(std::filesystem::exists(dir.path() / "grid_1_2_nasal_vowel.csv"));
    CHECK(std::filesystem::exists(dir.path() / "grid_1_2_nasal_vowel.ppm"));
}

TEST_CASE("a level equal to the base value reproduces the unmanipulated clip") {
    ciwgan::CiwganConfig c;
    c.n_phi = 2;
    c.n_z = 6;
    c.generator_channels = {8, 4};
    c.critic_channels = {4, 8};
    c.kernel = 8;
    c.seed = 21;
    const auto model = ciwgan::CiwganModel::create(c);
    const GeneratorSource gen(model.generator, 2, 8000, "random");
    const SpectralOracleLabeler oracle;
    ManipulationOptions o;
    o.n_base = 3;
    o.seed = 4;
    o.keep_clips = true;
    const auto bases = base_vectors(gen, o);
    for (std::size_t b = 0; b < bases.size(); ++b) {
        auto noop = o;
        noop.levels = {static_cast<double>(bases[b].z[2])};
        const auto sweep = manipulate_single(gen, oracle, 2, noop);
        const auto plain = gen.generate({bases[b]});
        CHECK(sweep.clips[0][b].samples() == plain[0].samples());
    }
}

namespace {

// Cheap clips that just carry the code.
class CodeSource final : public ClipSource {
public:
    std::size_t n_phi() const override { return 2; }
    std::size_t n_z() const override { return 5; }
    int sample_rate() const override { return 8000; }
    std::string id() const override { return "code"; }
    std::vector<audio::AudioClip> generate(const std::vector<ciwgan::LatentCode>& codes) const override {
        std::vector<audio::AudioClip> out;
        for (const auto& c : codes) out.emplace_back(std::vector<float>(c.z.begin(), c.z.end()), 8000);
        return out;
    }
};

// Pseudo-random verdicts from a hash of the samples, nasal vowel with
// probability `rate` whatever the clip says.
class CoinLabeler final : public TokenLabeler {
public:
    explicit CoinLabeler(double rate) : rate_(rate) {}
    int sample_rate() const override { return 8000; }
    std::string id() const override { return "coin"; }
    std::vector<detector::TokenLabel> label(const std::vector<audio::AudioClip>& clips) const override {
        std::vector<detector::TokenLabel> out;
        for (const auto& c : clips) {
            std::uint64_t h = 1469598103934665603ull;
            for (float s : c.samples()) {
                std::uint32_t bits;
                std::memcpy(&bits, &s, sizeof bits);
                h = (h ^ bits) * 1099511628211ull;
            }
            Rng rng(h);
            detector::TokenLabel l;
            l.nasal_vowel_present = rng.uniform01() < rate_;
            out.push_back(l);
        }
        return out;
    }

private:
    double rate_;
};

}  // namespace

TEST_CASE("labels independent of the code give the marginal rate at every level") {
    const CodeSource src;
    const CoinLabeler coin(0.3);
    ManipulationOptions o;
    o.n_base = 400;
    o.seed = 8;
    const auto sweep = manipulate_single(src, coin, 1, o);
    for (const auto& t : sweep.tallies) CHECK(t.proportion(Feature::nasal_vowel) == doctest::Approx(0.3).epsilon(0.35));
    const auto batch = label_batch(src, coin, 2000, 9);
    const auto report = chi_square_scores(batch, Feature::nasal_vowel);
    REQUIRE(report.scorable);
    // chi-square with one degree of freedom: 99.9% quantile is 10.83.
    for (const auto& v : report.variables) CHECK(v.chi_square < 10.83);
}
