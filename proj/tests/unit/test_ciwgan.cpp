#include <cmath>
#include <algorithm>
#include <filesystem>

#include "doctest.h"
#include "nasalgan/audio/synth.hpp"
#include "nasalgan/ciwgan/config.hpp"
#include "nasalgan/ciwgan/latent.hpp"
#include "nasalgan/ciwgan/model.hpp"
#include "nasalgan/ciwgan/trainer.hpp"
#include "nasalgan/error.hpp"
#include "test_support.hpp"

using namespace nasalgan;
using namespace nasalgan::ciwgan;

namespace {

CiwganConfig small_config() {
    CiwganConfig c;
    c.n_phi = 2;
    c.n_z = 6;
    c.audio_len = 256;
    c.generator_channels = {8, 4};
    c.critic_channels = {4, 8};
    c.kernel = 8;
    c.stride = 4;
    c.phase_shuffle = 1;
    c.batch_size = 4;
    c.critic_iters = 2;
    c.report_interval = 1;
    c.checkpoint_interval = 0;
    c.seed = 77;
    return c;
}

std::vector<audio::AudioClip> toy_dataset(std::size_t n, std::size_t len) {
    std::vector<audio::AudioClip> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<float> s(len);
        for (std::size_t t = 0; t < len; ++t)
            s[t] = 0.5f * static_cast<float>(std::sin(0.05 * static_cast<double>((i % 5 + 1) * t)));
        out.emplace_back(std::move(s), 8000);
    }
    return out;
}

}  // namespace

TEST_CASE("latent sampling") {
    Rng rng(1);
    const std::size_t n = 100000;
    double sum = 0, sq = 0;
    std::vector<std::size_t> cats(3, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = sample_latent(3, 4, rng);
        REQUIRE(c.phi.size() == 3);
        REQUIRE(c.z.size() == 4);
        ++cats[c.category()];
        for (float v : c.z) {
            CHECK_MESSAGE((v > -1.0f && v < 1.0f), "z outside (-1, 1)");
            sum += v;
            sq += static_cast<double>(v) * v;
        }
    }
    const double m = sum / (4.0 * n), var = sq / (4.0 * n) - m * m;
    // Uniform(-1, 1): mean 0, variance 1/3; 3 sigma of the sample mean is
    // 3 * sqrt(1/3 / 4e5).
    CHECK(std::abs(m) < 3 * std::sqrt(1.0 / 3.0 / (4.0 * n)));
    CHECK(var == doctest::Approx(1.0 / 3.0).epsilon(0.01));
    for (auto k : cats) CHECK(std::abs(static_cast<double>(k) - n / 3.0) < 3 * std::sqrt(n * (1 / 3.0) * (2 / 3.0)));

    LatentSampler a(3, 4, 9), b(3, 4, 9);
    CHECK(a.take(20) == b.take(20));
    CHECK_THROWS_AS(make_code(2, 2, {0.0f}), UsageError);
    CHECK_THROWS_AS((LatentCode{{1, 1}, {0}}.category()), UsageError);
    const auto t = to_tensor({make_code(2, 1, {0.5f, -0.5f})});
    CHECK(t.shape() == nn::Shape{1, 4, 1});
    CHECK(t.values() == std::vector<float>{0, 1, 0.5f, -0.5f});
}

TEST_CASE("config validation and keyvalue round trip") {
    CiwganConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.base_length() == 4);
    CHECK(c.padding() == 10);
    c.epochs = 649;
    CHECK_NOTHROW(c.validate());
    CHECK(CiwganConfig::from_keyvalue(c.to_keyvalue()) == c);
    auto bad = c;
    bad.audio_len = 4000;
    CHECK_THROWS_AS(bad.validate(), UsageError);
    bad = c;
    bad.kernel = 25;
    CHECK_THROWS_AS(bad.validate(), UsageError);
    bad = c;
    bad.critic_channels = {4, 8};
    CHECK_THROWS_AS(bad.validate(), UsageError);
    bad = c;
    bad.n_phi = 0;
    CHECK_THROWS_AS(bad.validate(), UsageError);
    CHECK(parse_sizes(join_sizes({3, 1, 4})) == std::vector<std::size_t>{3, 1, 4});
    CHECK_THROWS_AS(parse_sizes("3,x"), DataError);
}

TEST_CASE("generation") {
    const auto model = CiwganModel::create(small_config());
    const auto cfg = model.config;
    for (float v : {-5.0f, 5.0f, 0.0f}) {
        const auto code = make_code(2, 1, std::vector<float>(cfg.n_z, v));
        const auto clip = generate(model.generator, code, cfg.sample_rate);
        CHECK(clip.size() == cfg.audio_len);
        CHECK(clip.sample_rate() == 8000);
        for (float s : clip.samples()) CHECK_MESSAGE(std::abs(s) <= 1.0f, "sample out of range");
        CHECK(generate(model.generator, code, cfg.sample_rate).samples() == clip.samples());
    }
    CHECK_THROWS_AS(generate(model.generator, make_code(2, 0, {0.0f}), 8000), UsageError);

    const auto one = generate_batch(model, 1, 5);
    CHECK(one.size() == 1);
    const auto many = generate_batch(model, 3840, 5);
    REQUIRE(many.size() == 3840);
    CHECK(many[0].first == one[0].first);
    CHECK(many[0].second.samples() == one[0].second.samples());
    CHECK(many[3839].second.size() == cfg.audio_len);
    CHECK_THROWS_AS(generate_batch(model, 0, 5), UsageError);

    CHECK(CiwganModel::create(small_config()) == model);
}

TEST_CASE("fresh Q-network is near chance") {
    CiwganConfig c;
    c.n_phi = 3;
    const auto model = CiwganModel::create(c);
    const double q = q_loss(model, 64, 3);
    CHECK(q == doctest::Approx(std::log(3.0)).epsilon(0.10));
}

TEST_CASE("training") {
    const auto cfg = small_config();
    const auto data = toy_dataset(24, cfg.audio_len);

    SUBCASE("steps per epoch") {
        CHECK(steps_per_epoch(cfg, 24) == 3);
        CHECK(steps_per_epoch(cfg, 25) == 4);
        CHECK(steps_per_epoch(cfg, 1) == 1);
    }
    SUBCASE("zero steps leaves initialization") {
        auto st = TrainState::create(cfg);
        const auto report = train(st, data, TrainOptions{0, std::nullopt, {}});
        CHECK(report.records.empty());
        CHECK(st.model == CiwganModel::create(cfg));
        CHECK(st.step == 0);
    }
    SUBCASE("resume follows the uninterrupted run") {
        auto straight = TrainState::create(cfg);
        const auto r = train(straight, data, TrainOptions{4, std::nullopt, {}});
        CHECK_FALSE(r.aborted);
        CHECK(r.records.size() == 4);
        CHECK(straight.step == 4);
        CHECK_FALSE(straight.model == CiwganModel::create(cfg));

        testing::TempDir dir;
        auto first = TrainState::create(cfg);
        train(first, data, TrainOptions{2, dir.path(), {}});
        for (const char* f : {"generator.ckpt", "critic.ckpt", "qnet.ckpt", "ciwgan.cfg", "train_report.csv"})
            CHECK(std::filesystem::exists(dir.path() / f));
        auto resumed = load_state(dir.path());
        CHECK(resumed == first);
        train(resumed, data, TrainOptions{4, dir.path(), {}});
        CHECK(resumed == straight);
        CHECK(load_model(dir.path()) == straight.model);

        const auto csv = testing::read_file(dir.path() / "train_report.csv");
        CHECK(csv.rfind("step,critic_loss,gen_loss,q_loss,gp\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    }
    SUBCASE("epochs drive the step count") {
        auto c = cfg;
        c.epochs = 2;
        auto st = TrainState::create(c);
        train(st, data);
        CHECK(st.step == 6);
    }
    SUBCASE("bad data") {
        auto st = TrainState::create(cfg);
        CHECK_THROWS_AS(train(st, {}), DataError);
        CHECK_THROWS_AS(train(st, toy_dataset(4, 100)), DataError);
        auto poisoned = data;
        for (auto& clip : poisoned) clip.samples()[3] = NAN;
        const auto before = st;
        const auto r = train(st, poisoned, TrainOptions{2, std::nullopt, {}});
        CHECK(r.aborted);
        CHECK_FALSE(r.diagnostic.empty());
        CHECK(st == before);
    }
    SUBCASE("missing checkpoint") {
        testing::TempDir dir;
        CHECK_THROWS_AS(load_state(dir.path()), DataError);
    }
    SUBCASE("a checkpoint set from different steps is refused") {
        testing::TempDir dir;
        auto st = TrainState::create(cfg);
        train(st, data, TrainOptions{2, dir.path(), {}});
        auto kv = KeyValueFile::load(dir.path() / "ciwgan.cfg");
        kv.set("step", std::uint64_t{1});
        kv.save(dir.path() / "ciwgan.cfg");
        CHECK_THROWS_AS(load_state(dir.path()), DataError);
        CHECK_FALSE(std::filesystem::exists(dir.path() / "generator.ckpt.partial"));
    }
}
