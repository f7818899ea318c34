#include <benchmark/benchmark.h>

#include "nasalgan/audio/spectrogram.hpp"
#include "nasalgan/audio/synth.hpp"
#include "nasalgan/ciwgan/latent.hpp"
#include "nasalgan/ciwgan/model.hpp"
#include "nasalgan/detector/detector.hpp"
#include "nasalgan/detector/frames.hpp"
#include "nasalgan/nn/layers.hpp"
#include "nasalgan/nn/losses.hpp"
#include "nasalgan/random.hpp"

using namespace nasalgan;

namespace {

nn::Tensor<float> noise(std::vector<std::size_t> shape, std::uint64_t seed) {
    nn::Tensor<float> t(std::move(shape));
    Rng rng(seed);
    for (auto& v : t.values()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
    return t;
}

// Critic-sized strided convolution: 16 x 1 x 4096 through kernel 24, stride 4.
void BM_Conv1dForward(benchmark::State& state) {
    const std::size_t cin = static_cast<std::size_t>(state.range(0)), cout = 2 * cin;
    const auto x = noise({16, cin, 4096 / cin}, 1);
    const auto w = noise({cout, cin, 24}, 2);
    const auto b = noise({cout}, 3);
    for (auto _ : state) benchmark::DoNotOptimize(nn::conv1d_forward(x, w, &b, 4, 10));
}
BENCHMARK(BM_Conv1dForward)->Arg(1)->Arg(4)->Arg(16);

void BM_Conv1dTransposeForward(benchmark::State& state) {
    const std::size_t cin = static_cast<std::size_t>(state.range(0)), cout = cin / 2;
    const auto x = noise({16, cin, 4096 / (4 * cout)}, 1);
    const auto w = noise({cin, cout, 24}, 2);
    const auto b = noise({cout}, 3);
    for (auto _ : state) benchmark::DoNotOptimize(nn::conv1d_transpose_forward(x, w, &b, 4, 10));
}
BENCHMARK(BM_Conv1dTransposeForward)->Arg(8)->Arg(32);

ciwgan::CiwganModel default_model() {
    ciwgan::CiwganConfig c;
    c.n_phi = 2;
    c.n_z = 98;
    return ciwgan::CiwganModel::create(c);
}

void BM_GeneratorForward(benchmark::State& state) {
    const auto model = default_model();
    ciwgan::LatentSampler sampler(2, 98, 5);
    const auto z = ciwgan::to_tensor(sampler.take(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(model.generator.predict(z));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GeneratorForward)->Arg(1)->Arg(16)->Unit(benchmark::kMillisecond);

// One WGAN-GP critic update's loss and gradients at batch 16.
void BM_CriticLoss(benchmark::State& state) {
    const auto model = default_model();
    const auto real = noise({16, 1, 4096}, 6);
    const auto fake = noise({16, 1, 4096}, 7);
    nn::CriticLossOptions o;
    o.lambda = 10;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        o.seed = ++seed;
        benchmark::DoNotOptimize(nn::wgan_gp_critic_loss(model.critic, real, fake, o));
    }
}
BENCHMARK(BM_CriticLoss)->Unit(benchmark::kMillisecond);

void BM_Stft(benchmark::State& state) {
    const auto tokens = detector::synth_corpus({SyllableClass::NasalVN}, 1, 8);
    const auto window = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(audio::stft(tokens[0].clip, window, window / 4));
}
BENCHMARK(BM_Stft)->Arg(256)->Arg(512);

// Labeling cost does not depend on the weights, so an untrained detector will do.
void BM_LabelToken(benchmark::State& state) {
    detector::DetectorModel m;
    m.mode = state.range(0) ? detector::Mode::dual_binary : detector::Mode::four_way;
    for (std::size_t h = 0; h < (state.range(0) ? 2u : 1u); ++h) {
        nn::Network<float> net({1, m.config.window}, detector::detector_layers(m.config.window, state.range(0) ? 2 : 4));
        net.initialize(h + 1);
        m.heads.push_back(std::move(net));
    }
    const auto tokens = detector::synth_corpus({SyllableClass::VN}, 1, 9);
    for (auto _ : state) benchmark::DoNotOptimize(detector::label_token(m, tokens[0].clip));
}
BENCHMARK(BM_LabelToken)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
