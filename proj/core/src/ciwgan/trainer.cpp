#include "nasalgan/ciwgan/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include "nasalgan/error.hpp"
#include "nasalgan/nn/checkpoint.hpp"
#include "nasalgan/nn/losses.hpp"

namespace nasalgan::ciwgan {
namespace {

constexpr const char* kSidecar = "ciwgan.cfg";

// Real examples are drawn from a stream of per-epoch permutations; example k
// of the stream is perm(k / n)[k % n]. A partial batch wraps into the next
// epoch.
class RealStream {
public:
    RealStream(const std::vector<audio::AudioClip>& data, std::uint64_t seed) : data_(data), seed_(seed) {}

    nn::Tensor<float> batch(std::size_t first, std::size_t count) {
        const std::size_t n = data_.size();
        const std::size_t len = data_.front().size();
        nn::Tensor<float> t({count, 1, len});
        for (std::size_t b = 0; b < count; ++b) {
            const std::size_t k = first + b;
            const auto& perm = permutation(k / n);
            const auto& s = data_[perm[k % n]].samples();
            std::copy(s.begin(), s.end(), t.data() + b * len);
        }
        return t;
    }

private:
    const std::vector<std::size_t>& permutation(std::size_t epoch) {
        if (epoch != epoch_ || perm_.empty()) {
            perm_.resize(data_.size());
            std::iota(perm_.begin(), perm_.end(), std::size_t{0});
            Rng rng(derive_seed(derive_seed(seed_, "epoch"), epoch));
            rng.shuffle(perm_.begin(), perm_.end());
            epoch_ = epoch;
        }
        return perm_;
    }

    const std::vector<audio::AudioClip>& data_;
    std::uint64_t seed_;
    std::size_t epoch_ = 0;
    std::vector<std::size_t> perm_;
};

void check_finite(double v, const char* what, std::size_t step) {
    if (!std::isfinite(v)) throw NumericalError(std::string(what) + " is not finite at step " + std::to_string(step));
}

std::vector<std::size_t> categories(const std::vector<LatentCode>& codes) {
    std::vector<std::size_t> out;
    out.reserve(codes.size());
    for (const auto& c : codes) out.push_back(c.category());
    return out;
}

void validate_dataset(const CiwganConfig& config, const std::vector<audio::AudioClip>& dataset) {
    if (dataset.empty()) throw DataError("train: dataset is empty");
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (dataset[i].size() != config.audio_len)
            throw DataError("train: clip " + std::to_string(i) + " has " + std::to_string(dataset[i].size()) +
                            " samples, expected " + std::to_string(config.audio_len));
}

}  // namespace

TrainState TrainState::create(const CiwganConfig& config) {
    TrainState s;
    s.model = CiwganModel::create(config);
    s.generator_opt = nn::AdamState<float>(config.adam, s.model.generator.parameters());
    s.critic_opt = nn::AdamState<float>(config.adam, s.model.critic.parameters());
    s.qnet_opt = nn::AdamState<float>(config.adam, s.model.qnet.parameters());
    return s;
}

std::size_t steps_per_epoch(const CiwganConfig& config, std::size_t dataset_size) {
    const std::size_t per_step = config.batch_size * config.critic_iters;
    return std::max<std::size_t>(1, (dataset_size + per_step - 1) / per_step);
}

TrainReport train(TrainState& state, const std::vector<audio::AudioClip>& dataset, const TrainOptions& options) {
    const CiwganConfig& cfg = state.model.config;
    validate_dataset(cfg, dataset);
    const std::size_t target = options.steps ? *options.steps : cfg.epochs * steps_per_epoch(cfg, dataset.size());
    const std::size_t B = cfg.batch_size;
    const auto started = std::chrono::steady_clock::now();

    RealStream real_stream(dataset, derive_seed(cfg.seed, "data"));
    TrainReport report;
    std::vector<TrainRecord> pending;

    if (options.out_dir) std::filesystem::create_directories(*options.out_dir);
    auto flush = [&] {
        if (!options.out_dir) return;
        save_state(state, *options.out_dir);
        append_report_csv(pending, *options.out_dir / "train_report.csv");
        pending.clear();
    };

    while (state.step < target) {
        const std::size_t step = state.step;
        TrainRecord rec;
        rec.step = step + 1;
        try {
            // Work on copies so a failure leaves the last good step intact.
            TrainState next = state;
            auto& m = next.model;

            for (std::size_t i = 0; i < cfg.critic_iters; ++i) {
                const std::size_t first = (step * cfg.critic_iters + i) * B;
                const auto real = real_stream.batch(first, B);
                LatentSampler sampler(cfg.n_phi, cfg.n_z, derive_seed(cfg.seed, derive_seed(step, "critic_z"), i));
                const auto fake = m.generator.predict(to_tensor(sampler.take(B)));
                nn::CriticLossOptions opts;
                opts.lambda = cfg.gp_lambda;
                opts.seed = derive_seed(cfg.seed, derive_seed(step, "critic_gp"), i);
                auto cl = nn::wgan_gp_critic_loss(m.critic, real, fake, opts);
                check_finite(cl.loss, "critic loss", step);
                nn::adam_step(m.critic.parameters(), cl.grads, next.critic_opt);
                rec.critic_loss = cl.loss;
                rec.gp = cl.penalty;
            }

            LatentSampler sampler(cfg.n_phi, cfg.n_z, derive_seed(cfg.seed, step, 1));
            const auto codes = sampler.take(B);
            const auto gen_tape = m.generator.forward(to_tensor(codes));
            const auto& fake = gen_tape.output();

            nn::ForwardOptions shuffle;
            shuffle.shuffle_seed = derive_seed(cfg.seed, step, 2);
            const auto critic_tape = m.critic.forward(fake, shuffle);
            const auto& scores = critic_tape.output();
            double mean_score = 0;
            for (std::size_t b = 0; b < B; ++b) mean_score += scores.data()[b];
            mean_score /= static_cast<double>(B);
            nn::Tensor<float> score_grad(scores.shape());
            score_grad.fill(-1.0f / static_cast<float>(B));
            const auto grad_from_critic = m.critic.input_gradient(critic_tape, score_grad);

            const auto q_tape = m.qnet.forward(fake);
            const auto ce = nn::categorical_cross_entropy(q_tape.output(), categories(codes));
            check_finite(ce.loss, "Q loss", step);
            auto q_grads = m.qnet.zero_gradients();
            const auto grad_from_q = m.qnet.backward(q_tape, ce.grad, q_grads);

            nn::Tensor<float> fake_grad = grad_from_critic;
            const float w = static_cast<float>(cfg.q_weight);
            for (std::size_t k = 0; k < fake_grad.size(); ++k) fake_grad.data()[k] += w * grad_from_q.data()[k];
            auto g_grads = m.generator.zero_gradients();
            m.generator.backward(gen_tape, fake_grad, g_grads);

            rec.gen_loss = -mean_score;
            rec.q_loss = ce.loss;
            check_finite(rec.gen_loss, "generator loss", step);
            nn::adam_step(m.generator.parameters(), g_grads, next.generator_opt);
            nn::adam_step(m.qnet.parameters(), q_grads, next.qnet_opt);

            next.step = step + 1;
            state = std::move(next);
        } catch (const NumericalError& e) {
            report.aborted = true;
            report.diagnostic = e.what();
            break;
        }

        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        const bool last = state.step == target;
        if (cfg.report_interval != 0 && (state.step % cfg.report_interval == 0 || last)) {
            report.records.push_back(rec);
            pending.push_back(rec);
            if (options.on_record) options.on_record(rec);
        }
        if (cfg.checkpoint_interval != 0 && state.step % cfg.checkpoint_interval == 0 && !last) flush();
    }
    flush();
    return report;
}

void save_state(const TrainState& state, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    nn::save_checkpoint({"generator", state.model.generator, state.generator_opt}, dir / "generator.ckpt");
    nn::save_checkpoint({"critic", state.model.critic, state.critic_opt}, dir / "critic.ckpt");
    nn::save_checkpoint({"qnet", state.model.qnet, state.qnet_opt}, dir / "qnet.ckpt");
    auto kv = state.model.config.to_keyvalue();
    kv.set("step", static_cast<std::uint64_t>(state.step));
    kv.save(dir / kSidecar);
}

namespace {
nn::Checkpoint load_tagged(const std::filesystem::path& path, const std::string& tag) {
    auto ck = nn::load_checkpoint(path);
    if (ck.tag != tag) throw DataError(path.string() + ": expected a " + tag + " checkpoint, found '" + ck.tag + "'");
    return ck;
}

void check_shape(const nn::Network<float>& loaded, const nn::Network<float>& expected, const std::string& what) {
    if (loaded.layers() != expected.layers() || loaded.input_shape() != expected.input_shape())
        throw DataError(what + " checkpoint does not match the architecture in " + kSidecar);
}
}  // namespace

TrainState load_state(const std::filesystem::path& dir) {
    const auto kv = KeyValueFile::load(dir / kSidecar);
    const auto cfg = CiwganConfig::from_keyvalue(kv);
    TrainState s = TrainState::create(cfg);
    s.step = kv.get_uint("step");
    auto g = load_tagged(dir / "generator.ckpt", "generator");
    auto d = load_tagged(dir / "critic.ckpt", "critic");
    auto q = load_tagged(dir / "qnet.ckpt", "qnet");
    check_shape(g.network, s.model.generator, "generator");
    check_shape(d.network, s.model.critic, "critic");
    check_shape(q.network, s.model.qnet, "qnet");
    if (!g.optimizer || !d.optimizer || !q.optimizer) throw DataError(dir.string() + ": optimizer state missing");
    // Each generator step is one Adam update, so a save torn between files shows up here.
    if (g.optimizer->step != s.step || q.optimizer->step != s.step || d.optimizer->step != s.step * cfg.critic_iters)
        throw DataError(dir.string() + ": checkpoints disagree with the step in " + kSidecar);
    s.model.generator = std::move(g.network);
    s.model.critic = std::move(d.network);
    s.model.qnet = std::move(q.network);
    s.generator_opt = std::move(*g.optimizer);
    s.critic_opt = std::move(*d.optimizer);
    s.qnet_opt = std::move(*q.optimizer);
    return s;
}

CiwganModel load_model(const std::filesystem::path& dir) {
    const auto cfg = CiwganConfig::from_keyvalue(KeyValueFile::load(dir / kSidecar));
    CiwganModel m = CiwganModel::create(cfg);
    auto g = load_tagged(dir / "generator.ckpt", "generator");
    check_shape(g.network, m.generator, "generator");
    m.generator = std::move(g.network);
    if (std::filesystem::exists(dir / "qnet.ckpt")) {
        auto q = load_tagged(dir / "qnet.ckpt", "qnet");
        check_shape(q.network, m.qnet, "qnet");
        m.qnet = std::move(q.network);
    }
    if (std::filesystem::exists(dir / "critic.ckpt")) {
        auto d = load_tagged(dir / "critic.ckpt", "critic");
        check_shape(d.network, m.critic, "critic");
        m.critic = std::move(d.network);
    }
    return m;
}

void append_report_csv(const std::vector<TrainRecord>& records, const std::filesystem::path& path) {
    const bool fresh = !std::filesystem::exists(path);
    std::ofstream out(path, std::ios::app | std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    if (fresh) out << "step,critic_loss,gen_loss,q_loss,gp\n";
    for (const auto& r : records)
        out << r.step << ',' << format_double(r.critic_loss) << ',' << format_double(r.gen_loss) << ','
            << format_double(r.q_loss) << ',' << format_double(r.gp) << '\n';
}

}  // namespace nasalgan::ciwgan
