#include "nasalgan/ciwgan/config.hpp"

#include <sstream>

#include "nasalgan/error.hpp"

namespace nasalgan::ciwgan {

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw DataError("bad size list '" + s + "'");
        }
    }
    return out;
}

std::size_t CiwganConfig::base_length() const {
    std::size_t len = audio_len;
    for (std::size_t i = 0; i < generator_channels.size(); ++i) len /= stride;
    return len;
}

void CiwganConfig::validate() const {
    if (n_phi == 0 || n_z == 0) throw UsageError("ciwgan config: n_phi and n_z must be positive");
    if (generator_channels.empty() || critic_channels.size() != generator_channels.size())
        throw UsageError("ciwgan config: generator and critic need the same, non-zero layer count");
    if (stride < 1 || kernel < stride || (kernel - stride) % 2 != 0)
        throw UsageError("ciwgan config: kernel - stride must be a non-negative even number");
    std::size_t len = 1;
    for (std::size_t i = 0; i < generator_channels.size(); ++i) len *= stride;
    if (audio_len % len != 0 || audio_len / len == 0)
        throw UsageError("ciwgan config: audio_len must be a multiple of stride^layers");
    if (batch_size == 0 || critic_iters == 0) throw UsageError("ciwgan config: batch size and critic iters must be positive");
    if (phase_shuffle >= base_length() * stride) throw UsageError("ciwgan config: phase shuffle radius too large");
}

KeyValueFile CiwganConfig::to_keyvalue() const {
    KeyValueFile kv;
    kv.set("n_phi", static_cast<std::uint64_t>(n_phi));
    kv.set("n_z", static_cast<std::uint64_t>(n_z));
    kv.set("audio_len", static_cast<std::uint64_t>(audio_len));
    kv.set("sample_rate", sample_rate);
    kv.set("generator_channels", join_sizes(generator_channels));
    kv.set("critic_channels", join_sizes(critic_channels));
    kv.set("kernel", static_cast<std::uint64_t>(kernel));
    kv.set("stride", static_cast<std::uint64_t>(stride));
    kv.set("leaky_slope", leaky_slope);
    kv.set("phase_shuffle", static_cast<std::uint64_t>(phase_shuffle));
    kv.set("batch_size", static_cast<std::uint64_t>(batch_size));
    kv.set("gp_lambda", gp_lambda);
    kv.set("adam_alpha", adam.alpha);
    kv.set("adam_beta1", adam.beta1);
    kv.set("adam_beta2", adam.beta2);
    kv.set("adam_epsilon", adam.epsilon);
    kv.set("critic_iters", static_cast<std::uint64_t>(critic_iters));
    kv.set("q_weight", q_weight);
    kv.set("epochs", static_cast<std::uint64_t>(epochs));
    kv.set("checkpoint_interval", static_cast<std::uint64_t>(checkpoint_interval));
    kv.set("report_interval", static_cast<std::uint64_t>(report_interval));
    kv.set("seed", seed);
    return kv;
}

CiwganConfig CiwganConfig::from_keyvalue(const KeyValueFile& kv) {
    CiwganConfig c;
    auto size = [&kv](const char* key, std::size_t& field) {
        if (kv.contains(key)) field = static_cast<std::size_t>(kv.get_uint(key));
    };
    auto real = [&kv](const char* key, double& field) {
        if (kv.contains(key)) field = kv.get_double(key);
    };
    size("n_phi", c.n_phi);
    size("n_z", c.n_z);
    size("audio_len", c.audio_len);
    if (kv.contains("sample_rate")) c.sample_rate = static_cast<int>(kv.get_int("sample_rate"));
    if (kv.contains("generator_channels")) c.generator_channels = parse_sizes(kv.get("generator_channels"));
    if (kv.contains("critic_channels")) c.critic_channels = parse_sizes(kv.get("critic_channels"));
    size("kernel", c.kernel);
    size("stride", c.stride);
    real("leaky_slope", c.leaky_slope);
    size("phase_shuffle", c.phase_shuffle);
    size("batch_size", c.batch_size);
    real("gp_lambda", c.gp_lambda);
    real("adam_alpha", c.adam.alpha);
    real("adam_beta1", c.adam.beta1);
    real("adam_beta2", c.adam.beta2);
    real("adam_epsilon", c.adam.epsilon);
    size("critic_iters", c.critic_iters);
    real("q_weight", c.q_weight);
    size("epochs", c.epochs);
    size("checkpoint_interval", c.checkpoint_interval);
    size("report_interval", c.report_interval);
    if (kv.contains("seed")) c.seed = kv.get_uint("seed");
    return c;
}

std::vector<nn::LayerSpec> generator_layers(const CiwganConfig& c) {
    using nn::LayerSpec;
    c.validate();
    const auto& ch = c.generator_channels;
    std::vector<LayerSpec> layers{
        LayerSpec::dense(c.latent_size(), ch[0] * c.base_length()),
        LayerSpec::reshape(ch[0], c.base_length()),
        LayerSpec::leaky_relu(c.leaky_slope),
    };
    for (std::size_t i = 0; i < ch.size(); ++i) {
        const bool last = i + 1 == ch.size();
        const std::size_t out = last ? 1 : ch[i + 1];
        layers.push_back(LayerSpec::conv1d_transpose(ch[i], out, c.kernel, c.stride, c.padding()));
        layers.push_back(last ? LayerSpec::tanh() : LayerSpec::leaky_relu(c.leaky_slope));
    }
    return layers;
}

std::vector<nn::LayerSpec> critic_layers(const CiwganConfig& c, std::size_t outputs) {
    using nn::LayerSpec;
    c.validate();
    const auto& ch = c.critic_channels;
    std::vector<LayerSpec> layers;
    std::size_t in = 1;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        layers.push_back(LayerSpec::conv1d(in, ch[i], c.kernel, c.stride, c.padding()));
        layers.push_back(LayerSpec::leaky_relu(c.leaky_slope));
        if (i + 1 < ch.size() && c.phase_shuffle > 0) layers.push_back(LayerSpec::phase_shuffle(c.phase_shuffle));
        in = ch[i];
    }
    layers.push_back(LayerSpec::reshape(ch.back() * c.base_length(), 1));
    layers.push_back(LayerSpec::dense(ch.back() * c.base_length(), outputs));
    return layers;
}

}  // namespace nasalgan::ciwgan
