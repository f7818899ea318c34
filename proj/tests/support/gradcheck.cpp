#include "gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace nasalgan::testing {

nn::Tensor<double> random_tensor(const nn::Shape& shape, Rng& rng, double scale) {
    nn::Tensor<double> t(shape);
    for (auto& v : t.values()) v = scale * rng.uniform(-1, 1);
    return t;
}

Params numeric_gradient(const std::function<double(const Params&)>& f,
                        const std::function<std::vector<bool>(const Params&)>& pattern, const Params& at,
                        double h, GradCheck& stats) {
    Params grad;
    Params p = at;
    const auto base = pattern(at);
    for (std::size_t t = 0; t < at.size(); ++t) {
        nn::Tensor<double> g(at[t].shape());
        for (std::size_t i = 0; i < at[t].size(); ++i) {
            const double x0 = at[t][i];
            double step = h;
            bool shrunk = false;
            while (true) {
                p[t][i] = x0 + step;
                const bool plus_ok = pattern(p) == base;
                p[t][i] = x0 - step;
                const bool minus_ok = pattern(p) == base;
                if ((plus_ok && minus_ok) || step < 1e-9) break;
                step /= 10;
                shrunk = true;
            }
            p[t][i] = x0 + step;
            const double fp = f(p);
            p[t][i] = x0 - step;
            const double fm = f(p);
            p[t][i] = x0;
            g[i] = (fp - fm) / (2 * step);
            ++stats.coordinates;
            stats.shrunk += shrunk;
        }
        grad.push_back(std::move(g));
    }
    return grad;
}

GradCheck compare(const Params& analytic, const Params& numeric, const std::vector<std::string>& names) {
    GradCheck r;
    for (std::size_t t = 0; t < analytic.size(); ++t) {
        double diff = 0, na = 0, nn_ = 0;
        for (std::size_t i = 0; i < analytic[t].size(); ++i) {
            const double a = analytic[t][i], n = numeric[t][i];
            diff += (a - n) * (a - n);
            na += a * a;
            nn_ += n * n;
        }
        // Floor keeps an exactly-zero gradient from being judged against roundoff.
        const double denom = std::max({std::sqrt(na), std::sqrt(nn_), 1e-6});
        const double rel = (diff == 0) ? 0.0 : std::sqrt(diff) / denom;
        if (rel >= r.max_rel_error) {
            r.max_rel_error = rel;
            r.worst = t < names.size() ? names[t] : "tensor " + std::to_string(t);
        }
    }
    return r;
}

std::vector<bool> leaky_pattern(const nn::Network<double>& net, const nn::Tensor<double>& input,
                                const nn::ForwardOptions& options) {
    std::vector<bool> out;
    const auto tape = net.forward(input, options);
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        if (net.layers()[l].kind != nn::LayerKind::leaky_relu) continue;
        for (double v : tape.activations[l].values()) out.push_back(v > 0);
    }
    return out;
}

namespace {

std::vector<std::string> param_names(const nn::Network<double>& net) {
    std::vector<std::string> names;
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        if (!net.layers()[l].has_params()) continue;
        const std::string kind(nn::to_string(net.layers()[l].kind));
        names.push_back("layer " + std::to_string(l) + " " + kind + " weight");
        names.push_back("layer " + std::to_string(l) + " " + kind + " bias");
    }
    return names;
}

nn::Network<double> with_params(const nn::Network<double>& net, const Params& p, std::size_t count) {
    auto copy = net;
    for (std::size_t i = 0; i < count; ++i) copy.parameters()[i] = p[i];
    return copy;
}

GradCheck merge(GradCheck a, const GradCheck& b) {
    if (b.max_rel_error >= a.max_rel_error) {
        a.max_rel_error = b.max_rel_error;
        a.worst = b.worst;
    }
    a.coordinates += b.coordinates;
    a.shrunk += b.shrunk;
    return a;
}

}  // namespace

GradCheck check_network(const nn::Network<double>& net, const nn::Tensor<double>& x, const nn::ForwardOptions& options,
                        std::uint64_t seed, double h) {
    Rng rng(seed);
    const auto probe_out = net.forward(x, options).output();
    const auto r = random_tensor(probe_out.shape(), rng);

    // Parameters and input are checked together: p = params..., x.
    const std::size_t np = net.parameters().size();
    Params at = net.parameters();
    at.push_back(x);
    auto f = [&](const Params& p) {
        return nn::dot(with_params(net, p, np).forward(p.back(), options).output(), r);
    };
    auto pattern = [&](const Params& p) { return leaky_pattern(with_params(net, p, np), p.back(), options); };

    auto grads = net.zero_gradients();
    const auto tape = net.forward(x, options);
    auto gx = net.backward(tape, r, grads);
    Params analytic = grads;
    analytic.push_back(gx);

    GradCheck stats;
    const auto numeric = numeric_gradient(f, pattern, at, h, stats);
    auto names = param_names(net);
    names.push_back("input");
    return merge(stats, compare(analytic, numeric, names));
}

GradCheck check_cross_entropy(const nn::Tensor<double>& logits, const std::vector<std::size_t>& targets, double h) {
    auto f = [&](const Params& p) { return nn::categorical_cross_entropy(p[0], targets).loss; };
    auto pattern = [](const Params&) { return std::vector<bool>{}; };
    GradCheck stats;
    const auto numeric = numeric_gradient(f, pattern, {logits}, h, stats);
    return merge(stats, compare({nn::categorical_cross_entropy(logits, targets).grad}, numeric, {"logits"}));
}

GradCheck check_critic_loss(const nn::Network<double>& critic, const nn::Tensor<double>& real,
                            const nn::Tensor<double>& fake, const nn::CriticLossOptions& options, double h) {
    const std::size_t np = critic.parameters().size();
    auto f = [&](const Params& p) { return nn::wgan_gp_critic_loss(with_params(critic, p, np), real, fake, options).loss; };
    // Rebuild the interpolates exactly as the loss does to track every kink.
    Rng rng(derive_seed(options.seed, 3));
    nn::Tensor<double> interp(real.shape());
    const std::size_t batch = real.dim(0), per = real.size() / batch;
    for (std::size_t b = 0; b < batch; ++b) {
        const double eps = rng.uniform01();
        for (std::size_t j = 0; j < per; ++j) interp[b * per + j] = eps * real[b * per + j] + (1 - eps) * fake[b * per + j];
    }
    auto fwd = [&](std::uint64_t tag) {
        nn::ForwardOptions o;
        if (options.phase_shuffle) o.shuffle_seed = derive_seed(options.seed, tag);
        return o;
    };
    auto pattern = [&](const Params& p) {
        const auto net = with_params(critic, p, np);
        auto a = leaky_pattern(net, real, fwd(1));
        const auto b = leaky_pattern(net, fake, fwd(2));
        const auto c = leaky_pattern(net, interp, fwd(4));
        a.insert(a.end(), b.begin(), b.end());
        a.insert(a.end(), c.begin(), c.end());
        return a;
    };
    GradCheck stats;
    const auto numeric = numeric_gradient(f, pattern, critic.parameters(), h, stats);
    const auto analytic = nn::wgan_gp_critic_loss(critic, real, fake, options).grads;
    return merge(stats, compare(analytic, numeric, param_names(critic)));
}

GradCheck check_tangent(const nn::Network<double>& net, const nn::Tensor<double>& x, const nn::Tensor<double>& v,
                        const nn::ForwardOptions& options, double h) {
    const auto dual = net.forward_tangent(x, v, options);
    auto shifted = [&](double s) {
        nn::Tensor<double> y = x;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * v[i];
        return y;
    };
    double step = h;
    const auto base = leaky_pattern(net, x, options);
    while (step > 1e-9 && (leaky_pattern(net, shifted(step), options) != base ||
                           leaky_pattern(net, shifted(-step), options) != base))
        step /= 10;
    const auto up = net.predict(shifted(step), options);
    const auto down = net.predict(shifted(-step), options);
    nn::Tensor<double> fd(up.shape());
    for (std::size_t i = 0; i < fd.size(); ++i) fd[i] = (up[i] - down[i]) / (2 * step);
    auto r = compare({dual.tangent_output()}, {fd}, {"tangent"});
    r.coordinates = 1;
    r.shrunk = step < h;
    return r;
}

RandomCase random_layer_case(nn::LayerKind kind, Rng& rng) {
    using nn::LayerSpec;
    RandomCase c;
    const std::size_t batch = 1 + rng.below(3);
    std::size_t ch = 1 + rng.below(3);
    std::size_t len = 4 + rng.below(9);
    LayerSpec spec;
    switch (kind) {
        case nn::LayerKind::dense:
            spec = LayerSpec::dense(ch * len, 1 + rng.below(5));
            len = 1;
            ch = spec.in_channels;
            break;
        case nn::LayerKind::conv1d: {
            const std::size_t k = 1 + rng.below(5), s = 1 + rng.below(3), p = rng.below(k);
            len = std::max(len, k);
            spec = LayerSpec::conv1d(ch, 1 + rng.below(3), k, s, p);
            break;
        }
        case nn::LayerKind::conv1d_transpose: {
            const std::size_t s = 1 + rng.below(3), k = s + rng.below(4), p = rng.below((k + 1) / 2);
            spec = LayerSpec::conv1d_transpose(ch, 1 + rng.below(3), k, s, p);
            break;
        }
        case nn::LayerKind::leaky_relu: spec = LayerSpec::leaky_relu(rng.uniform(0.05, 0.5)); break;
        case nn::LayerKind::tanh: spec = LayerSpec::tanh(); break;
        case nn::LayerKind::reshape: spec = LayerSpec::reshape(ch * len, 1); break;
        case nn::LayerKind::phase_shuffle:
            spec = LayerSpec::phase_shuffle(rng.below(std::min<std::size_t>(len, 4)));
            c.options.shuffle_seed = rng.next();
            break;
    }
    c.net = nn::Network<double>({ch, len}, {spec});
    c.net.initialize(rng.next());
    // Non-zero biases so they are exercised.
    for (auto& p : c.net.parameters())
        for (auto& v : p.values()) v += rng.uniform(-0.3, 0.3);
    c.input = random_tensor({batch, ch, len}, rng);
    c.label = std::string(nn::to_string(kind)) + " " + nn::shape_string({batch, ch, len});
    return c;
}

RandomCase random_composed_case(Rng& rng) {
    using nn::LayerSpec;
    RandomCase c;
    const std::size_t batch = 1 + rng.below(3), ch = 1 + rng.below(2), len = 8 + rng.below(8);
    const std::size_t k = 2 + rng.below(4), s = 1 + rng.below(2), hid = 2 + rng.below(3);
    std::vector<LayerSpec> layers;
    layers.push_back(LayerSpec::conv1d(ch, hid, k, s, (k - 1) / 2));
    auto shape = layers.back().output_shape({ch, len});
    layers.push_back(LayerSpec::leaky_relu(0.2));
    layers.push_back(LayerSpec::conv1d_transpose(hid, ch, 2 * s, s, s / 2));
    shape = layers.back().output_shape(shape);
    layers.push_back(LayerSpec::tanh());
    layers.push_back(LayerSpec::reshape(shape.size(), 1));
    layers.push_back(LayerSpec::dense(shape.size(), 1 + rng.below(3)));
    c.net = nn::Network<double>({ch, len}, layers);
    c.net.initialize(rng.next());
    c.input = random_tensor({batch, ch, len}, rng);
    c.label = "conv-leaky-convT-tanh-dense " + nn::shape_string({batch, ch, len});
    return c;
}

}  // namespace nasalgan::testing
