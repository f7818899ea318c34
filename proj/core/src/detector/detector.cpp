#include "nasalgan/detector/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "nasalgan/error.hpp"
#include "nasalgan/nn/checkpoint.hpp"
#include "nasalgan/nn/losses.hpp"
#include "nasalgan/random.hpp"

namespace nasalgan::detector {
namespace {

constexpr std::size_t kChunk = 256;
constexpr const char* kConfigFile = "detector.cfg";

struct HeadData {
    std::vector<std::size_t> frames;   // indices into LabeledFrames
    std::vector<std::size_t> targets;  // class per selected frame
    std::size_t classes = 0;
};

HeadData four_way_head(const LabeledFrames& f) {
    HeadData h;
    h.classes = kFrameClassCount;
    for (std::size_t i = 0; i < f.size(); ++i) {
        h.frames.push_back(i);
        h.targets.push_back(static_cast<std::size_t>(f.labels[i]));
    }
    return h;
}

bool is_vowel(FrameClass c) { return c == FrameClass::oral_vowel || c == FrameClass::nasal_vowel; }

HeadData vowel_head(const LabeledFrames& f) {
    HeadData h;
    h.classes = 2;
    for (std::size_t i = 0; i < f.size(); ++i) {
        h.frames.push_back(i);
        h.targets.push_back(is_vowel(f.labels[i]) ? 0 : 1);
    }
    return h;
}

// Nasal consonants are the only positives; nasal-vowel frames are left out.
HeadData nasal_head(const LabeledFrames& f) {
    HeadData h;
    h.classes = 2;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.labels[i] == FrameClass::nasal_vowel) continue;
        h.frames.push_back(i);
        h.targets.push_back(f.labels[i] == FrameClass::nasal_consonant ? 0 : 1);
    }
    return h;
}

void require_classes(Mode mode, const LabeledFrames& f) {
    std::array<std::size_t, kFrameClassCount> counts{};
    for (auto c : f.labels) ++counts[static_cast<std::size_t>(c)];
    auto missing = [&](FrameClass c) {
        throw DataError("detector training data has no '" + std::string(to_string(c)) + "' frames");
    };
    if (mode == Mode::four_way) {
        for (std::size_t c = 0; c < kFrameClassCount; ++c)
            if (counts[c] == 0) missing(static_cast<FrameClass>(c));
    } else {
        if (counts[0] + counts[1] == 0) missing(FrameClass::oral_vowel);
        if (counts[2] == 0) missing(FrameClass::nasal_consonant);
        if (counts[3] == 0) missing(FrameClass::other);
    }
}

nn::Network<float> train_head(const LabeledFrames& f, const HeadData& h, const DetectorConfig& cfg,
                              std::uint64_t seed, const std::function<void(const std::string&)>& log,
                              const std::string& name) {
    nn::Network<float> net({1, cfg.window}, detector_layers(cfg.window, h.classes));
    net.initialize(derive_seed(seed, "init"));
    nn::AdamState<float> opt(cfg.adam, net.parameters());
    const std::size_t n = h.frames.size();
    const std::size_t B = cfg.batch_size;
    std::vector<std::size_t> order(n);
    nn::Tensor<float> x({B, 1, cfg.window});
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Rng rng(derive_seed(derive_seed(seed, "epoch"), epoch));
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(order.begin(), order.end());
        double loss_sum = 0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start + B <= n; start += B) {
            std::vector<std::size_t> targets(B);
            for (std::size_t b = 0; b < B; ++b) {
                const std::size_t k = order[start + b];
                const float gain = static_cast<float>(rng.uniform(cfg.gain_min, cfg.gain_max));
                const float* src = f.window_data(h.frames[k]);
                float* dst = x.data() + b * cfg.window;
                for (std::size_t i = 0; i < cfg.window; ++i) dst[i] = gain * src[i];
                targets[b] = h.targets[k];
            }
            const auto tape = net.forward(x);
            const auto ce = nn::categorical_cross_entropy(tape.output(), targets);
            if (!std::isfinite(ce.loss)) throw NumericalError("detector loss is not finite in epoch " + std::to_string(epoch));
            auto grads = net.zero_gradients();
            net.backward(tape, ce.grad, grads);
            nn::adam_step(net.parameters(), grads, opt);
            loss_sum += ce.loss;
            ++batches;
        }
        if (log && batches) {
            std::ostringstream msg;
            msg.precision(4);
            msg << name << " epoch " << epoch + 1 << " loss " << loss_sum / static_cast<double>(batches);
            log(msg.str());
        }
    }
    return net;
}

std::vector<double> softmax_row(const float* logits, std::size_t k) {
    const float m = *std::max_element(logits, logits + k);
    std::vector<double> p(k);
    double sum = 0;
    for (std::size_t i = 0; i < k; ++i) sum += p[i] = std::exp(static_cast<double>(logits[i]) - m);
    for (auto& v : p) v /= sum;
    return p;
}

std::size_t argmax(const std::vector<double>& p) {
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::vector<std::string> head_names(Mode mode) {
    if (mode == Mode::four_way) return {"fourway"};
    return {"vowel", "nasal"};
}

}  // namespace

std::string_view to_string(Mode m) noexcept { return m == Mode::four_way ? "four_way" : "dual_binary"; }

Mode parse_mode(std::string_view s) {
    if (s == "four_way" || s == "four-way") return Mode::four_way;
    if (s == "dual_binary" || s == "dual-binary") return Mode::dual_binary;
    throw UsageError("unknown detector mode '" + std::string(s) + "' (expected four_way or dual_binary)");
}

void DetectorConfig::validate() const {
    if (window % 2 == 0) throw UsageError("detector window must be odd, got " + std::to_string(window));
    if (hop == 0 || batch_size == 0) throw UsageError("detector hop and batch_size must be positive");
    if (!(theta > 0 && theta <= 1)) throw UsageError("detector theta must be in (0, 1]");
    if (!(silence_rms >= 0)) throw UsageError("detector silence_rms must be non-negative");
    if (sample_rate <= 0) throw UsageError("detector sample_rate must be positive");
    if (!(gain_min > 0 && gain_min <= gain_max)) throw UsageError("detector gain range is invalid");
    detector_layers(window, 2);
}

KeyValueFile DetectorConfig::to_keyvalue() const {
    KeyValueFile kv;
    kv.set("detector.window", static_cast<std::uint64_t>(window));
    kv.set("detector.hop", static_cast<std::uint64_t>(hop));
    kv.set("detector.theta", theta);
    kv.set("detector.silence_rms", silence_rms);
    kv.set("detector.sample_rate", sample_rate);
    kv.set("detector.epochs", static_cast<std::uint64_t>(epochs));
    kv.set("detector.batch_size", static_cast<std::uint64_t>(batch_size));
    kv.set("detector.learning_rate", adam.alpha);
    kv.set("detector.beta1", adam.beta1);
    kv.set("detector.beta2", adam.beta2);
    kv.set("detector.epsilon", adam.epsilon);
    kv.set("detector.gain_min", gain_min);
    kv.set("detector.gain_max", gain_max);
    kv.set("detector.seed", seed);
    return kv;
}

DetectorConfig DetectorConfig::from_keyvalue(const KeyValueFile& kv) {
    DetectorConfig c;
    auto u = [&](const char* k, std::size_t& v) { if (kv.contains(k)) v = kv.get_uint(k); };
    auto d = [&](const char* k, double& v) { if (kv.contains(k)) v = kv.get_double(k); };
    u("detector.window", c.window);
    u("detector.hop", c.hop);
    d("detector.theta", c.theta);
    d("detector.silence_rms", c.silence_rms);
    if (kv.contains("detector.sample_rate")) c.sample_rate = static_cast<int>(kv.get_int("detector.sample_rate"));
    u("detector.epochs", c.epochs);
    u("detector.batch_size", c.batch_size);
    d("detector.learning_rate", c.adam.alpha);
    d("detector.beta1", c.adam.beta1);
    d("detector.beta2", c.adam.beta2);
    d("detector.epsilon", c.adam.epsilon);
    d("detector.gain_min", c.gain_min);
    d("detector.gain_max", c.gain_max);
    if (kv.contains("detector.seed")) c.seed = kv.get_uint("detector.seed");
    c.validate();
    return c;
}

std::vector<nn::LayerSpec> detector_layers(std::size_t window, std::size_t outputs) {
    struct Conv { std::size_t out, kernel, stride; };
    constexpr Conv convs[] = {{8, 9, 4}, {16, 9, 4}, {16, 5, 2}, {16, 5, 2}};
    std::vector<nn::LayerSpec> layers;
    nn::FeatureShape shape{1, window};
    for (const auto& c : convs) {
        if (shape.length < c.kernel) throw UsageError("detector window " + std::to_string(window) + " is too short");
        layers.push_back(nn::LayerSpec::conv1d(shape.channels, c.out, c.kernel, c.stride, 0));
        shape = layers.back().output_shape(shape);
        layers.push_back(nn::LayerSpec::leaky_relu(0.2));
    }
    layers.push_back(nn::LayerSpec::reshape(shape.size(), 1));
    layers.push_back(nn::LayerSpec::dense(shape.size(), outputs));
    return layers;
}

DetectorModel train_detector(Mode mode, const LabeledFrames& frames, const DetectorConfig& config,
                             const std::function<void(const std::string&)>& log) {
    config.validate();
    if (frames.window != config.window)
        throw UsageError("training windows have " + std::to_string(frames.window) + " samples, config expects " +
                         std::to_string(config.window));
    require_classes(mode, frames);
    DetectorModel m;
    m.config = config;
    m.mode = mode;
    if (mode == Mode::four_way) {
        m.heads.push_back(train_head(frames, four_way_head(frames), config, derive_seed(config.seed, "fourway"), log, "fourway"));
    } else {
        m.heads.push_back(train_head(frames, vowel_head(frames), config, derive_seed(config.seed, "vowel"), log, "vowel"));
        m.heads.push_back(train_head(frames, nasal_head(frames), config, derive_seed(config.seed, "nasal"), log, "nasal"));
    }
    return m;
}

std::vector<FramePosterior> classify_windows(const DetectorModel& model, const float* windows, std::size_t n) {
    const std::size_t W = model.config.window;
    std::vector<FramePosterior> out(n);
    for (std::size_t start = 0; start < n; start += kChunk) {
        const std::size_t count = std::min(kChunk, n - start);
        nn::Tensor<float> x({count, 1, W}, std::vector<float>(windows + start * W, windows + (start + count) * W));
        for (const auto& head : model.heads) {
            const auto logits = head.predict(x);
            const std::size_t k = logits.dim(1);
            for (std::size_t b = 0; b < count; ++b) out[start + b].heads.push_back(softmax_row(logits.data() + b * k, k));
        }
    }
    return out;
}

FramePosterior classify_center(const DetectorModel& model, const audio::AudioClip& window) {
    if (window.size() != model.config.window)
        throw UsageError("classify_center: window has " + std::to_string(window.size()) + " samples, model expects " +
                         std::to_string(model.config.window));
    return classify_windows(model, window.samples().data(), 1).front();
}

FrameClass frame_class(const DetectorModel& model, const FramePosterior& p) {
    if (model.mode == Mode::four_way) return static_cast<FrameClass>(argmax(p.heads.at(0)));
    const bool vowel = argmax(p.heads.at(0)) == 0;
    const bool nasal = argmax(p.heads.at(1)) == 0;
    if (vowel) return nasal ? FrameClass::nasal_vowel : FrameClass::oral_vowel;
    return nasal ? FrameClass::nasal_consonant : FrameClass::other;
}

namespace {
struct VoicedFrames {
    std::vector<float> windows;
    std::vector<std::size_t> centers;
};

VoicedFrames voiced_frames(const DetectorModel& model, const audio::AudioClip& clip) {
    const auto& cfg = model.config;
    if (clip.sample_rate() != cfg.sample_rate)
        throw UsageError("label_token: clip is at " + std::to_string(clip.sample_rate()) + " Hz, detector expects " +
                         std::to_string(cfg.sample_rate) + " Hz");
    if (clip.size() < cfg.window)
        throw UsageError("label_token: clip has " + std::to_string(clip.size()) + " samples, shorter than one window");
    VoicedFrames v;
    for (std::size_t c : frame_centers(clip.size(), cfg.hop)) {
        if (frame_rms(clip, c, cfg.hop) < cfg.silence_rms) continue;
        v.centers.push_back(c);
        v.windows.resize(v.windows.size() + cfg.window);
        extract_window(clip, c, cfg.window, v.windows.data() + v.windows.size() - cfg.window);
    }
    return v;
}
}  // namespace

TokenLabel label_token(const DetectorModel& model, const audio::AudioClip& clip) {
    const auto v = voiced_frames(model, clip);
    TokenLabel label;
    label.voiced_frames = v.centers.size();
    if (v.centers.empty()) {
        label.silent = true;
        return label;
    }
    const auto post = classify_windows(model, v.windows.data(), v.centers.size());
    std::size_t nv = 0, nc = 0;
    for (const auto& p : post) {
        const auto c = frame_class(model, p);
        nv += c == FrameClass::nasal_vowel;
        nc += c == FrameClass::nasal_consonant;
    }
    const double need = model.config.theta * static_cast<double>(v.centers.size());
    label.nasal_vowel_present = static_cast<double>(nv) >= need;
    label.nasal_consonant_present = static_cast<double>(nc) >= need;
    return label;
}

Evaluation evaluate(const DetectorModel& model, const std::vector<SyntheticToken>& tokens) {
    Evaluation e;
    std::size_t frames = 0, frame_hits = 0, token_hits = 0;
    std::vector<std::size_t> head_hits(model.heads.size(), 0), head_total(model.heads.size(), 0);
    for (const auto& t : tokens) {
        const auto v = voiced_frames(model, t.clip);
        const auto post = classify_windows(model, v.windows.data(), v.centers.size());
        std::size_t nv = 0, nc = 0;
        for (std::size_t i = 0; i < post.size(); ++i) {
            const auto truth = sample_label(t.layout, t.cls, v.centers[i]);
            const auto pred = frame_class(model, post[i]);
            ++e.frame_confusion[static_cast<std::size_t>(truth)][static_cast<std::size_t>(pred)];
            frame_hits += truth == pred;
            ++frames;
            nv += pred == FrameClass::nasal_vowel;
            nc += pred == FrameClass::nasal_consonant;
            if (model.mode == Mode::four_way) {
                head_hits[0] += truth == pred;
                ++head_total[0];
            } else {
                head_hits[0] += (argmax(post[i].heads[0]) == 0) == is_vowel(truth);
                ++head_total[0];
                const bool nasal_truth = truth == FrameClass::nasal_vowel || truth == FrameClass::nasal_consonant;
                head_hits[1] += (argmax(post[i].heads[1]) == 0) == nasal_truth;
                ++head_total[1];
            }
        }
        const double need = model.config.theta * static_cast<double>(post.size());
        const auto pred_cls = post.empty() ? SyllableClass::VT
                                           : make_class(static_cast<double>(nv) >= need, static_cast<double>(nc) >= need);
        ++e.token_confusion[static_cast<std::size_t>(t.cls)][static_cast<std::size_t>(pred_cls)];
        token_hits += pred_cls == t.cls;
    }
    e.frame_accuracy = frames ? static_cast<double>(frame_hits) / static_cast<double>(frames) : 0.0;
    e.token_accuracy = tokens.empty() ? 0.0 : static_cast<double>(token_hits) / static_cast<double>(tokens.size());
    for (std::size_t h = 0; h < head_hits.size(); ++h)
        e.head_accuracy.push_back(head_total[h] ? static_cast<double>(head_hits[h]) / static_cast<double>(head_total[h]) : 0.0);
    return e;
}

std::string evaluation_csv(const Evaluation& e) {
    std::ostringstream out;
    out << "metric,value\n";
    out << "frame_accuracy," << format_double(e.frame_accuracy) << '\n';
    out << "token_accuracy," << format_double(e.token_accuracy) << '\n';
    for (std::size_t h = 0; h < e.head_accuracy.size(); ++h)
        out << "head" << h << "_accuracy," << format_double(e.head_accuracy[h]) << '\n';
    out << "\nframe_truth,oral_vowel,nasal_vowel,nasal_consonant,other\n";
    for (std::size_t t = 0; t < kFrameClassCount; ++t) {
        out << to_string(static_cast<FrameClass>(t));
        for (auto v : e.frame_confusion[t]) out << ',' << v;
        out << '\n';
    }
    out << "\ntoken_truth,VT,VN,V~T,V~N\n";
    for (std::size_t t = 0; t < 4; ++t) {
        out << to_string(kAllClasses[t]);
        for (auto v : e.token_confusion[t]) out << ',' << v;
        out << '\n';
    }
    return out.str();
}

void save_detector(const DetectorModel& model, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto kv = model.config.to_keyvalue();
    kv.set("detector.mode", std::string(to_string(model.mode)));
    kv.save(dir / kConfigFile);
    const auto names = head_names(model.mode);
    for (std::size_t h = 0; h < model.heads.size(); ++h)
        nn::save_checkpoint({"detector_" + names[h], model.heads[h], std::nullopt}, dir / (names[h] + ".ckpt"));
}

DetectorModel load_detector(const std::filesystem::path& dir) {
    const auto kv = KeyValueFile::load(dir / kConfigFile);
    DetectorModel m;
    m.config = DetectorConfig::from_keyvalue(kv);
    m.mode = parse_mode(kv.get("detector.mode"));
    for (const auto& name : head_names(m.mode)) {
        auto ck = nn::load_checkpoint(dir / (name + ".ckpt"));
        if (ck.tag != "detector_" + name) throw DataError((dir / (name + ".ckpt")).string() + ": unexpected tag '" + ck.tag + "'");
        if (ck.network.input_shape() != nn::FeatureShape{1, m.config.window})
            throw DataError((dir / (name + ".ckpt")).string() + ": input does not match the configured window");
        m.heads.push_back(std::move(ck.network));
    }
    return m;
}

std::string labels_csv(const std::vector<NamedLabel>& labels) {
    std::ostringstream out;
    out << "clip,nasal_vowel,nasal_consonant,class\n";
    for (const auto& l : labels)
        out << l.clip << ',' << (l.label.nasal_vowel_present ? 1 : 0) << ',' << (l.label.nasal_consonant_present ? 1 : 0)
            << ',' << to_string(l.label.syllable_class()) << '\n';
    return out.str();
}

}  // namespace nasalgan::detector
