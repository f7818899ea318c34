#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "nasalgan/audio/audio_clip.hpp"
#include "nasalgan/audio/synth.hpp"
#include "nasalgan/ciwgan/config.hpp"
#include "nasalgan/ciwgan/latent.hpp"
#include "nasalgan/ciwgan/model.hpp"
#include "nasalgan/ciwgan/trainer.hpp"
#include "nasalgan/corpus/corpus_reader.hpp"
#include "nasalgan/corpus/manifest.hpp"
#include "nasalgan/corpus/phone_classes.hpp"
#include "nasalgan/detector/detector.hpp"
#include "nasalgan/detector/frames.hpp"
#include "nasalgan/error.hpp"
#include "nasalgan/probe/chi_square.hpp"
#include "nasalgan/probe/manipulation.hpp"
#include "nasalgan/probe/report.hpp"
#include "nasalgan/probe/sources.hpp"

namespace nasalgan::cli {

namespace fs = std::filesystem;

namespace {

std::string token_name(std::size_t i) {
    std::ostringstream s;
    s << "tokens/tok_";
    s.width(5);
    s.fill('0');
    s << i << ".wav";
    return s.str();
}

std::string padded(std::size_t i, int width = 5) {
    std::string s = std::to_string(i);
    return std::string(s.size() < static_cast<std::size_t>(width) ? width - s.size() : 0, '0') + s;
}

std::string short_num(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

SyllableClass class_named(const std::string& name) {
    const auto c = parse_syllable_class(name);
    if (!c) throw UsageError("unknown syllable class '" + name + "' (VT, VN, V~T, V~N)");
    return *c;
}

std::map<SyllableClass, std::size_t> class_counts(const std::string& text) {
    std::map<SyllableClass, std::size_t> out;
    for (const auto& [name, n] : parse_counts(text)) out[class_named(name)] = n;
    return out;
}

void require_file(const fs::path& path, const std::string& what) {
    if (!fs::exists(path)) throw DataError("missing " + what + ": " + path.string());
}

// Config keys as the command sees them: detector keys lose their prefix.
std::string strip_detector(const std::string& key) {
    const std::string prefix = "detector.";
    return key.rfind(prefix, 0) == 0 ? key.substr(prefix.size()) : key;
}

std::vector<Param> params_from(const KeyValueFile& defaults, const std::string& help) {
    std::vector<Param> out;
    for (const auto& [key, value] : defaults.entries()) out.push_back({strip_detector(key), value, help});
    return out;
}

detector::DetectorConfig detector_config(const Run& run) {
    const auto defaults = detector::DetectorConfig{}.to_keyvalue();
    KeyValueFile kv;
    for (const auto& [key, value] : defaults.entries()) kv.set(key, run.str(strip_detector(key)));
    auto c = as_usage([&] { return detector::DetectorConfig::from_keyvalue(kv); });
    c.validate();
    return c;
}

ciwgan::CiwganConfig gan_config(const Run& run) {
    const auto defaults = ciwgan::CiwganConfig{}.to_keyvalue();
    KeyValueFile kv;
    for (const auto& [key, value] : defaults.entries()) kv.set(key, run.str(key));
    auto c = as_usage([&] { return ciwgan::CiwganConfig::from_keyvalue(kv); });
    c.validate();
    return c;
}

// ---- synth ----

void synth_body(const Run& run) {
    const auto counts = class_counts(run.str("counts"));
    audio::SynthVariation var;
    var.formant_jitter = run.real("formant_jitter");
    var.f0_jitter = run.real("f0_jitter");
    var.duration_jitter = run.real("duration_jitter");
    const int rate = static_cast<int>(run.uint("sample_rate"));
    const auto tokens = detector::synth_corpus_counts(counts, run.uint("seed"), rate, run.uint("length"), var);

    corpus::DatasetManifest manifest;
    std::ostringstream labels;
    labels << "file,class,vowel_begin,vowel_end,coda_begin,coda_end,burst_begin\n";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto& t = tokens[i];
        const std::string file = token_name(i);
        write_atomic(run.out / file, audio::encode_wav(t.clip));
        manifest.entries.push_back({file, t.cls, "synth", corpus::WordPosition::monosyllabic,
                                    has_nasal_vowel(t.cls) ? "a~" : "a", has_nasal_coda(t.cls) ? "n" : "t"});
        const auto& l = t.layout;
        labels << file << ',' << to_string(t.cls) << ',' << l.vowel_begin << ',' << l.vowel_end << ','
               << l.coda_begin << ',' << l.coda_end << ',' << l.burst_begin << '\n';
    }
    write_atomic(run.out / "labels.csv", labels.str());
    write_atomic(run.out / "manifest.csv", corpus::manifest_to_csv(manifest));
    run.log("wrote " + std::to_string(tokens.size()) + " tokens");
}

Command synth_command() {
    audio::SynthVariation v;
    return {"synth",
            "Render a synthetic syllable corpus with ground-truth segment labels",
            {{"seed", "0", "root seed"},
             {"counts", "VT=100,VN=100,V~T=100,V~N=100", "tokens per class, CLASS=N list"},
             {"sample_rate", "8000", "Hz"},
             {"length", "4096", "samples per token"},
             {"formant_jitter", format_double(v.formant_jitter), "relative formant jitter"},
             {"f0_jitter", format_double(v.f0_jitter), "relative f0 jitter"},
             {"duration_jitter", format_double(v.duration_jitter), "relative duration jitter"}},
            {},
            synth_body};
}

// ---- extract ----

void extract_body(const Run& run) {
    const std::string& p = run.str("preset");
    const auto classes = fs::is_regular_file(p) ? corpus::parse_phone_classes(read_text(p)) : corpus::preset(p);
    corpus::ExtractConfig cfg;
    cfg.fixed_len = run.uint("length");
    cfg.target_rate = static_cast<int>(run.uint("sample_rate"));
    const fs::path dir = run.str("corpus");
    if (!fs::is_directory(dir)) throw DataError("corpus directory not found: " + dir.string());
    const auto ex = corpus::extract_corpus(dir, classes, cfg);
    corpus::write_extraction(ex, run.out);

    std::ostringstream skipped;
    skipped << "source,word_index,reason\n";
    for (const auto& s : ex.skipped) skipped << s.source_utterance << ',' << s.word_index << ',' << s.reason << '\n';
    write_atomic(run.out / "skipped.csv", skipped.str());
    std::ostringstream excluded;
    excluded << "utterance\n";
    for (const auto& u : ex.excluded_utterances) excluded << u << '\n';
    write_atomic(run.out / "excluded.csv", excluded.str());

    std::string summary;
    for (const auto& [cls, n] : ex.manifest.counts()) summary += " " + std::string(to_string(cls)) + "=" + std::to_string(n);
    run.log("extracted" + summary + "; skipped " + std::to_string(ex.skipped.size()) + ", excluded " +
            std::to_string(ex.excluded_utterances.size()) + " utterances");
}

Command extract_command() {
    return {"extract",
            "Cut CVC-final syllable tokens out of an aligned corpus",
            {{"corpus", "", "corpus directory (TIMIT layout or alignment.csv export)", true},
             {"preset", "english", "phone classes: english, french or a class file"},
             {"sample_rate", "8000", "target rate, Hz"},
             {"length", "4096", "samples per token"}},
            {},
            extract_body};
}

// ---- balance ----

void balance_body(const Run& run) {
    const fs::path src = run.str("manifest");
    require_file(src, "manifest");
    const auto manifest = corpus::read_manifest(src);
    std::optional<std::set<std::string>> vowels;
    if (!run.str("vowels").empty()) {
        const auto list = split_list(run.str("vowels"));
        vowels = std::set<std::string>(list.begin(), list.end());
    }
    const auto result = corpus::balance_dataset(manifest, class_counts(run.str("targets")), vowels, run.uint("seed"));

    // Copy each distinct source token once; oversampled entries share it.
    std::map<std::string, std::string> copied;
    corpus::DatasetManifest out;
    for (const auto& e : result.manifest.entries) {
        auto it = copied.find(e.file);
        if (it == copied.end()) {
            const std::string name = token_name(copied.size());
            const auto bytes = audio::encode_wav(audio::load_wav(src.parent_path() / e.file));
            write_atomic(run.out / name, bytes);
            it = copied.emplace(e.file, name).first;
        }
        auto entry = e;
        entry.file = it->second;
        out.entries.push_back(std::move(entry));
    }
    write_atomic(run.out / "manifest.csv", corpus::manifest_to_csv(out));
    std::ostringstream factors;
    factors << "class,count,oversampling\n";
    const auto counts = out.counts();
    for (const auto& [cls, f] : result.oversampling)
        factors << to_string(cls) << ',' << (counts.contains(cls) ? counts.at(cls) : 0) << ',' << format_double(f) << '\n';
    write_atomic(run.out / "balance.csv", factors.str());
    for (const auto& [cls, f] : result.oversampling)
        run.log(std::string(to_string(cls)) + ": oversampling factor " + format_double(f));
}

Command balance_command() {
    return {"balance",
            "Resample a manifest to exact per-class counts",
            {{"manifest", "", "source manifest.csv", true},
             {"targets", "VT=5570,VN=5570", "CLASS=N list"},
             {"vowels", "", "keep only these vowel labels (comma list)"},
             {"seed", "0", "root seed"}},
            {},
            balance_body};
}

// ---- train-detector ----

std::vector<detector::SyntheticToken> read_labeled_tokens(const fs::path& dir, int rate) {
    const fs::path labels = dir / "labels.csv";
    require_file(labels, "ground-truth labels (run synth first)");
    std::istringstream in(read_text(labels));
    std::string line;
    std::getline(in, line);
    std::vector<detector::SyntheticToken> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto f = split_list(line);
        if (f.size() != 7) throw DataError(labels.string() + ":" + std::to_string(row) + ": expected 7 fields");
        detector::SyntheticToken t;
        t.clip = audio::load_wav(dir / f[0]);
        if (t.clip.sample_rate() != rate)
            throw DataError(f[0] + " is at " + std::to_string(t.clip.sample_rate()) + " Hz, detector expects " +
                            std::to_string(rate));
        const auto cls = parse_syllable_class(f[1]);
        if (!cls) throw DataError(labels.string() + ":" + std::to_string(row) + ": unknown class '" + f[1] + "'");
        t.cls = *cls;
        try {
            t.layout = {std::stoul(f[2]), std::stoul(f[3]), std::stoul(f[4]), std::stoul(f[5]), std::stoul(f[6])};
        } catch (const std::logic_error&) {
            throw DataError(labels.string() + ":" + std::to_string(row) + ": bad sample index");
        }
        out.push_back(std::move(t));
    }
    if (out.empty()) throw DataError(labels.string() + " lists no tokens");
    return out;
}

void train_detector_body(const Run& run) {
    const auto cfg = detector_config(run);
    const auto mode = detector::parse_mode(run.str("mode"));

    std::optional<detector::DetectorModel> model;
    if (fs::exists(run.out / "detector.cfg")) {
        auto existing = detector::load_detector(run.out);
        if (existing.config == cfg && existing.mode == mode) {
            run.log("detector already trained; reusing it");
            model = std::move(existing);
        }
    }
    if (!model) {
        const auto tokens = read_labeled_tokens(run.str("data"), cfg.sample_rate);
        const auto frames = detector::collect_frames(tokens, cfg.window, cfg.hop, cfg.silence_rms);
        run.log("training " + std::string(to_string(mode)) + " on " + std::to_string(frames.size()) + " frames");
        model = detector::train_detector(mode, frames, cfg, run.log);
        detector::save_detector(*model, run.out);
    }
    if (!run.str("holdout").empty()) {
        const auto held = read_labeled_tokens(run.str("holdout"), cfg.sample_rate);
        const auto e = detector::evaluate(*model, held);
        write_atomic(run.out / "evaluation.csv", detector::evaluation_csv(e));
        run.log("held-out frame accuracy " + short_num(e.frame_accuracy) + ", token accuracy " +
                short_num(e.token_accuracy));
    }
}

Command train_detector_command() {
    std::vector<Param> params{{"data", "", "synth output directory for training", true},
                              {"holdout", "", "synth output directory for evaluation"},
                              {"mode", "four_way", "four_way or dual_binary"}};
    for (auto& p : params_from(detector::DetectorConfig{}.to_keyvalue(), "detector setting")) params.push_back(p);
    return {"train-detector", "Train the frame-level nasality detector", params, {}, train_detector_body};
}

// ---- train-gan ----

std::vector<audio::AudioClip> read_dataset(const fs::path& dir, const ciwgan::CiwganConfig& cfg) {
    const fs::path m = dir / "manifest.csv";
    require_file(m, "training manifest");
    const auto manifest = corpus::read_manifest(m);
    if (manifest.entries.empty()) throw DataError(m.string() + " lists no tokens");
    std::map<std::string, audio::AudioClip> cache;
    std::vector<audio::AudioClip> out;
    out.reserve(manifest.entries.size());
    for (const auto& e : manifest.entries) {
        auto it = cache.find(e.file);
        if (it == cache.end()) {
            auto clip = audio::load_wav(dir / e.file);
            if (clip.sample_rate() != cfg.sample_rate)
                throw DataError(e.file + " is at " + std::to_string(clip.sample_rate()) + " Hz, expected " +
                                std::to_string(cfg.sample_rate));
            if (clip.size() != cfg.audio_len)
                throw DataError(e.file + " has " + std::to_string(clip.size()) + " samples, expected " +
                                std::to_string(cfg.audio_len));
            it = cache.emplace(e.file, std::move(clip)).first;
        }
        out.push_back(it->second);
    }
    return out;
}

void train_gan_body(const Run& run) {
    const auto cfg = gan_config(run);
    const auto data = read_dataset(run.str("data"), cfg);

    ciwgan::TrainState state;
    if (fs::exists(run.out / "ciwgan.cfg")) {
        state = ciwgan::load_state(run.out);
        auto loaded = state.model.config;
        loaded.epochs = cfg.epochs;
        if (!(loaded == cfg)) throw UsageError(run.out.string() + " holds a model with a different configuration");
        state.model.config = cfg;
        run.log("resuming at step " + std::to_string(state.step));
    } else {
        state = ciwgan::TrainState::create(cfg);
    }

    ciwgan::TrainOptions opts;
    if (!run.str("steps").empty()) opts.steps = run.uint("steps");
    opts.out_dir = run.out;
    opts.on_record = [&](const ciwgan::TrainRecord& r) {
        run.log("step " + std::to_string(r.step) + " critic " + short_num(r.critic_loss) + " gen " +
                short_num(r.gen_loss) + " q " + short_num(r.q_loss) + " gp " + short_num(r.gp));
    };
    const std::size_t target = opts.steps ? *opts.steps : cfg.epochs * ciwgan::steps_per_epoch(cfg, data.size());
    if (state.step > target)
        throw UsageError("checkpoint is at step " + std::to_string(state.step) + ", past the requested " +
                         std::to_string(target));
    run.log("training " + std::to_string(target - state.step) + " steps on " + std::to_string(data.size()) + " clips");
    const auto report = ciwgan::train(state, data, opts);
    if (report.aborted) throw NumericalError(report.diagnostic + " (last good step " + std::to_string(state.step) + " saved)");
}

Command train_gan_command() {
    std::vector<Param> params{{"data", "", "directory with manifest.csv and its tokens", true},
                              {"steps", "", "generator steps (overrides epochs)"}};
    for (auto& p : params_from(ciwgan::CiwganConfig{}.to_keyvalue(), "ciwGAN setting")) params.push_back(p);
    return {"train-gan", "Train the ciwGAN generator, critic and Q-network", params, {"steps", "epochs"},
            train_gan_body};
}

// ---- generate ----

std::string codes_csv(const std::vector<ciwgan::LatentCode>& codes, const std::vector<std::string>& names) {
    std::ostringstream out;
    out << "clip,category";
    const std::size_t nz = codes.empty() ? 0 : codes[0].z.size();
    for (std::size_t j = 0; j < nz; ++j) out << ",z" << j;
    out << '\n';
    for (std::size_t i = 0; i < codes.size(); ++i) {
        out << names[i] << ',' << codes[i].category();
        for (float v : codes[i].z) out << ',' << format_double(v);
        out << '\n';
    }
    return out.str();
}

void generate_body(const Run& run) {
    const fs::path model_dir = run.str("model");
    require_file(model_dir / "generator.ckpt", "generator checkpoint (run train-gan first)");
    const auto model = ciwgan::load_model(model_dir);
    const std::size_t n = run.uint("n");
    if (n == 0) throw UsageError("-n must be at least 1");
    auto codes = ciwgan::LatentSampler(model.config.n_phi, model.config.n_z, run.uint("seed")).take(n);
    if (!run.str("category").empty()) {
        const std::size_t k = run.uint("category");
        if (k >= model.config.n_phi) throw UsageError("--category must be below n_phi = " + std::to_string(model.config.n_phi));
        for (auto& c : codes) c = ciwgan::make_code(model.config.n_phi, k, c.z);
    }
    std::vector<std::string> names;
    constexpr std::size_t chunk = 256;
    for (std::size_t start = 0; start < n; start += chunk) {
        const std::vector<ciwgan::LatentCode> part(codes.begin() + static_cast<long>(start),
                                                   codes.begin() + static_cast<long>(std::min(n, start + chunk)));
        const auto clips = ciwgan::generate(model.generator, part, model.config.sample_rate);
        for (std::size_t i = 0; i < clips.size(); ++i) {
            names.push_back("clips/gen_" + padded(start + i) + ".wav");
            write_atomic(run.out / names.back(), audio::encode_wav(clips[i]));
        }
    }
    write_atomic(run.out / "codes.csv", codes_csv(codes, names));
    run.log("generated " + std::to_string(n) + " clips");
}

Command generate_command() {
    return {"generate",
            "Generate clips from a trained generator",
            {{"model", "", "train-gan output directory", true},
             {"n", "3840", "number of clips"},
             {"seed", "0", "root seed for the latent codes"},
             {"category", "", "fix phi to this category (default: random)"}},
            {},
            generate_body};
}

// ---- probe ----

std::vector<double> parse_levels(const std::string& text) {
    std::vector<double> out;
    for (const auto& s : split_list(text)) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(s, &used));
            if (used != s.size()) throw std::invalid_argument(s);
        } catch (const std::logic_error&) {
            throw UsageError("bad level '" + s + "'");
        }
    }
    if (out.empty()) throw UsageError("--levels is empty");
    return out;
}

std::size_t parse_var(const std::string& s) {
    std::string t = s;
    if (!t.empty() && t[0] == 'z') t = t.substr(1);
    try {
        std::size_t used = 0;
        const auto v = std::stoull(t, &used);
        if (used != t.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw UsageError("bad latent variable '" + s + "'");
    }
}

std::string batch_csv(const probe::LabeledBatch& b) {
    std::ostringstream out;
    out << "index,category,nasal_vowel,nasal_consonant,class";
    const std::size_t nz = b.codes.empty() ? 0 : b.codes[0].z.size();
    for (std::size_t j = 0; j < nz; ++j) out << ",z" << j;
    out << '\n';
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto& l = b.labels[i];
        out << i << ',' << b.codes[i].category() << ',' << l.nasal_vowel_present << ',' << l.nasal_consonant_present
            << ',' << to_string(l.syllable_class());
        for (float v : b.codes[i].z) out << ',' << format_double(v);
        out << '\n';
    }
    return out.str();
}

void probe_body(const Run& run) {
    const fs::path gen_dir = run.str("generator");
    const fs::path det_dir = run.str("detector");
    require_file(gen_dir / "generator.ckpt", "generator checkpoint (run train-gan first)");
    require_file(det_dir / "detector.cfg", "detector (run train-detector first)");
    const auto model = ciwgan::load_model(gen_dir);
    const auto det = detector::load_detector(det_dir);
    if (model.config.sample_rate != det.config.sample_rate)
        throw DataError("generator produces " + std::to_string(model.config.sample_rate) + " Hz audio but the detector expects " +
                        std::to_string(det.config.sample_rate) + " Hz");
    const probe::GeneratorSource source(model.generator, model.config.n_phi, model.config.sample_rate, gen_dir.string());
    const probe::DetectorLabeler labeler(det, det_dir.string());

    if (!fs::exists(run.out / "report.csv") || !fs::exists(run.out / "covariance.csv")) {
        const auto batch = probe::label_batch(source, labeler, run.uint("n"), run.uint("seed"));
        probe::ChiSquareOptions co;
        co.top_k = run.uint("top_k");
        co.include_phi = run.flag("include_phi");
        std::vector<probe::ChiSquareReport> reports;
        for (auto f : {probe::Feature::nasal_vowel, probe::Feature::nasal_consonant}) {
            reports.push_back(probe::chi_square_scores(batch, f, co));
            const auto& r = reports.back();
            if (!r.scorable) {
                run.log(std::string(to_string(f)) + ": " + r.note);
                continue;
            }
            std::string top;
            for (std::size_t i = 0; i < std::min<std::size_t>(co.top_k, r.ranking.size()); ++i)
                top += " " + r.variables[r.ranking[i]].name;
            run.log(std::string(to_string(f)) + " top:" + top);
        }
        write_atomic(run.out / "batch.csv", batch_csv(batch));
        write_atomic(run.out / "covariance.csv", probe::covariance_csv(probe::covariance_check(batch)));
        write_atomic(run.out / "report.csv", probe::chi_square_csv(reports));
    } else {
        run.log("report already present; skipping the labeled batch");
    }

    probe::ManipulationOptions mo;
    mo.levels = parse_levels(run.str("levels"));
    mo.n_base = run.uint("n_base");
    mo.seed = derive_seed(run.uint("seed"), "manipulation");
    mo.phi_class = run.uint("phi_class");
    mo.keep_clips = run.flag("keep_clips");
    if (mo.phi_class >= model.config.n_phi) throw UsageError("--phi-class must be below n_phi");

    for (const auto& s : split_list(run.str("sweep"))) {
        const std::size_t var = parse_var(s);
        const fs::path csv = run.out / ("sweep_z" + std::to_string(var) + ".csv");
        if (fs::exists(csv)) continue;
        const auto sweep = probe::manipulate_single(source, labeler, var, mo);
        if (mo.keep_clips)
            for (std::size_t l = 0; l < sweep.clips.size(); ++l)
                for (std::size_t b = 0; b < sweep.clips[l].size(); ++b)
                    write_atomic(run.out / "clips" / ("sweep_z" + std::to_string(var)) /
                                     ("level" + padded(l, 2) + "_base" + padded(b, 3) + ".wav"),
                                 audio::encode_wav(sweep.clips[l][b]));
        write_atomic(csv, probe::sweep_csv(sweep));
        run.log("swept z" + std::to_string(var));
    }

    for (const auto& p : split_list(run.str("pairs"))) {
        const auto parts = split_list(p, ':');
        if (parts.size() != 2) throw UsageError("pairs are written X:Y, got '" + p + "'");
        const std::size_t x = parse_var(parts[0]), y = parse_var(parts[1]);
        const std::string stem = "grid_" + std::to_string(x) + "_" + std::to_string(y) + "_";
        if (fs::exists(run.out / (stem + "nasal_consonant.ppm"))) continue;
        const auto grid = probe::manipulate_pair(source, labeler, x, y, mo);
        for (auto f : {probe::Feature::nasal_vowel, probe::Feature::nasal_consonant}) {
            const std::string name = stem + std::string(to_string(f));
            write_atomic(run.out / (name + ".csv"), probe::grid_csv(grid, f));
            write_atomic(run.out / (name + ".ppm"), probe::grid_ppm(grid, f));
        }
        run.log("grid z" + std::to_string(x) + " x z" + std::to_string(y) + " done");
    }
}

Command probe_command() {
    return {"probe",
            "Score latent variables against detected nasality and manipulate them",
            {{"generator", "", "train-gan output directory", true},
             {"detector", "", "train-detector output directory", true},
             {"n", "3840", "generated clips for the chi-square report"},
             {"seed", "0", "root seed"},
             {"top_k", "7", "variables marked in the report"},
             {"include_phi", "false", "score the categorical code too"},
             {"sweep", "", "z indices to sweep one at a time, comma list"},
             {"pairs", "", "z index pairs for grids, X:Y comma list"},
             {"levels", "-5,-4,-3,-2,-1,0,1,2,3,4,5", "manipulation levels"},
             {"n_base", "100", "base latent vectors per level or cell"},
             {"phi_class", "0", "category held fixed while manipulating"},
             {"keep_clips", "false", "archive sweep clips under clips/"}},
            {},
            probe_body};
}

}  // namespace

std::vector<Command> all_commands() {
    return {synth_command(),        extract_command(),   balance_command(), train_detector_command(),
            train_gan_command(),    generate_command(),  probe_command()};
}

}  // namespace nasalgan::cli
