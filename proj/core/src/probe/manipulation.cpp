#include "nasalgan/probe/manipulation.hpp"

#include <algorithm>

#include "nasalgan/error.hpp"

namespace nasalgan::probe {
namespace {

void check_var(const ClipSource& source, std::size_t var) {
    if (var >= source.n_z())
        throw UsageError("latent variable z" + std::to_string(var) + " is out of range (n_z = " +
                         std::to_string(source.n_z()) + ")");
}

void check_options(const ClipSource& source, const ManipulationOptions& o) {
    if (o.levels.empty()) throw UsageError("manipulation needs at least one level");
    if (o.n_base == 0) throw UsageError("manipulation needs at least one base vector");
    if (o.phi_class >= source.n_phi())
        throw UsageError("phi class " + std::to_string(o.phi_class) + " is out of range (n_phi = " +
                         std::to_string(source.n_phi()) + ")");
}

}  // namespace

std::vector<double> default_levels() {
    std::vector<double> v;
    for (int k = -5; k <= 5; ++k) v.push_back(k);
    return v;
}

void Tally::add(const detector::TokenLabel& label) {
    ++n;
    nasal_vowel += label.nasal_vowel_present;
    nasal_consonant += label.nasal_consonant_present;
    ++classes[static_cast<std::size_t>(label.syllable_class())];
}

double Tally::proportion(Feature f) const {
    if (n == 0) return 0.0;
    return static_cast<double>(f == Feature::nasal_vowel ? nasal_vowel : nasal_consonant) / static_cast<double>(n);
}

SyllableClass Tally::modal_class() const {
    return kAllClasses[static_cast<std::size_t>(std::max_element(classes.begin(), classes.end()) - classes.begin())];
}

std::vector<ciwgan::LatentCode> base_vectors(const ClipSource& source, const ManipulationOptions& options) {
    check_options(source, options);
    ciwgan::LatentSampler sampler(source.n_phi(), source.n_z(), options.seed);
    auto codes = sampler.take(options.n_base);
    for (auto& c : codes) {
        std::fill(c.phi.begin(), c.phi.end(), 0.0f);
        c.phi[options.phi_class] = 1.0f;
    }
    return codes;
}

SingleSweep manipulate_single(const ClipSource& source, const TokenLabeler& labeler, std::size_t var,
                              const ManipulationOptions& options) {
    check_compatible(source, labeler);
    check_var(source, var);
    const auto base = base_vectors(source, options);
    SingleSweep s;
    s.var = var;
    s.levels = options.levels;
    s.n_base = options.n_base;
    for (double level : options.levels) {
        auto codes = base;
        for (auto& c : codes) c.z[var] = static_cast<float>(level);
        auto clips = source.generate(codes);
        Tally t;
        for (const auto& l : labeler.label(clips)) t.add(l);
        s.tallies.push_back(t);
        if (options.keep_clips) s.clips.push_back(std::move(clips));
    }
    return s;
}

ManipulationGrid manipulate_pair(const ClipSource& source, const TokenLabeler& labeler, std::size_t var_x,
                                 std::size_t var_y, const ManipulationOptions& options) {
    check_compatible(source, labeler);
    check_var(source, var_x);
    check_var(source, var_y);
    if (var_x == var_y) throw UsageError("manipulate_pair needs two different variables, got z" + std::to_string(var_x) + " twice");
    const auto base = base_vectors(source, options);
    ManipulationGrid g;
    g.var_x = var_x;
    g.var_y = var_y;
    g.levels = options.levels;
    g.n_base = options.n_base;
    for (double lx : options.levels) {
        for (double ly : options.levels) {
            auto codes = base;
            for (auto& c : codes) {
                c.z[var_x] = static_cast<float>(lx);
                c.z[var_y] = static_cast<float>(ly);
            }
            Tally t;
            for (const auto& l : labeler.label(source.generate(codes))) t.add(l);
            g.cells.push_back(t);
        }
    }
    return g;
}

ManipulationGrid transpose(const ManipulationGrid& grid) {
    ManipulationGrid t = grid;
    std::swap(t.var_x, t.var_y);
    const std::size_t L = grid.levels.size();
    for (std::size_t ix = 0; ix < L; ++ix)
        for (std::size_t iy = 0; iy < L; ++iy) t.cells[iy * L + ix] = grid.cells[ix * L + iy];
    return t;
}

}  // namespace nasalgan::probe
