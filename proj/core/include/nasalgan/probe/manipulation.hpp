#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "nasalgan/audio/audio_clip.hpp"
#include "nasalgan/probe/chi_square.hpp"
#include "nasalgan/probe/sources.hpp"

namespace nasalgan::probe {

/// -5, -4, ..., 5.
std::vector<double> default_levels();

struct ManipulationOptions {
    std::vector<double> levels = default_levels();
    std::size_t n_base = 100;
    std::uint64_t seed = 0;
    std::size_t phi_class = 0;  // every base vector uses this category
    bool keep_clips = false;
};

/// Verdict tallies over the n_base generations of one level or grid cell.
struct Tally {
    std::size_t n = 0;
    std::size_t nasal_vowel = 0;
    std::size_t nasal_consonant = 0;
    std::array<std::size_t, 4> classes{};  // indexed by SyllableClass

    void add(const detector::TokenLabel& label);
    double proportion(Feature f) const;
    /// Most frequent class; ties go to the lower class index.
    SyllableClass modal_class() const;
    friend bool operator==(const Tally&, const Tally&) = default;
};

/// The base vectors shared by all levels: fresh codes from the seed with phi
/// forced to options.phi_class.
std::vector<ciwgan::LatentCode> base_vectors(const ClipSource& source, const ManipulationOptions& options);

struct SingleSweep {
    std::size_t var = 0;
    std::vector<double> levels;
    std::size_t n_base = 0;
    std::vector<Tally> tallies;                       // per level
    std::vector<std::vector<audio::AudioClip>> clips;  // [level][base] when kept
};

/// Sets z[var] to each level on every base vector, generates and labels.
SingleSweep manipulate_single(const ClipSource& source, const TokenLabeler& labeler, std::size_t var,
                              const ManipulationOptions& options = {});

struct ManipulationGrid {
    std::size_t var_x = 0;
    std::size_t var_y = 0;
    std::vector<double> levels;
    std::size_t n_base = 0;
    std::vector<Tally> cells;  // cells[ix * levels.size() + iy]

    const Tally& cell(std::size_t ix, std::size_t iy) const { return cells[ix * levels.size() + iy]; }
    friend bool operator==(const ManipulationGrid&, const ManipulationGrid&) = default;
};

/// Every (level_x, level_y) combination on every base vector. Throws
/// UsageError when var_x == var_y.
ManipulationGrid manipulate_pair(const ClipSource& source, const TokenLabeler& labeler, std::size_t var_x,
                                 std::size_t var_y, const ManipulationOptions& options = {});

/// Swaps the roles of x and y.
ManipulationGrid transpose(const ManipulationGrid& grid);

}  // namespace nasalgan::probe
