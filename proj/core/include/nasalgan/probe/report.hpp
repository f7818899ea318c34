#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nasalgan/probe/chi_square.hpp"
#include "nasalgan/probe/manipulation.hpp"

namespace nasalgan::probe {

/// `feature,variable,chi_square,point_biserial,rank,top,low_expected` for
/// every scorable report; unscorable targets get a single row with empty scores.
std::string chi_square_csv(const std::vector<ChiSquareReport>& reports);

/// `level,n,nasal_vowel,nasal_consonant,modal_class`.
std::string sweep_csv(const SingleSweep& sweep);

/// `x_level,y_level,proportion,modal_class`, x-major.
std::string grid_csv(const ManipulationGrid& grid, Feature feature);

/// 2x2 table and conditional rate.
std::string covariance_csv(const CovarianceSummary& s);

using Rgb = std::array<std::uint8_t, 3>;

/// Full-intensity color of each feature's heatmap.
Rgb feature_color(Feature feature) noexcept;

/// White at proportion 0, linear to the feature color at 1.
Rgb heat_color(Feature feature, double proportion) noexcept;

/// Binary PPM (P6); each cell is cell_px square, x increases to the right and
/// y increases upward.
std::vector<unsigned char> grid_ppm(const ManipulationGrid& grid, Feature feature, std::size_t cell_px = 16);

/// grid_<x>_<y>_<feature>.csv and .ppm in `dir`.
void export_heatmap(const ManipulationGrid& grid, Feature feature, const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);

}  // namespace nasalgan::probe
