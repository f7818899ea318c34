#include "nasalgan/probe/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nasalgan/error.hpp"
#include "nasalgan/keyvalue.hpp"

namespace nasalgan::probe {

std::string chi_square_csv(const std::vector<ChiSquareReport>& reports) {
    std::ostringstream out;
    out << "feature,variable,chi_square,point_biserial,rank,top,low_expected\n";
    for (const auto& r : reports) {
        if (!r.scorable) {
            out << to_string(r.target) << ",,,,,,\n";
            continue;
        }
        for (std::size_t pos : r.ranking) {
            const auto& v = r.variables[pos];
            out << to_string(r.target) << ',' << v.name << ',' << format_double(v.chi_square) << ','
                << format_double(v.point_biserial) << ',' << v.rank << ',' << (v.top ? 1 : 0) << ','
                << (v.low_expected ? 1 : 0) << '\n';
        }
    }
    return out.str();
}

std::string sweep_csv(const SingleSweep& s) {
    std::ostringstream out;
    out << "level,n,nasal_vowel,nasal_consonant,modal_class\n";
    for (std::size_t i = 0; i < s.levels.size(); ++i) {
        const auto& t = s.tallies[i];
        out << format_double(s.levels[i]) << ',' << t.n << ',' << format_double(t.proportion(Feature::nasal_vowel)) << ','
            << format_double(t.proportion(Feature::nasal_consonant)) << ',' << to_string(t.modal_class()) << '\n';
    }
    return out.str();
}

std::string grid_csv(const ManipulationGrid& g, Feature feature) {
    std::ostringstream out;
    out << "x_level,y_level,proportion,modal_class\n";
    const std::size_t L = g.levels.size();
    for (std::size_t ix = 0; ix < L; ++ix)
        for (std::size_t iy = 0; iy < L; ++iy) {
            const auto& t = g.cell(ix, iy);
            out << format_double(g.levels[ix]) << ',' << format_double(g.levels[iy]) << ','
                << format_double(t.proportion(feature)) << ',' << to_string(t.modal_class()) << '\n';
        }
    return out.str();
}

std::string covariance_csv(const CovarianceSummary& s) {
    std::ostringstream out;
    out << "nasal_vowel,nasal_consonant,count\n";
    for (int v = 0; v < 2; ++v)
        for (int c = 0; c < 2; ++c) out << v << ',' << c << ',' << s.table[v][c] << '\n';
    out << "\nconsonant_given_vowel,"
        << (s.consonant_given_vowel ? format_double(*s.consonant_given_vowel) : std::string("undefined")) << '\n';
    out << "consonant_rate," << format_double(s.consonant_rate) << '\n';
    return out.str();
}

Rgb feature_color(Feature feature) noexcept {
    return feature == Feature::nasal_vowel ? Rgb{0, 128, 0} : Rgb{192, 0, 0};
}

Rgb heat_color(Feature feature, double p) noexcept {
    p = std::clamp(p, 0.0, 1.0);
    const Rgb full = feature_color(feature);
    Rgb out{};
    for (std::size_t k = 0; k < 3; ++k)
        out[k] = static_cast<std::uint8_t>(std::lround(255.0 + (static_cast<double>(full[k]) - 255.0) * p));
    return out;
}

std::vector<unsigned char> grid_ppm(const ManipulationGrid& g, Feature feature, std::size_t cell_px) {
    if (cell_px == 0) throw UsageError("heatmap cell size must be positive");
    const std::size_t L = g.levels.size();
    const std::size_t side = L * cell_px;
    const std::string header = "P6\n" + std::to_string(side) + " " + std::to_string(side) + "\n255\n";
    std::vector<unsigned char> bytes(header.begin(), header.end());
    bytes.reserve(bytes.size() + side * side * 3);
    for (std::size_t row = 0; row < side; ++row) {
        const std::size_t iy = L - 1 - row / cell_px;  // top row is the highest y level
        for (std::size_t col = 0; col < side; ++col) {
            const Rgb c = heat_color(feature, g.cell(col / cell_px, iy).proportion(feature));
            bytes.insert(bytes.end(), c.begin(), c.end());
        }
    }
    return bytes;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw DataError("cannot write " + path.string());
}

void write_bytes(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())))
        throw DataError("cannot write " + path.string());
}

void export_heatmap(const ManipulationGrid& g, Feature feature, const std::filesystem::path& dir) {
    const std::string stem = "grid_" + std::to_string(g.var_x) + "_" + std::to_string(g.var_y) + "_" + std::string(to_string(feature));
    write_text(dir / (stem + ".csv"), grid_csv(g, feature));
    write_bytes(dir / (stem + ".ppm"), grid_ppm(g, feature));
}

}  // namespace nasalgan::probe
