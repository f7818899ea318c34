#include "nasalgan/probe/chi_square.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nasalgan/error.hpp"

namespace nasalgan::probe {
namespace {
constexpr std::size_t kChunk = 64;

double expected(const Table& t, std::size_t i, std::size_t j) {
    const double n = t[0][0] + t[0][1] + t[1][0] + t[1][1];
    return (t[i][0] + t[i][1]) * (t[0][j] + t[1][j]) / n;
}
}  // namespace

std::string_view to_string(Feature f) noexcept { return f == Feature::nasal_vowel ? "nasal_vowel" : "nasal_consonant"; }

Feature parse_feature(std::string_view s) {
    if (s == "nasal_vowel") return Feature::nasal_vowel;
    if (s == "nasal_consonant") return Feature::nasal_consonant;
    throw UsageError("unknown feature '" + std::string(s) + "' (expected nasal_vowel or nasal_consonant)");
}

bool has_feature(const detector::TokenLabel& label, Feature f) noexcept {
    return f == Feature::nasal_vowel ? label.nasal_vowel_present : label.nasal_consonant_present;
}

LabeledBatch label_batch(const ClipSource& source, const TokenLabeler& labeler, std::size_t n, std::uint64_t seed) {
    check_compatible(source, labeler);
    if (n == 0) throw UsageError("label_batch: n must be at least 1");
    LabeledBatch batch;
    batch.generator_id = source.id();
    batch.detector_id = labeler.id();
    ciwgan::LatentSampler sampler(source.n_phi(), source.n_z(), seed);
    batch.codes = sampler.take(n);
    for (std::size_t start = 0; start < n; start += kChunk) {
        const std::size_t end = std::min(n, start + kChunk);
        const std::vector<ciwgan::LatentCode> part(batch.codes.begin() + static_cast<std::ptrdiff_t>(start),
                                                   batch.codes.begin() + static_cast<std::ptrdiff_t>(end));
        for (auto& l : labeler.label(source.generate(part))) batch.labels.push_back(l);
    }
    return batch;
}

double chi_square(const Table& t) {
    const double n = t[0][0] + t[0][1] + t[1][0] + t[1][1];
    if (n <= 0) return 0.0;
    double score = 0;
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const double e = expected(t, i, j);
            if (e <= 0) return 0.0;
            const double d = t[i][j] - e;
            score += d * d / e;
        }
    }
    return score;
}

bool low_expected(const Table& t) {
    const double n = t[0][0] + t[0][1] + t[1][0] + t[1][1];
    if (n <= 0) return true;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            if (expected(t, i, j) < 5.0) return true;
    return false;
}

double point_biserial(const std::vector<double>& values, const std::vector<bool>& target) {
    const std::size_t n = values.size();
    if (n == 0 || target.size() != n) return 0.0;
    double mean = 0, p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mean += values[i];
        p += target[i] ? 1.0 : 0.0;
    }
    mean /= static_cast<double>(n);
    p /= static_cast<double>(n);
    double cov = 0, var = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dv = values[i] - mean;
        cov += dv * ((target[i] ? 1.0 : 0.0) - p);
        var += dv * dv;
    }
    const double var_t = p * (1 - p) * static_cast<double>(n);
    if (var <= 0 || var_t <= 0) return 0.0;
    return cov / std::sqrt(var * var_t);
}

ChiSquareReport chi_square_scores(const LabeledBatch& batch, Feature target, const ChiSquareOptions& options) {
    if (batch.codes.size() != batch.labels.size()) throw UsageError("chi_square_scores: codes and labels differ in count");
    if (batch.codes.empty()) throw UsageError("chi_square_scores: empty batch");
    ChiSquareReport r;
    r.target = target;
    const std::size_t n = batch.size();
    const std::size_t n_phi = batch.codes.front().phi.size();
    const std::size_t n_z = batch.codes.front().z.size();
    for (const auto& c : batch.codes)
        if (c.phi.size() != n_phi || c.z.size() != n_z) throw UsageError("chi_square_scores: codes differ in dimensions");

    std::vector<bool> y(n);
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n; ++i) positives += (y[i] = has_feature(batch.labels[i], target));
    if (positives == 0 || positives == n) {
        r.scorable = false;
        r.note = std::string(to_string(target)) + (positives == 0 ? " never detected" : " always detected");
        return r;
    }

    auto score = [&](bool categorical, std::size_t index) {
        VariableScore v;
        v.index = index;
        v.categorical = categorical;
        v.name = (categorical ? "phi" : "z") + std::to_string(index);
        std::vector<double> values(n);
        for (std::size_t i = 0; i < n; ++i) {
            values[i] = categorical ? batch.codes[i].phi[index] : batch.codes[i].z[index];
            v.table[values[i] > 0 ? 1 : 0][y[i] ? 1 : 0] += 1.0;
        }
        v.chi_square = chi_square(v.table);
        v.low_expected = low_expected(v.table);
        v.point_biserial = point_biserial(values, y);
        r.variables.push_back(std::move(v));
    };
    if (options.include_phi)
        for (std::size_t k = 0; k < n_phi; ++k) score(true, k);
    for (std::size_t k = 0; k < n_z; ++k) score(false, k);

    r.ranking.resize(r.variables.size());
    std::iota(r.ranking.begin(), r.ranking.end(), std::size_t{0});
    std::stable_sort(r.ranking.begin(), r.ranking.end(), [&](std::size_t a, std::size_t b) {
        return r.variables[a].chi_square > r.variables[b].chi_square;
    });
    for (std::size_t k = 0; k < r.ranking.size(); ++k) {
        auto& v = r.variables[r.ranking[k]];
        v.rank = k + 1;
        v.top = k < options.top_k;
    }
    return r;
}

CovarianceSummary covariance_check(const LabeledBatch& batch) {
    if (batch.labels.empty()) throw UsageError("covariance_check: empty batch");
    CovarianceSummary s;
    for (const auto& l : batch.labels) ++s.table[l.nasal_vowel_present ? 1 : 0][l.nasal_consonant_present ? 1 : 0];
    const std::size_t with_vowel = s.table[1][0] + s.table[1][1];
    if (with_vowel > 0) s.consonant_given_vowel = static_cast<double>(s.table[1][1]) / static_cast<double>(with_vowel);
    s.consonant_rate = static_cast<double>(s.table[0][1] + s.table[1][1]) / static_cast<double>(batch.labels.size());
    return s;
}

}  // namespace nasalgan::probe
