#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nasalgan/ciwgan/latent.hpp"
#include "nasalgan/detector/detector.hpp"
#include "nasalgan/probe/sources.hpp"

namespace nasalgan::probe {

enum class Feature { nasal_vowel, nasal_consonant };

std::string_view to_string(Feature f) noexcept;
Feature parse_feature(std::string_view s);
bool has_feature(const detector::TokenLabel& label, Feature f) noexcept;

/// Generated codes with their verdicts.
struct LabeledBatch {
    std::vector<ciwgan::LatentCode> codes;
    std::vector<detector::TokenLabel> labels;
    std::string generator_id;
    std::string detector_id;

    std::size_t size() const noexcept { return codes.size(); }
};

/// n fresh codes from `seed`, generated and labeled in chunks.
LabeledBatch label_batch(const ClipSource& source, const TokenLabeler& labeler, std::size_t n, std::uint64_t seed);

/// 2x2 counts; rows: variable binarized (0 = not positive, 1 = positive),
/// columns: target (0 = absent, 1 = present).
using Table = std::array<std::array<double, 2>, 2>;

/// Pearson statistic sum (O - E)^2 / E with E from the marginals, without
/// continuity correction. Zero when a marginal is zero.
double chi_square(const Table& t);

/// True when any expected count is below 5.
bool low_expected(const Table& t);

/// Pearson correlation between a continuous variable and a boolean target;
/// zero when either is constant.
double point_biserial(const std::vector<double>& values, const std::vector<bool>& target);

struct VariableScore {
    std::size_t index = 0;  // position within z, or within phi for categorical entries
    bool categorical = false;
    std::string name;       // "z<index>" or "phi<index>"
    Table table{};
    double chi_square = 0;
    double point_biserial = 0;
    bool low_expected = false;
    std::size_t rank = 0;  // 1 = highest score
    bool top = false;
};

struct ChiSquareOptions {
    std::size_t top_k = 7;
    bool include_phi = false;
};

struct ChiSquareReport {
    Feature target = Feature::nasal_vowel;
    bool scorable = true;  // false when the target is all-true or all-false
    std::string note;
    std::vector<VariableScore> variables;  // in latent order (phi entries first when included)
    std::vector<std::size_t> ranking;      // positions into `variables`, best first
};

/// Sign-binarizes every z component (and phi entries on request) and scores
/// it against the target. Ties are ranked by latent position.
ChiSquareReport chi_square_scores(const LabeledBatch& batch, Feature target, const ChiSquareOptions& options = {});

struct CovarianceSummary {
    /// [nasal_vowel][nasal_consonant] counts.
    std::array<std::array<std::size_t, 2>, 2> table{};
    /// P(nasal_consonant | nasal_vowel); empty when no clip has a nasal vowel.
    std::optional<double> consonant_given_vowel;
    double consonant_rate = 0;
};

CovarianceSummary covariance_check(const LabeledBatch& batch);

}  // namespace nasalgan::probe
