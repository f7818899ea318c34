#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "nasalgan/audio/audio_clip.hpp"
#include "nasalgan/detector/frames.hpp"
#include "nasalgan/keyvalue.hpp"
#include "nasalgan/nn/adam.hpp"
#include "nasalgan/nn/network.hpp"
#include "nasalgan/syllable_class.hpp"

namespace nasalgan::detector {

/// four_way: one head over FrameClass. dual_binary: a vowel head and a nasal
/// head whose argmaxes are intersected; the nasal head only ever sees nasal
/// consonants as positives.
enum class Mode { four_way, dual_binary };

std::string_view to_string(Mode m) noexcept;
Mode parse_mode(std::string_view s);

struct DetectorConfig {
    std::size_t window = 511;  // odd, so the center sample exists
    std::size_t hop = 128;
    double theta = 0.1;         // presence threshold, fraction of non-silent frames
    double silence_rms = 0.01;  // frames below are ignored by label_token
    int sample_rate = 8000;
    std::size_t epochs = 6;
    std::size_t batch_size = 32;
    nn::AdamConfig adam{1e-3, 0.9, 0.999, 1e-8};
    double gain_min = 0.3;  // random per-window gain during training
    double gain_max = 1.1;
    std::uint64_t seed = 0;

    void validate() const;
    KeyValueFile to_keyvalue() const;
    static DetectorConfig from_keyvalue(const KeyValueFile& kv);
    friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

/// 4 strided convolutions and a dense head over one window.
std::vector<nn::LayerSpec> detector_layers(std::size_t window, std::size_t outputs);

struct DetectorModel {
    DetectorConfig config;
    Mode mode = Mode::four_way;
    /// four_way: {frame}. dual_binary: {vowel (0 = vowel), nasal (0 = nasal)}.
    std::vector<nn::Network<float>> heads;

    friend bool operator==(const DetectorModel&, const DetectorModel&) = default;
};

/// Per-head probabilities; each inner vector sums to 1.
struct FramePosterior {
    std::vector<std::vector<double>> heads;
};

struct TokenLabel {
    bool nasal_vowel_present = false;
    bool nasal_consonant_present = false;
    bool silent = false;  // no frame passed the silence gate
    std::size_t voiced_frames = 0;

    SyllableClass syllable_class() const noexcept { return make_class(nasal_vowel_present, nasal_consonant_present); }
    friend bool operator==(const TokenLabel&, const TokenLabel&) = default;
};

/// Trains the head(s) for `mode` on labeled windows. Throws DataError naming
/// any class the mode needs but the frames lack.
DetectorModel train_detector(Mode mode, const LabeledFrames& frames, const DetectorConfig& config,
                             const std::function<void(const std::string&)>& log = {});

/// Throws UsageError unless the window has config.window samples.
FramePosterior classify_center(const DetectorModel& model, const audio::AudioClip& window);

/// Batched posteriors for n flattened windows.
std::vector<FramePosterior> classify_windows(const DetectorModel& model, const float* windows, std::size_t n);

FrameClass frame_class(const DetectorModel& model, const FramePosterior& posterior);

/// Slides windows at the configured hop over non-silent frames and thresholds
/// the fraction of nasal-vowel and nasal-consonant frames.
TokenLabel label_token(const DetectorModel& model, const audio::AudioClip& clip);

struct Evaluation {
    double frame_accuracy = 0;  // over non-silent frames
    double token_accuracy = 0;
    std::vector<double> head_accuracy;  // per head, non-silent frames
    std::array<std::array<std::size_t, kFrameClassCount>, kFrameClassCount> frame_confusion{};  // [truth][pred]
    std::array<std::array<std::size_t, 4>, 4> token_confusion{};                                 // [truth][pred]
};

Evaluation evaluate(const DetectorModel& model, const std::vector<SyntheticToken>& tokens);

/// Confusion matrices and accuracies as CSV.
std::string evaluation_csv(const Evaluation& e);

/// detector.cfg plus one checkpoint per head.
void save_detector(const DetectorModel& model, const std::filesystem::path& dir);
DetectorModel load_detector(const std::filesystem::path& dir);

struct NamedLabel {
    std::string clip;
    TokenLabel label;
};

/// CSV `clip,nasal_vowel,nasal_consonant,class`.
std::string labels_csv(const std::vector<NamedLabel>& labels);

}  // namespace nasalgan::detector
