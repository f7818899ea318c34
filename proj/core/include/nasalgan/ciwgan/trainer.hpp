#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nasalgan/audio/audio_clip.hpp"
#include "nasalgan/ciwgan/model.hpp"
#include "nasalgan/nn/adam.hpp"

namespace nasalgan::ciwgan {

/// Everything needed to resume training bit-exactly.
struct TrainState {
    CiwganModel model;
    nn::AdamState<float> generator_opt;
    nn::AdamState<float> critic_opt;
    nn::AdamState<float> qnet_opt;
    std::size_t step = 0;  // generator steps taken

    static TrainState create(const CiwganConfig& config);
    friend bool operator==(const TrainState&, const TrainState&) = default;
};

struct TrainRecord {
    std::size_t step = 0;
    double critic_loss = 0;
    double gen_loss = 0;
    double q_loss = 0;
    double gp = 0;
    double seconds = 0;  // wall-clock since the run started; not written to CSV
};

struct TrainReport {
    std::vector<TrainRecord> records;
    bool aborted = false;
    std::string diagnostic;
};

struct TrainOptions {
    /// Total generator steps; overrides config.epochs when set.
    std::optional<std::size_t> steps;
    /// Checkpoints and train_report.csv go here when set.
    std::optional<std::filesystem::path> out_dir;
    std::function<void(const TrainRecord&)> on_record;
};

/// Generator steps per epoch. One epoch is a full pass over the dataset in a
/// shuffled order; each generator step consumes critic_iters real batches.
std::size_t steps_per_epoch(const CiwganConfig& config, std::size_t dataset_size);

/// Runs generator steps from state.step up to the target. Each step does
/// critic_iters critic updates followed by a joint generator and Q update.
/// All randomness is derived from (config.seed, step), so a run resumed from
/// a checkpoint follows the uninterrupted trajectory. A NumericalError stops
/// training with report.aborted set; the state keeps the last good step.
TrainReport train(TrainState& state, const std::vector<audio::AudioClip>& dataset, const TrainOptions& options = {});

/// generator.ckpt, critic.ckpt and qnet.ckpt (with optimizer state) plus the
/// ciwgan.cfg sidecar.
void save_state(const TrainState& state, const std::filesystem::path& dir);
TrainState load_state(const std::filesystem::path& dir);

/// Generator, critic and Q-network without optimizer state.
CiwganModel load_model(const std::filesystem::path& dir);

void append_report_csv(const std::vector<TrainRecord>& records, const std::filesystem::path& path);

}  // namespace nasalgan::ciwgan
