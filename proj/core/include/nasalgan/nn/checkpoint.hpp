#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nasalgan/nn/adam.hpp"
#include "nasalgan/nn/network.hpp"

namespace nasalgan::nn {

/// A network (float parameters) with an optional optimizer state and tag.
/// Byte layout is documented in docs/checkpoint_format.md.
struct Checkpoint {
    std::string tag;
    Network<float> network;
    std::optional<AdamState<float>> optimizer;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<unsigned char> encode_checkpoint(const Checkpoint& checkpoint);
Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes);

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace nasalgan::nn
