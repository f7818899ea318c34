#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace nasalgan::audio {

/// Mono waveform at a fixed sample rate. Samples are nominally in [-1, 1].
class AudioClip {
public:
    AudioClip() = default;
    AudioClip(std::vector<float> samples, int sample_rate);

    const std::vector<float>& samples() const noexcept { return samples_; }
    std::vector<float>& samples() noexcept { return samples_; }
    int sample_rate() const noexcept { return sample_rate_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    double duration() const noexcept {
        return static_cast<double>(samples_.size()) / sample_rate_;
    }

    float peak() const noexcept;

    /// Scales so that max |sample| equals `target`. All-zero clips are left alone.
    void normalize(float target = 1.0f);

    /// Copy of [begin, end) right-padded with zeros to `length` samples.
    AudioClip slice_padded(std::size_t begin, std::size_t end, std::size_t length) const;

    friend bool operator==(const AudioClip&, const AudioClip&) = default;

private:
    std::vector<float> samples_;
    int sample_rate_ = 0;
};

/// Reads a PCM-16 mono RIFF/WAVE file. Throws DataError with distinct
/// messages for a missing file, non-mono data and unsupported encodings.
AudioClip load_wav(const std::filesystem::path& path);

/// Writes PCM-16 mono: round(x * 32768) clamped to the int16 range.
void save_wav(const AudioClip& clip, const std::filesystem::path& path);

/// Encodes a clip as an in-memory WAV byte image (what save_wav writes).
std::vector<unsigned char> encode_wav(const AudioClip& clip);
AudioClip decode_wav(std::span<const unsigned char> bytes);

/// Integer-factor downsampling with a windowed-sinc anti-alias filter.
AudioClip decimate(const AudioClip& clip, int factor);

}  // namespace nasalgan::audio
