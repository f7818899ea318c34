#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "nasalgan/audio/audio_clip.hpp"

namespace nasalgan::audio {

/// Magnitude STFT. frames[t][k] = |DFT(hann * x[t*hop : t*hop+window])|[k].
struct Spectrogram {
    std::vector<std::vector<double>> frames;
    std::size_t hop = 0;
    std::size_t window = 0;
    int sample_rate = 0;

    std::size_t bins() const noexcept { return window / 2 + 1; }
    double bin_hz(std::size_t k) const noexcept {
        return static_cast<double>(k) * sample_rate / static_cast<double>(window);
    }
};

std::vector<double> hann_window(std::size_t n);

Spectrogram stft(const AudioClip& clip, std::size_t window, std::size_t hop);

/// Magnitude spectrum of samples[begin, end) under a Hann window, zero-padded
/// to `fft_size` points (fft_size >= end - begin).
std::vector<double> magnitude_spectrum(const AudioClip& clip, std::size_t begin, std::size_t end,
                                       std::size_t fft_size);

/// Frequency (Hz) of the largest bin of the averaged magnitude spectrum over
/// frames fully inside [begin, end). Returns a negative value when the span is
/// shorter than one window.
double dominant_frequency(const AudioClip& clip, std::size_t begin, std::size_t end,
                          std::size_t window = 512, std::size_t hop = 128);

/// CSV with header `frame,bin,magnitude`.
void write_spectrogram_csv(const Spectrogram& spec, const std::filesystem::path& path);

}  // namespace nasalgan::audio
