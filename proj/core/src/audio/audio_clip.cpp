#include "nasalgan/audio/audio_clip.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nasalgan/error.hpp"

namespace nasalgan::audio {

AudioClip::AudioClip(std::vector<float> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
    if (samples_.empty()) throw UsageError("AudioClip: samples must be non-empty");
    if (sample_rate_ <= 0) throw UsageError("AudioClip: sample rate must be positive");
}

float AudioClip::peak() const noexcept {
    float p = 0.0f;
    for (float s : samples_) p = std::max(p, std::fabs(s));
    return p;
}

void AudioClip::normalize(float target) {
    const float p = peak();
    if (p == 0.0f) return;
    const double gain = static_cast<double>(target) / p;
    for (float& s : samples_) s = static_cast<float>(s * gain);
}

AudioClip AudioClip::slice_padded(std::size_t begin, std::size_t end, std::size_t length) const {
    if (begin >= end || end > samples_.size())
        throw UsageError("slice_padded: span outside clip");
    if (end - begin > length) throw UsageError("slice_padded: span longer than target length");
    std::vector<float> out(length, 0.0f);
    std::copy(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
              samples_.begin() + static_cast<std::ptrdiff_t>(end), out.begin());
    return AudioClip(std::move(out), sample_rate_);
}

AudioClip decimate(const AudioClip& clip, int factor) {
    if (factor < 1) throw UsageError("decimate: factor must be >= 1");
    if (factor == 1) return clip;
    // Hamming-windowed sinc low-pass at 0.9 of the new Nyquist.
    const int half = 16 * factor;
    const double cutoff = 0.9 / (2.0 * factor);
    std::vector<double> taps(2 * half + 1);
    double sum = 0.0;
    for (int i = -half; i <= half; ++i) {
        const double x = 2.0 * cutoff * i;
        const double sinc = i == 0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
        const double w = 0.54 + 0.46 * std::cos(std::numbers::pi * i / half);
        taps[i + half] = 2.0 * cutoff * sinc * w;
        sum += taps[i + half];
    }
    for (double& t : taps) t /= sum;

    const auto& in = clip.samples();
    const auto n = static_cast<long>(in.size());
    const long out_len = (n + factor - 1) / factor;
    std::vector<float> out(static_cast<std::size_t>(out_len));
    for (long o = 0; o < out_len; ++o) {
        const long c = o * factor;
        double acc = 0.0;
        for (int i = -half; i <= half; ++i) {
            const long j = c + i;
            if (j >= 0 && j < n) acc += taps[i + half] * in[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(o)] = static_cast<float>(acc);
    }
    return AudioClip(std::move(out), clip.sample_rate() / factor);
}

}  // namespace nasalgan::audio
