#include "nasalgan/audio/spectrogram.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>

#include "nasalgan/error.hpp"

namespace nasalgan::audio {
namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class RealFft {
public:
    explicit RealFft(std::size_t n)
        : n_(n),
          in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
          out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
    }
    ~RealFft() {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    double* input() noexcept { return in_; }

    void magnitudes(std::vector<double>& mags) {
        fftw_execute(plan_);
        mags.resize(n_ / 2 + 1);
        for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::hypot(out_[k][0], out_[k][1]);
    }

private:
    std::size_t n_;
    double* in_;
    fftw_complex* out_;
    fftw_plan plan_{};
};

}  // namespace

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    if (n == 1) {
        w[0] = 1.0;
        return w;
    }
    // Periodic Hann.
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                    static_cast<double>(n));
    return w;
}

Spectrogram stft(const AudioClip& clip, std::size_t window, std::size_t hop) {
    if (window == 0 || hop == 0) throw UsageError("stft: window and hop must be positive");
    if (window > clip.size())
        throw UsageError("stft: window (" + std::to_string(window) + ") longer than clip (" +
                         std::to_string(clip.size()) + ")");
    Spectrogram spec;
    spec.hop = hop;
    spec.window = window;
    spec.sample_rate = clip.sample_rate();
    const auto w = hann_window(window);
    const std::size_t n_frames = (clip.size() - window) / hop + 1;
    spec.frames.resize(n_frames);
    RealFft fft(window);
    const auto& x = clip.samples();
    for (std::size_t t = 0; t < n_frames; ++t) {
        double* in = fft.input();
        for (std::size_t i = 0; i < window; ++i) in[i] = w[i] * x[t * hop + i];
        fft.magnitudes(spec.frames[t]);
    }
    return spec;
}

std::vector<double> magnitude_spectrum(const AudioClip& clip, std::size_t begin, std::size_t end,
                                       std::size_t fft_size) {
    if (begin >= end || end > clip.size() || fft_size < end - begin)
        throw UsageError("magnitude_spectrum: bad span");
    const auto w = hann_window(end - begin);
    RealFft fft(fft_size);
    double* in = fft.input();
    for (std::size_t i = 0; i < fft_size; ++i)
        in[i] = i < end - begin ? w[i] * clip.samples()[begin + i] : 0.0;
    std::vector<double> mags;
    fft.magnitudes(mags);
    return mags;
}

double dominant_frequency(const AudioClip& clip, std::size_t begin, std::size_t end,
                          std::size_t window, std::size_t hop) {
    if (end > clip.size() || begin >= end || end - begin < window) return -1.0;
    const auto& x = clip.samples();
    std::vector<float> span(x.begin() + static_cast<std::ptrdiff_t>(begin),
                            x.begin() + static_cast<std::ptrdiff_t>(end));
    const auto spec = stft(AudioClip(std::move(span), clip.sample_rate()), window, hop);
    std::vector<double> avg(spec.bins(), 0.0);
    for (const auto& f : spec.frames)
        for (std::size_t k = 0; k < f.size(); ++k) avg[k] += f[k];
    std::size_t best = 1;  // skip DC
    for (std::size_t k = 1; k < avg.size(); ++k)
        if (avg[k] > avg[best]) best = k;
    return spec.bin_hz(best);
}

void write_spectrogram_csv(const Spectrogram& spec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << "frame,bin,magnitude\n";
    out.precision(9);
    for (std::size_t t = 0; t < spec.frames.size(); ++t)
        for (std::size_t k = 0; k < spec.frames[t].size(); ++k)
            out << t << ',' << k << ',' << spec.frames[t][k] << '\n';
}

}  // namespace nasalgan::audio
