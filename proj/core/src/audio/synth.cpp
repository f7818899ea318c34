#include "nasalgan/audio/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "nasalgan/error.hpp"

namespace nasalgan::audio {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Two-pole resonator scaled to unit gain at its centre frequency.
class Resonator {
public:
    Resonator(double freq, double bandwidth, int fs) {
        c_ = -std::exp(-kTwoPi * bandwidth / fs);
        b_ = 2.0 * std::exp(-std::numbers::pi * bandwidth / fs) * std::cos(kTwoPi * freq / fs);
        const double w = kTwoPi * freq / fs;
        const std::complex<double> z1 = std::polar(1.0, -w);
        a_ = std::abs(1.0 - b_ * z1 - c_ * z1 * z1);
    }

    double step(double x) {
        const double y = a_ * x + b_ * y1_ + c_ * y2_;
        y2_ = y1_;
        y1_ = y;
        return y;
    }

private:
    double a_ = 0, b_ = 0, c_ = 0;
    double y1_ = 0, y2_ = 0;
};

struct FormantBank {
    std::vector<Resonator> res;
    std::vector<double> gain;

    void add(double f, double bw, double g, int fs) {
        res.emplace_back(f, bw, fs);
        gain.push_back(g);
    }
    double step(double x) {
        double y = 0.0;
        for (std::size_t i = 0; i < res.size(); ++i) y += gain[i] * res[i].step(x);
        return y;
    }
};

// Raised-cosine ramp applied to both ends of [0, n).
double edge_gain(std::size_t i, std::size_t n, std::size_t ramp) {
    ramp = std::min(ramp, n / 2);
    if (ramp == 0) return 1.0;
    auto rc = [ramp](std::size_t k) {
        return 0.5 - 0.5 * std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) /
                                    static_cast<double>(ramp));
    };
    if (i < ramp) return rc(i);
    if (i >= n - ramp) return rc(n - 1 - i);
    return 1.0;
}

// Unit impulse every 1/f0 seconds.
class PulseTrain {
public:
    PulseTrain(double f0, int fs) : inc_(f0 / fs) {}
    double step() {
        const double out = phase_ == 0.0 ? 1.0 : 0.0;
        phase_ += inc_;
        if (phase_ >= 1.0) phase_ = 0.0;
        return out;
    }

private:
    double inc_;
    double phase_ = 0.0;
};

}  // namespace

void SyllableSpec::validate(int sample_rate) const {
    const auto& f = vowel_formants;
    if (!(0.0 < f[0] && f[0] < f[1] && f[1] < f[2] && f[2] < sample_rate / 2.0))
        throw UsageError("SyllableSpec: formants must satisfy 0 < F1 < F2 < F3 < sample_rate/2");
    if (!(vowel_duration > 0.0 && coda_duration > 0.0))
        throw UsageError("SyllableSpec: durations must be positive");
    if (!(f0 > 0.0 && f0 < sample_rate / 2.0)) throw UsageError("SyllableSpec: bad f0");
}

SynthResult synth_syllable(const SyllableSpec& spec, int sample_rate, std::size_t total_len,
                           std::uint64_t noise_seed) {
    spec.validate(sample_rate);
    const auto n_vowel = static_cast<std::size_t>(std::lround(spec.vowel_duration * sample_rate));
    const auto n_coda = static_cast<std::size_t>(std::lround(spec.coda_duration * sample_rate));
    if (n_vowel == 0 || n_coda == 0 || n_vowel + n_coda > total_len)
        throw UsageError("synth_syllable: infeasible durations (" + std::to_string(n_vowel) +
                         " + " + std::to_string(n_coda) + " samples > " +
                         std::to_string(total_len) + ")");

    const int fs = sample_rate;
    const auto ramp = static_cast<std::size_t>(0.008 * fs);
    std::vector<double> out(total_len, 0.0);
    PulseTrain pulses(spec.f0, fs);

    FormantBank vowel;
    const auto& fm = spec.vowel_formants;
    if (spec.vowel_nasal) {
        vowel.add(kNasalResonanceHz, 80.0, 1.2, fs);
        vowel.add(fm[0], 90.0, 0.3, fs);
        vowel.add(fm[1], 110.0, 0.5, fs);
        vowel.add(fm[2], 170.0, 0.25, fs);
    } else {
        vowel.add(fm[0], 90.0, 1.0, fs);
        vowel.add(fm[1], 110.0, 0.6, fs);
        vowel.add(fm[2], 170.0, 0.3, fs);
    }
    for (std::size_t i = 0; i < n_vowel; ++i)
        out[i] = vowel.step(pulses.step()) * edge_gain(i, n_vowel, ramp);

    SyllableLayout layout{0, n_vowel, n_vowel, n_vowel + n_coda, n_vowel + n_coda};
    if (spec.coda == CodaKind::nasal) {
        FormantBank murmur;
        murmur.add(kNasalResonanceHz, 60.0, 1.0, fs);
        murmur.add(std::min(2200.0, 0.45 * fs), 200.0, 0.08, fs);
        for (std::size_t i = 0; i < n_coda; ++i)
            out[n_vowel + i] = 0.6 * murmur.step(pulses.step()) * edge_gain(i, n_coda, ramp);
    } else {
        const std::size_t n_burst =
            std::max<std::size_t>(1, std::min(n_coda / 3, static_cast<std::size_t>(0.015 * fs)));
        layout.burst_begin = n_vowel + n_coda - n_burst;
        Rng rng(noise_seed);
        double prev = 0.0;
        for (std::size_t i = 0; i < n_burst; ++i) {
            const double w = rng.uniform(-1.0, 1.0);
            const double hp = w - prev;  // first difference tilts energy upward
            prev = w;
            const double decay = std::exp(-4.0 * static_cast<double>(i) / n_burst);
            out[layout.burst_begin + i] = 0.5 * hp * decay;
        }
    }

    double peak = 0.0;
    for (double v : out) peak = std::max(peak, std::fabs(v));
    std::vector<float> samples(total_len);
    const double g = peak > 0.0 ? kSynthPeak / peak : 0.0;
    for (std::size_t i = 0; i < total_len; ++i) samples[i] = static_cast<float>(out[i] * g);
    return {AudioClip(std::move(samples), fs), layout};
}

SyllableSpec random_syllable_spec(SyllableClass cls, Rng& rng, const SynthVariation& var) {
    // F1-F3 of open/mid vowels: /ae/, /aa/, /ah/, /o/.
    static constexpr std::array<std::array<double, 3>, 4> kVowels{{
        {660.0, 1720.0, 2410.0},
        {730.0, 1090.0, 2440.0},
        {640.0, 1190.0, 2390.0},
        {570.0, 840.0, 2410.0},
    }};
    auto jitter = [&rng](double base, double frac) { return base * rng.uniform(1.0 - frac, 1.0 + frac); };

    SyllableSpec s;
    const auto& v = kVowels[rng.below(kVowels.size())];
    for (std::size_t i = 0; i < 3; ++i) s.vowel_formants[i] = jitter(v[i], var.formant_jitter);
    s.vowel_nasal = has_nasal_vowel(cls);
    s.coda = has_nasal_coda(cls) ? CodaKind::nasal : CodaKind::stop;
    s.f0 = jitter(var.base_f0, var.f0_jitter);
    s.vowel_duration = jitter(var.base_vowel_duration, var.duration_jitter);
    s.coda_duration = jitter(var.base_coda_duration, var.duration_jitter);
    return s;
}

}  // namespace nasalgan::audio
