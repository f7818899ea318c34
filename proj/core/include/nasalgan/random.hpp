#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace nasalgan {

/// splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a) noexcept {
    return mix64(root ^ mix64(a));
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) noexcept {
    return derive_seed(derive_seed(root, a), b);
}

constexpr std::uint64_t derive_seed(std::uint64_t root, std::string_view tag) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return derive_seed(root, h);
}

/// Seeded generator with platform-independent draws. The standard
/// distributions are implementation-defined, so they are avoided here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform on the open interval (lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Standard normal via Box-Muller.
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    template <typename It>
    void shuffle(It first, It last) {
        const auto n = last - first;
        for (auto i = n - 1; i > 0; --i) {
            auto j = static_cast<decltype(i)>(below(static_cast<std::uint64_t>(i + 1)));
            std::swap(first[i], first[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace nasalgan
