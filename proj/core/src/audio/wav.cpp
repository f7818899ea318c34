#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "nasalgan/audio/audio_clip.hpp"
#include "nasalgan/error.hpp"

namespace nasalgan::audio {
namespace {

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
    out.push_back(static_cast<unsigned char>(v & 0xff));
    out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
}

std::uint16_t get_u16(std::span<const unsigned char> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t get_u32(std::span<const unsigned char> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) |
           (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::int16_t quantize(float x) {
    const double c = std::clamp(static_cast<double>(x), -1.0, 1.0);
    const double q = std::round(c * 32768.0);
    return static_cast<std::int16_t>(std::clamp(q, -32768.0, 32767.0));
}

}  // namespace

std::vector<unsigned char> encode_wav(const AudioClip& clip) {
    const auto n = static_cast<std::uint32_t>(clip.size());
    const std::uint32_t data_bytes = 2 * n;
    std::vector<unsigned char> out;
    out.reserve(44 + data_bytes);
    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32(out, 36 + data_bytes);
    out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put_u32(out, 16);
    put_u16(out, 1);  // PCM
    put_u16(out, 1);  // mono
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate()));
    put_u32(out, static_cast<std::uint32_t>(clip.sample_rate()) * 2);
    put_u16(out, 2);
    put_u16(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32(out, data_bytes);
    for (float s : clip.samples()) put_u16(out, static_cast<std::uint16_t>(quantize(s)));
    return out;
}

AudioClip decode_wav(std::span<const unsigned char> b) {
    if (b.size() < 12 || std::memcmp(b.data(), "RIFF", 4) != 0 ||
        std::memcmp(b.data() + 8, "WAVE", 4) != 0)
        throw DataError("wav: not a RIFF/WAVE file");

    bool have_fmt = false;
    int sample_rate = 0;
    std::size_t pos = 12;
    while (pos + 8 <= b.size()) {
        const std::uint32_t size = get_u32(b, pos + 4);
        const std::size_t body = pos + 8;
        if (body + size > b.size()) throw DataError("wav: truncated chunk");
        if (std::memcmp(b.data() + pos, "fmt ", 4) == 0) {
            if (size < 16) throw DataError("wav: fmt chunk too short");
            std::uint16_t format = get_u16(b, body);
            const std::uint16_t channels = get_u16(b, body + 2);
            sample_rate = static_cast<int>(get_u32(b, body + 4));
            const std::uint16_t bits = get_u16(b, body + 14);
            if (format == 0xFFFE && size >= 26) format = get_u16(b, body + 24);
            if (channels != 1)
                throw DataError("wav: expected mono audio, found " + std::to_string(channels) +
                                " channels");
            if (format != 1 || bits != 16)
                throw DataError("wav: unsupported encoding (format " + std::to_string(format) +
                                ", " + std::to_string(bits) + " bits); only PCM-16 is read");
            have_fmt = true;
        } else if (std::memcmp(b.data() + pos, "data", 4) == 0) {
            if (!have_fmt) throw DataError("wav: data chunk before fmt chunk");
            const std::size_t n = size / 2;
            if (n == 0) throw DataError("wav: empty data chunk");
            std::vector<float> samples(n);
            for (std::size_t i = 0; i < n; ++i)
                samples[i] = static_cast<float>(static_cast<std::int16_t>(get_u16(b, body + 2 * i)) /
                                                32768.0);
            return AudioClip(std::move(samples), sample_rate);
        }
        pos = body + size + (size & 1);
    }
    throw DataError("wav: no data chunk");
}

AudioClip load_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("wav: cannot open '" + path.string() + "' (missing file?)");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    try {
        return decode_wav(bytes);
    } catch (const DataError& e) {
        throw DataError(std::string(e.what()) + " [" + path.string() + "]");
    }
}

void save_wav(const AudioClip& clip, const std::filesystem::path& path) {
    const auto bytes = encode_wav(clip);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("wav: cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("wav: write failed for '" + path.string() + "'");
}

}  // namespace nasalgan::audio
