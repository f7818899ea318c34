#include "nasalgan/nn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "nasalgan/error.hpp"

namespace nasalgan::nn {
namespace {

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xff));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void bytes(const std::string& s) { out_.insert(out_.end(), s.begin(), s.end()); }
    void tensor_data(const Tensor<float>& t) {
        for (float v : t.values()) f32(v);
    }
    std::vector<unsigned char> take() { return std::move(out_); }

private:
    std::vector<unsigned char> out_;
};

class Reader {
public:
    explicit Reader(const std::vector<unsigned char>& b) : b_(b) {}
    void need(std::size_t n) const {
        if (pos_ + n > b_.size()) throw DataError("checkpoint: truncated file");
    }
    std::uint8_t u8() {
        need(1);
        return b_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b_[pos_++]) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b_[pos_++]) << (8 * i);
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string bytes(std::size_t n) {
        need(n);
        std::string s(b_.begin() + static_cast<std::ptrdiff_t>(pos_), b_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        return s;
    }
    void tensor_data(Tensor<float>& t) {
        for (auto& v : t.values()) v = f32();
    }
    bool done() const { return pos_ == b_.size(); }

private:
    const std::vector<unsigned char>& b_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<unsigned char> encode_checkpoint(const Checkpoint& ck) {
    Writer w;
    w.bytes("NGNN");
    w.u32(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(ck.tag.size()));
    w.bytes(ck.tag);
    const auto& net = ck.network;
    w.u32(static_cast<std::uint32_t>(net.input_shape().channels));
    w.u32(static_cast<std::uint32_t>(net.input_shape().length));
    w.u32(static_cast<std::uint32_t>(net.layers().size()));
    for (const auto& L : net.layers()) {
        w.u8(static_cast<std::uint8_t>(L.kind));
        w.u8(0);
        w.u8(0);
        w.u8(0);
        for (auto v : {L.in_channels, L.out_channels, L.kernel, L.stride, L.padding, L.radius, L.target.channels,
                       L.target.length})
            w.u32(static_cast<std::uint32_t>(v));
        w.f64(L.slope);
    }
    w.u32(static_cast<std::uint32_t>(net.parameters().size()));
    for (const auto& p : net.parameters()) {
        w.u32(static_cast<std::uint32_t>(p.rank()));
        for (auto d : p.shape()) w.u32(static_cast<std::uint32_t>(d));
        w.tensor_data(p);
    }
    w.u32(ck.optimizer ? 1 : 0);
    if (ck.optimizer) {
        const auto& s = *ck.optimizer;
        w.u64(s.step);
        w.f64(s.config.alpha);
        w.f64(s.config.beta1);
        w.f64(s.config.beta2);
        w.f64(s.config.epsilon);
        for (const auto& m : s.first) w.tensor_data(m);
        for (const auto& v : s.second) w.tensor_data(v);
    }
    return w.take();
}

Checkpoint decode_checkpoint(const std::vector<unsigned char>& bytes) {
    Reader r(bytes);
    if (r.bytes(4) != "NGNN") throw DataError("checkpoint: bad magic (not a nasalgan network file)");
    const auto version = r.u32();
    if (version != kCheckpointVersion)
        throw DataError("checkpoint: unsupported version " + std::to_string(version));
    Checkpoint ck;
    ck.tag = r.bytes(r.u32());
    FeatureShape input;
    input.channels = r.u32();
    input.length = r.u32();
    const auto n_layers = r.u32();
    std::vector<LayerSpec> layers;
    for (std::uint32_t i = 0; i < n_layers; ++i) {
        LayerSpec L;
        const auto kind = r.u8();
        if (kind > static_cast<std::uint8_t>(LayerKind::phase_shuffle))
            throw DataError("checkpoint: unknown layer kind " + std::to_string(kind));
        L.kind = static_cast<LayerKind>(kind);
        r.u8();
        r.u8();
        r.u8();
        L.in_channels = r.u32();
        L.out_channels = r.u32();
        L.kernel = r.u32();
        L.stride = r.u32();
        L.padding = r.u32();
        L.radius = r.u32();
        L.target.channels = r.u32();
        L.target.length = r.u32();
        L.slope = r.f64();
        layers.push_back(L);
    }
    try {
        ck.network = Network<float>(input, layers);
    } catch (const UsageError& e) {
        throw DataError(std::string("checkpoint: inconsistent layer specs: ") + e.what());
    }
    const auto n_params = r.u32();
    if (n_params != ck.network.parameters().size()) throw DataError("checkpoint: parameter count mismatch");
    for (auto& p : ck.network.parameters()) {
        const auto rank = r.u32();
        Shape shape(rank);
        for (auto& d : shape) d = r.u32();
        if (shape != p.shape()) throw DataError("checkpoint: parameter shape mismatch");
        r.tensor_data(p);
    }
    if (r.u32() == 1) {
        AdamState<float> s(AdamConfig{}, ck.network.parameters());
        s.step = r.u64();
        s.config.alpha = r.f64();
        s.config.beta1 = r.f64();
        s.config.beta2 = r.f64();
        s.config.epsilon = r.f64();
        for (auto& m : s.first) r.tensor_data(m);
        for (auto& v : s.second) r.tensor_data(v);
        ck.optimizer = std::move(s);
    }
    if (!r.done()) throw DataError("checkpoint: trailing bytes");
    return ck;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
    const auto bytes = encode_checkpoint(checkpoint);
    // Written aside and renamed so an interrupted save never leaves a torn file.
    auto partial = path;
    partial += ".partial";
    {
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write checkpoint '" + path.string() + "'");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out.flush()) throw DataError("cannot write checkpoint '" + path.string() + "'");
    }
    std::filesystem::rename(partial, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read checkpoint '" + path.string() + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_checkpoint(bytes);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

}  // namespace nasalgan::nn
