#include "nasalgan/keyvalue.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nasalgan/error.hpp"

namespace nasalgan {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

KeyValueFile KeyValueFile::parse(std::string_view text) {
    KeyValueFile kv;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const auto raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw DataError("config line " + std::to_string(line_no) + ": expected key=value");
        kv.values_[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }
    return kv;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str());
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string KeyValueFile::to_string() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
    return out;
}

void KeyValueFile::save(const std::filesystem::path& path) const {
    auto partial = path;
    partial += ".partial";
    {
        std::ofstream out(partial, std::ios::trunc);
        if (!out) throw DataError("cannot write '" + path.string() + "'");
        out << to_string();
        if (!out.flush()) throw DataError("cannot write '" + path.string() + "'");
    }
    std::filesystem::rename(partial, path);
}

void KeyValueFile::set(const std::string& key, double value) { values_[key] = format_double(value); }
void KeyValueFile::set(const std::string& key, std::int64_t value) { values_[key] = std::to_string(value); }
void KeyValueFile::set(const std::string& key, std::uint64_t value) { values_[key] = std::to_string(value); }

const std::string& KeyValueFile::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw DataError("config: missing key '" + key + "'");
    return it->second;
}

std::string KeyValueFile::get_or(const std::string& key, std::string fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueFile::get_double(const std::string& key) const {
    const auto& s = get(key);
    double v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DataError("config: '" + key + "' is not a number: " + s);
    return v;
}

std::int64_t KeyValueFile::get_int(const std::string& key) const {
    const auto& s = get(key);
    std::int64_t v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DataError("config: '" + key + "' is not an integer: " + s);
    return v;
}

std::uint64_t KeyValueFile::get_uint(const std::string& key) const {
    const auto& s = get(key);
    std::uint64_t v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw DataError("config: '" + key + "' is not an unsigned integer: " + s);
    return v;
}

bool KeyValueFile::get_bool(const std::string& key) const {
    const auto& s = get(key);
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw DataError("config: '" + key + "' is not a boolean: " + s);
}

void KeyValueFile::merge(const KeyValueFile& other) {
    for (const auto& [k, v] : other.values_) values_[k] = v;
}

}  // namespace nasalgan
