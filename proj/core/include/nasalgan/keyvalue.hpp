#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace nasalgan {

/// Ordered `key=value` store backing every plain-text config, sidecar and
/// lock file. Lines starting with '#' and blank lines are ignored on read.
class KeyValueFile {
public:
    static KeyValueFile parse(std::string_view text);
    static KeyValueFile load(const std::filesystem::path& path);

    void save(const std::filesystem::path& path) const;
    std::string to_string() const;

    bool contains(const std::string& key) const { return values_.contains(key); }
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    void set(const std::string& key, const char* value) { values_[key] = value; }
    void set(const std::string& key, double value);
    void set(const std::string& key, std::int64_t value);
    void set(const std::string& key, int value) { set(key, static_cast<std::int64_t>(value)); }
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, bool value) { values_[key] = value ? "true" : "false"; }

    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, std::string fallback) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const noexcept { return values_; }
    void merge(const KeyValueFile& other);

private:
    std::map<std::string, std::string> values_;
};

/// Shortest decimal text that round-trips a double.
std::string format_double(double v);

}  // namespace nasalgan
