#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nasalgan/error.hpp"
#include "nasalgan/keyvalue.hpp"

namespace nasalgan::cli {

struct Param {
    std::string key;
    std::string fallback;  // empty with required = true means the user must supply it
    std::string help;
    bool required = false;
};

/// A malformed parameter value came from the user, so a parse failure is a
/// usage error here even though the library reports it as bad data.
template <typename F>
auto as_usage(F&& parse) {
    try {
        return parse();
    } catch (const DataError& e) {
        throw UsageError(e.what());
    }
}

/// Effective parameters of one run plus where its artifacts go.
struct Run {
    std::string command;
    KeyValueFile params;
    std::filesystem::path out;
    std::function<void(const std::string&)> log;

    const std::string& str(const std::string& key) const { return params.get(key); }
    std::uint64_t uint(const std::string& key) const {
        return as_usage([&] { return params.get_uint(key); });
    }
    double real(const std::string& key) const {
        return as_usage([&] { return params.get_double(key); });
    }
    bool flag(const std::string& key) const {
        return as_usage([&] { return params.get_bool(key); });
    }
};

struct Command {
    std::string name;
    std::string description;
    std::vector<Param> params;
    /// Keys that may differ from an existing config.lock in the output
    /// directory (the run then extends the earlier one).
    std::vector<std::string> extendable;
    std::function<void(const Run&)> body;
};

/// Flag spelling of a parameter key: "silence_rms" -> "--silence-rms", "n" -> "-n".
std::string flag_name(const std::string& key);

/// defaults < config file < explicit flags. Unknown keys in the config file and
/// a config written by another command are usage errors.
KeyValueFile merge_params(const Command& cmd, const std::optional<std::filesystem::path>& config_file,
                          const std::map<std::string, std::string>& flags);

/// Creates `out`, takes its lock, checks any earlier config.lock for
/// compatibility, writes the new one and runs the command body.
void execute(const Command& cmd, const KeyValueFile& params, const std::filesystem::path& out, bool quiet);

/// Exclusive per-directory lock, released on destruction.
class DirLock {
public:
    explicit DirLock(const std::filesystem::path& dir);
    ~DirLock();
    DirLock(const DirLock&) = delete;
    DirLock& operator=(const DirLock&) = delete;

private:
    std::filesystem::path path_;
};

inline constexpr const char* kLockFile = ".nasalgan.lock";
inline constexpr const char* kConfigLock = "config.lock";

/// Writes through a temporary sibling and renames, so a file that exists is complete.
void write_atomic(const std::filesystem::path& path, const std::string& text);
void write_atomic(const std::filesystem::path& path, const std::vector<unsigned char>& bytes);

std::string read_text(const std::filesystem::path& path);

/// "VT=100,VN=50" style class counts.
std::map<std::string, std::size_t> parse_counts(const std::string& text);
std::vector<std::string> split_list(const std::string& text, char sep = ',');

}  // namespace nasalgan::cli
