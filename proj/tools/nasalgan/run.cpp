#include "run.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nasalgan/error.hpp"

namespace nasalgan::cli {

namespace fs = std::filesystem;

std::string flag_name(const std::string& key) {
    std::string f = (key.size() == 1 ? "-" : "--") + key;
    std::replace(f.begin(), f.end(), '_', '-');
    return f;
}

KeyValueFile merge_params(const Command& cmd, const std::optional<fs::path>& config_file,
                          const std::map<std::string, std::string>& flags) {
    KeyValueFile kv;
    for (const auto& p : cmd.params) kv.set(p.key, p.fallback);
    if (config_file) {
        const auto file = KeyValueFile::load(*config_file);
        for (const auto& [key, value] : file.entries()) {
            if (key == "command") {
                if (value != cmd.name)
                    throw UsageError(config_file->string() + " was written by '" + value + "', not '" + cmd.name + "'");
                continue;
            }
            if (!kv.contains(key)) throw UsageError(config_file->string() + ": unknown key '" + key + "' for " + cmd.name);
            kv.set(key, value);
        }
    }
    for (const auto& [key, value] : flags) kv.set(key, value);
    for (const auto& p : cmd.params)
        if (p.required && kv.get(p.key).empty()) throw UsageError(cmd.name + " needs " + flag_name(p.key));
    return kv;
}

DirLock::DirLock(const fs::path& dir) : path_(dir / kLockFile) {
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        if (errno == EEXIST)
            throw DataError(dir.string() + " is in use by another run (remove " + path_.filename().string() +
                            " if that run is gone)");
        throw DataError("cannot lock " + dir.string() + ": " + std::strerror(errno));
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
    ::close(fd);
}

DirLock::~DirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

namespace {

void check_previous(const Command& cmd, const KeyValueFile& now, const fs::path& lock) {
    if (!fs::exists(lock)) return;
    const auto before = KeyValueFile::load(lock);
    auto differs = [&](const std::string& key) {
        if (std::find(cmd.extendable.begin(), cmd.extendable.end(), key) != cmd.extendable.end()) return false;
        return before.get_or(key, "\x01") != now.get_or(key, "\x01");
    };
    for (const auto& [key, value] : now.entries())
        if (differs(key))
            throw UsageError(lock.parent_path().string() + " holds a run with a different " + key + " ('" +
                             before.get_or(key, "") + "'); use a fresh --out");
    for (const auto& [key, value] : before.entries())
        if (differs(key))
            throw UsageError(lock.parent_path().string() + " holds a run with a different " + key + "; use a fresh --out");
}

template <typename Bytes>
void write_through_temp(const fs::path& path, const Bytes& bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".partial";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + path.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw DataError("cannot write " + path.string());
    }
    fs::rename(tmp, path);
}

}  // namespace

void write_atomic(const fs::path& path, const std::string& text) { write_through_temp(path, text); }
void write_atomic(const fs::path& path, const std::vector<unsigned char>& bytes) { write_through_temp(path, bytes); }

void execute(const Command& cmd, const KeyValueFile& params, const fs::path& out, bool quiet) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw DataError("cannot create output directory " + out.string());
    DirLock lock(out);

    KeyValueFile full;
    full.set("command", cmd.name);
    full.merge(params);
    check_previous(cmd, full, out / kConfigLock);
    write_atomic(out / kConfigLock, full.to_string());

    Run run{cmd.name, params, out, {}};
    run.log = [quiet, name = cmd.name](const std::string& msg) {
        if (!quiet) std::cerr << "[" << name << "] " << msg << "\n";
    };
    cmd.body(run);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::map<std::string, std::size_t> parse_counts(const std::string& text) {
    std::map<std::string, std::size_t> out;
    for (const auto& item : split_list(text)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("expected CLASS=COUNT, got '" + item + "'");
        try {
            std::size_t used = 0;
            const auto n = std::stoull(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument(item);
            out[item.substr(0, eq)] = n;
        } catch (const std::logic_error&) {
            throw UsageError("bad count in '" + item + "'");
        }
    }
    return out;
}

}  // namespace nasalgan::cli
