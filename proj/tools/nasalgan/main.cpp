#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "nasalgan/error.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct Invocation {
    std::map<std::string, std::string> flags;
    std::optional<std::string> config;
    std::string out;
};

}  // namespace

int main(int argc, char** argv) {
    using namespace nasalgan;
    CLI::App app{"nasalgan: ciwGAN nasality probing pipeline"};
    app.require_subcommand(1);
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "no progress messages");

    const auto commands = cli::all_commands();
    std::vector<Invocation> inv(commands.size());
    std::vector<CLI::App*> subs;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const auto& cmd = commands[i];
        auto* sub = app.add_subcommand(cmd.name, cmd.description);
        sub->fallthrough();
        sub->add_option("--config", inv[i].config, "key=value file (a config.lock reproduces a run)");
        sub->add_option("--out", inv[i].out, "output directory")->required();
        for (const auto& p : cmd.params) {
            auto* opt = sub->add_option_function<std::string>(
                cli::flag_name(p.key), [&inv, i, key = p.key](const std::string& v) { inv[i].flags[key] = v; },
                p.help);
            if (!p.fallback.empty()) opt->description(p.help + " [" + p.fallback + "]");
        }
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    for (std::size_t i = 0; i < commands.size(); ++i) {
        if (!subs[i]->parsed()) continue;
        try {
            std::optional<std::filesystem::path> cfg;
            if (inv[i].config) cfg = *inv[i].config;
            const auto params = cli::merge_params(commands[i], cfg, inv[i].flags);
            cli::execute(commands[i], params, inv[i].out, quiet);
            return kOk;
        } catch (const UsageError& e) {
            std::cerr << "nasalgan " << commands[i].name << ": " << e.what() << "\n";
            return kUsage;
        } catch (const NumericalError& e) {
            std::cerr << "nasalgan " << commands[i].name << ": numerical failure: " << e.what() << "\n";
            return kNumerical;
        } catch (const DataError& e) {
            std::cerr << "nasalgan " << commands[i].name << ": " << e.what() << "\n";
            return kData;
        } catch (const std::exception& e) {
            std::cerr << "nasalgan " << commands[i].name << ": " << e.what() << "\n";
            return kData;
        }
    }
    return kUsage;
}
