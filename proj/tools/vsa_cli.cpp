#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "vsa/cli.hpp"
#include "vsa/io.hpp"

namespace {

struct Flag {
    const char* name;
    const char* help;
};

constexpr Flag kFlags[] = {
    {"dataset", "dataset root, or 'synthetic' for the built-in corpus"},
    {"format", "canonical_tsv | svc_style"},
    {"features", "position | angle | fused"},
    {"verifier", "dtw | man"},
    {"fusion", "none | feature | score (with --features fused)"},
    {"omega", "score-fusion weight of the position verifier"},
    {"pen-angles", "raw | smoothed | fixed"},
    {"fixed-theta", "azimuth for fixed pen angles (rad)"},
    {"fixed-phi", "inclination for fixed pen angles (rad)"},
    {"penup", "lift5mm | flat | flat-q6"},
    {"scale", "0.1 | 1 | 10"},
    {"gamma", "writing-plane rotation rx,ry,rz (rad)"},
    {"geometry", "fixed | realistic"},
    {"seed", "global seed"},
    {"out", "output directory"},
    {"threads", "worker threads (0 = all cores)"},
    {"signers", "signer count for synth and sample_geometry"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual skeletal arm signature toolkit"};
    app.require_subcommand(1);

    std::string config_file;
    std::map<std::string, std::string> flags;

    using Command = std::function<int(const vsa::cli::RunConfig&, std::ostream&)>;
    const std::pair<const char*, std::pair<const char*, Command>> commands[] = {
        {"extract", {"write per-signature joint angles and positions", vsa::cli::cmd_extract}},
        {"validate", {"round-trip SNR of every signature", vsa::cli::cmd_validate}},
        {"benchmark", {"enrollment protocol and EER report", vsa::cli::cmd_benchmark}},
        {"sample_geometry", {"per-signer realistic bone lengths", vsa::cli::cmd_sample_geometry}},
        {"synth", {"write the synthetic corpus in canonical form", vsa::cli::cmd_synth}},
        {"convert", {"rewrite a dataset in canonical form", vsa::cli::cmd_convert}},
    };

    std::map<CLI::App*, Command> handlers;
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config_file, "key=value file; flags override it");
        for (const Flag& f : kFlags) {
            const std::string key = f.name;
            sub->add_option_function<std::string>(
                "--" + key, [&flags, key](const std::string& v) { flags[key] = v; }, f.help);
        }
        handlers[sub] = entry.second;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    vsa::cli::RunConfig config;
    try {
        const vsa::cli::Settings file =
            config_file.empty() ? vsa::cli::Settings{} : vsa::cli::read_settings_file(config_file);
        config = vsa::cli::resolve_config(file, {flags.begin(), flags.end()});
        for (auto& [sub, handler] : handlers) {
            if (sub->parsed()) return handler(config, std::cout);
        }
        return 2;
    } catch (const std::exception& e) {
        const auto record = vsa::cli::error_record(e);
        std::cerr << record.dump() << std::endl;
        try {
            vsa::io::write_text(std::filesystem::path(config.out) / "error.json",
                                record.dump(2) + "\n");
        } catch (...) {
        }
        return 1;
    }
}
