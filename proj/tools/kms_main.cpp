#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kms/io.hpp"
#include "kms/runner.hpp"
#include "kms/version.hpp"

namespace {

kms::RunConfig load_config(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(kms::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw kms::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return kms::parse_run_config(doc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-field oscillator toolkit: kinetic, hydrodynamic, and particle runs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kms::kVersion);

    auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    std::string config_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    int threads = 0;
    bool quiet = false;
    run->add_option("config", config_path, "Path to the JSON config")->required();
    run->add_option("--output-dir", output_dir, "Override the output directory");
    auto* seed_opt = run->add_option("--seed", seed, "Override the seed");
    auto* threads_opt = run->add_option("--threads", threads, "Worker threads")
                            ->check(CLI::PositiveNumber);
    run->add_flag("--quiet", quiet, "Suppress progress output");

    auto* validate = app.add_subcommand("validate", "Check a JSON config without running");
    std::string validate_path;
    validate->add_option("config", validate_path, "Path to the JSON config")->required();

    auto* list = app.add_subcommand("list-experiments", "List known experiment names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& name : kms::experiment_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        if (validate->parsed()) {
            const auto cfg = load_config(validate_path);
            std::printf("ok: experiment %s\n", cfg.experiment.c_str());
            return 0;
        }
        auto cfg = load_config(config_path);
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (seed_opt->count() > 0) cfg.seed = seed;
        if (threads_opt->count() > 0) cfg.threads = threads;
        if (quiet) cfg.quiet = true;
        const auto outcome = kms::run_experiment(cfg);
        if (!outcome.ok()) {
            std::fprintf(stderr, "%s: %s%s%s\n", cfg.experiment.c_str(),
                         outcome.status.c_str(), outcome.message.empty() ? "" : " - ",
                         outcome.message.c_str());
            return 1;
        }
        return 0;
    } catch (const kms::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
