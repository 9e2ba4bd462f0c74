#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "langesim/experiments.hpp"
#include "langesim/verify.hpp"

namespace {

using namespace langesim;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBlowup = 3;

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out;
};

ExecPolicy policy_for(int threads) { return threads == 1 ? ExecPolicy::serial() : ExecPolicy::parallel(threads); }

void log_line(const std::string& msg) { std::cerr << "[langesim] " << msg << std::endl; }

// Writes to `path` (stdout when empty) only after the text is complete.
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
    f << text;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
    log_line("wrote " + path);
}

int run_experiment(ExperimentKind kind, const std::string& config, const std::optional<std::string>& profile,
                   const CommonOptions& common) {
    ConfigOverrides ov;
    ov.experiment = kind;
    ov.profile = profile;
    ov.seed = common.seed;
    if (!common.out.empty()) ov.output = common.out;
    const ExperimentConfig cfg = load_config(config, ov);
    log_line(to_string(cfg.experiment) + " profile=" + (cfg.profile.empty() ? "-" : cfg.profile) +
             " seed=" + std::to_string(cfg.seed));
    std::ostringstream os;
    run_and_write(cfg, os, policy_for(common.threads), log_line);
    emit(cfg.output, os.str());
    return 0;
}

std::uint64_t verify_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("LANGESIM_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError("LANGESIM_SEED: not an unsigned 64-bit integer");
    }
    return 1;
}

int run_verify(const std::vector<std::string>& oracles, const std::string& scale, const CommonOptions& common) {
    VerifySettings settings = scale == "smoke" ? VerifySettings::smoke() : VerifySettings{};
    settings.seed = verify_seed(common.seed);
    const std::vector<std::string> names = oracles.empty() ? oracle_names() : oracles;
    const auto reports = run_oracles(names, settings, policy_for(common.threads), log_line);
    std::ostringstream os;
    write_report(os, reports, settings.seed);
    emit(common.out, os.str());
    for (const auto& r : reports)
        if (!r.passed) return kExitFailure;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Langevin dynamics under space-time periodic forcing"};
    app.set_version_flag("--version", std::string(LANGESIM_VERSION));
    app.require_subcommand(1);

    CommonOptions common;
    std::string config;
    std::optional<std::string> profile;
    std::vector<std::string> oracles;
    std::string scale = "desk";

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "Master seed (default: LANGESIM_SEED, then the config file)");
        sub->add_option("--threads", common.threads, "Worker threads (0: all available)")->check(CLI::NonNegativeNumber);
        sub->add_option("--out", common.out, "Output CSV path (default: config output, else stdout)");
    };

    std::vector<std::pair<CLI::App*, ExperimentKind>> experiments;
    for (ExperimentKind kind : {ExperimentKind::linear_response, ExperimentKind::negative_mobility,
                                ExperimentKind::resonance_scan, ExperimentKind::diffusion_sweep}) {
        CLI::App* sub = app.add_subcommand(to_string(kind), "Run the " + to_string(kind) + " experiment");
        sub->add_option("--config", config, "JSON configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--profile", profile, "Configuration profile (paper or desk)");
        add_common(sub);
        experiments.emplace_back(sub, kind);
    }
    CLI::App* verify = app.add_subcommand("verify", "Run the analytic oracles and cross-checks");
    verify->add_option("--oracle", oracles, "Oracle to run (repeatable; default: all)")
        ->check(CLI::IsMember(oracle_names()));
    verify->add_option("--scale", scale, "Run sizes")->check(CLI::IsMember({"desk", "smoke"}));
    add_common(verify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return run_verify(oracles, scale, common);
        for (const auto& [sub, kind] : experiments)
            if (sub->parsed()) return run_experiment(kind, config, profile, common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return kExitConfig;
    } catch (const NumericalBlowup& e) {
        std::cerr << "numerical blow-up: " << e.what() << std::endl;
        return kExitBlowup;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitFailure;
    }
    return kExitFailure;
}
