// Command line front end: load a JSON config, run the experiment it names,
// write the artifacts, and map failures onto the documented exit codes.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracdn/config.hpp"
#include "fracdn/errors.hpp"
#include "fracdn/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

int run_command(fracdn::RunConfig cfg) {
    fracdn::RunOutcome outcome = fracdn::run_experiment(cfg);
    std::cout << outcome.summary << "\n";
    for (const auto& file : outcome.files) {
        std::cout << "  wrote " << file.string() << "\n";
    }
    if (!outcome.checks_passed) {
        for (const auto& name : outcome.failed_checks) {
            std::cerr << "check failed: " << name << "\n";
        }
        return kExitCheckFailed;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracdn: desk-scale experiments with the fractional conductivity operator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;

    CLI::App* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("--config", config_path, "path to a JSON config file")->required();
    run->add_option("--out", out_dir,
                    "output directory (overrides FRACDN_OUTDIR and the config)");
    run->add_option("--seed", seed, "override the config seed");

    CLI::App* validate =
        app.add_subcommand("validate", "parse a config, echo its resolved form, and exit");
    validate->add_option("--config", config_path, "path to a JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        fracdn::RunConfig cfg = fracdn::load_config(config_path);
        if (validate->parsed()) {
            std::cout << fracdn::config_echo(cfg);
            return kExitOk;
        }
        if (run->count("--out") > 0) {
            cfg.output.dir = out_dir;
        } else if (const char* env = std::getenv("FRACDN_OUTDIR")) {
            cfg.output.dir = env;
        }
        if (run->count("--seed") > 0) cfg.seed = seed;
        return run_command(std::move(cfg));
    } catch (const fracdn::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const fracdn::GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const fracdn::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const fracdn::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const fracdn::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const fracdn::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
