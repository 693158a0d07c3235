#include <doctest.h>

#include <filesystem>
#include <map>
#include <string>

#include "fracdn/config.hpp"
#include "fracdn/errors.hpp"
#include "fracdn/experiments.hpp"
#include "fracdn/io.hpp"

using namespace fracdn;

namespace {

namespace fs = std::filesystem;

RunConfig shipped(const std::string& name) {
    return load_config(fs::path(FRACDN_CONFIG_DIR) / name);
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        out[entry.path().filename().string()] = read_text_file(entry.path());
    }
    return out;
}

}  // namespace

TEST_CASE("experiments: forward run produces passing checks and artifacts") {
    RunConfig cfg = shipped("forward_1d.json");
    cfg.output.dir = "exp_scratch/forward";
    fs::remove_all(cfg.output.dir);
    RunOutcome outcome = run_experiment(cfg);

    CHECK(outcome.checks_passed);
    CHECK(outcome.failed_checks.empty());
    CHECK(!outcome.summary.empty());
    REQUIRE(outcome.files.size() == 2);  // fields csv + json document
    for (const auto& file : outcome.files) CHECK(fs::exists(file));

    // the json artifact records provenance and per-check verdicts
    const std::string doc = read_text_file(fs::path(cfg.output.dir) / "forward.json");
    CHECK(doc.find("\"provenance\"") != std::string::npos);
    CHECK(doc.find("\"seed\"") != std::string::npos);
    CHECK(doc.find("\"version\"") != std::string::npos);
    CHECK(doc.find("\"prng\"") != std::string::npos);
    CHECK(doc.find("\"checks\"") != std::string::npos);
    CHECK(doc.find("defining-equation-residual") != std::string::npos);
}

TEST_CASE("experiments: artifact bytes are a function of the seed") {
    RunConfig cfg = shipped("gauge_demo_1d.json");  // random phi: exercises the prng
    cfg.output.dir = "exp_scratch/determinism";

    fs::remove_all(cfg.output.dir);
    run_experiment(cfg);
    auto first = read_dir(cfg.output.dir);

    fs::remove_all(cfg.output.dir);
    run_experiment(cfg);
    auto second = read_dir(cfg.output.dir);
    CHECK(first == second);  // byte-identical artifact set

    fs::remove_all(cfg.output.dir);
    cfg.seed += 1;
    run_experiment(cfg);
    auto reseeded = read_dir(cfg.output.dir);
    CHECK(first != reseeded);
}

TEST_CASE("experiments: gauge demo passes its dichotomy checks") {
    RunConfig cfg = shipped("gauge_demo_1d.json");
    cfg.output.dir = "exp_scratch/gauge";
    fs::remove_all(cfg.output.dir);
    RunOutcome outcome = run_experiment(cfg);
    CHECK(outcome.checks_passed);
}

TEST_CASE("experiments: ucp probe passes on both shipped geometries") {
    for (const char* name : {"ucp_probe_1d.json", "ucp_probe_2d.json"}) {
        RunConfig cfg = shipped(name);
        cfg.output.dir = std::string("exp_scratch/") + name;
        fs::remove_all(cfg.output.dir);
        RunOutcome outcome = run_experiment(cfg);
        CHECK_MESSAGE(outcome.checks_passed, name);
    }
}

TEST_CASE("experiments: extension input must be nonzero") {
    RunConfig cfg = shipped("extension_check_1d.json");
    cfg.output.dir = "exp_scratch/extension_zero";
    cfg.source.kind = "zero";
    CHECK_THROWS_AS(run_experiment(cfg), DataError);
}

TEST_CASE("experiments: missed tolerance is reported, not thrown") {
    RunConfig cfg = shipped("invert_1d.json");
    cfg.output.dir = "exp_scratch/oneiter";
    cfg.solver.gn.max_iter = 1;  // deliberately unconverged
    fs::remove_all(cfg.output.dir);
    RunOutcome outcome = run_experiment(cfg);
    CHECK_FALSE(outcome.checks_passed);
    bool saw_sigma = false;
    for (const auto& name : outcome.failed_checks) {
        if (name == "sigma-relative-error") saw_sigma = true;
    }
    CHECK(saw_sigma);
}

TEST_CASE("experiments: csv output can be switched off") {
    RunConfig cfg = shipped("forward_1d.json");
    cfg.output.dir = "exp_scratch/no_csv";
    cfg.output.csv = false;
    fs::remove_all(cfg.output.dir);
    RunOutcome outcome = run_experiment(cfg);
    REQUIRE(outcome.files.size() == 1);
    CHECK(outcome.files[0].extension() == ".json");
}
