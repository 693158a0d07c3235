#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fracdn/config.hpp"

namespace fracdn {

struct RunOutcome {
    bool checks_passed = true;
    std::string summary;                       // one line for the console
    std::vector<std::string> failed_checks;    // names of failed assertion checks
    std::vector<std::filesystem::path> files;  // artifacts written
};

// Execute the configured experiment and write its CSV/JSON artifacts into
// config.output.dir. Every JSON artifact carries a provenance block (library
// version, PRNG identifier, seed, config echo). Assertion-class check
// failures are reported through the outcome, not thrown; numeric failures
// write <dir>/diagnostics.json and then propagate.
RunOutcome run_experiment(const RunConfig& config);

}  // namespace fracdn
