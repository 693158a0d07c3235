#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "fracdn/grid.hpp"
#include "fracdn/inversion.hpp"
#include "fracdn/types.hpp"

namespace fracdn {

// How a scalar field over the grid is produced.
//   "zero"     -> 0 everywhere
//   "constant" -> value everywhere
//   "bump"     -> base + amplitude * smooth bump at center with given width
//   "random"   -> unit-sup-norm Gaussian values (gauge field only)
struct FieldSpec {
    std::string kind = "zero";
    double value = 0.0;  // constant kind
    double center_x = 0.0;
    double center_y = 0.0;
    double width = 0.25;
    double amplitude = 1.0;
    double base = 0.0;
};

struct YLadderSpec {
    double lo = 0.1;
    double hi = 10.0;
    int rungs = 20;
};

// Hoelder triple for the decay report; infinity spelled "inf" in configs.
struct HolderSpec {
    double p = 1.0;
    double q = 2.0;
    double r = 2.0;
};

struct TraceLadderSpec {
    double z0 = 0.5;
    int rungs = 8;
};

struct SolverConfig {
    double quad_tol = 1e-10;      // kernel quadrature relative tolerance
    double source_alpha = 1e-12;  // Tikhonov weight for source recovery
    GnParams gn;                  // conductivity fit parameters
    double noise = 0.0;           // relative Gaussian noise on DN outputs
    YLadderSpec y_ladder;
    HolderSpec holder;
    TraceLadderSpec trace;
};

struct OutputConfig {
    std::string dir = "out";
    bool csv = true;
    bool json = true;
};

struct RunConfig {
    std::string experiment;
    int dim = 1;
    double L = 1.0;
    int M = 31;
    Box omega_box;
    Box w_box;
    double s = 0.5;
    FieldSpec sigma;
    FieldSpec source;
    FieldSpec phi;
    SolverConfig solver;
    OutputConfig output;
    std::uint64_t seed = 1;
};

// Parse and schema-check a config document. Unknown keys, wrong types, and
// out-of-range values raise a config error naming the offending path
// (e.g. "physics.sigma.width"). `origin` labels the document in messages.
RunConfig parse_config(const std::string& text, const std::string& origin);
RunConfig load_config(const std::filesystem::path& path);

// Canonical JSON echo of a config (defaults filled in, keys sorted); embedded
// in every experiment's provenance block and used by `validate`.
std::string config_echo(const RunConfig& config);

// The experiment names run() accepts.
bool is_known_experiment(const std::string& name);

}  // namespace fracdn
