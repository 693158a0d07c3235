#include "fracdn/config.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <string>

#include <json.hpp>

#include "fracdn/errors.hpp"
#include "fracdn/io.hpp"

namespace fracdn {

namespace {

using Json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config." + path + ": " + what);
}

void reject_unknown_keys(const Json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
        }
    }
}

const Json* find(const Json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const Json& require(const Json& obj, const std::string& path, const char* key) {
    const Json* v = find(obj, key);
    if (v == nullptr) fail(path.empty() ? key : path + "." + key, "missing required key");
    return *v;
}

double get_number(const Json& obj, const std::string& path, const char* key,
                  double fallback) {
    const Json* v = find(obj, key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) fail(path + "." + key, "must be a number");
    return v->get<double>();
}

int get_int(const Json& obj, const std::string& path, const char* key, int fallback) {
    const Json* v = find(obj, key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer()) fail(path + "." + key, "must be an integer");
    return v->get<int>();
}

bool get_bool(const Json& obj, const std::string& path, const char* key, bool fallback) {
    const Json* v = find(obj, key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) fail(path + "." + key, "must be true or false");
    return v->get<bool>();
}

std::string get_string(const Json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
    const Json* v = find(obj, key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) fail(path + "." + key, "must be a string");
    return v->get<std::string>();
}

// Hoelder exponents admit "inf".
double get_exponent(const Json& obj, const std::string& path, const char* key,
                    double fallback) {
    const Json* v = find(obj, key);
    if (v == nullptr) return fallback;
    if (v->is_string()) {
        if (v->get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        fail(path + "." + key, "must be a number or \"inf\"");
    }
    if (!v->is_number()) fail(path + "." + key, "must be a number or \"inf\"");
    const double e = v->get<double>();
    if (!(e >= 1.0)) fail(path + "." + key, "must be at least 1");
    return e;
}

Box parse_box(const Json& obj, const std::string& path, const char* key) {
    const Json& v = require(obj, path, key);
    const std::string where = path + "." + key;
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(where, "must be a two-number array [lo, hi]");
    }
    Box box;
    box.lo = v[0].get<double>();
    box.hi = v[1].get<double>();
    if (!(box.lo < box.hi)) fail(where, "must have lo < hi");
    return box;
}

FieldSpec parse_field(const Json& obj, const std::string& parent, const char* key,
                      FieldSpec fallback, bool allow_random) {
    const Json* v = find(obj, key);
    if (v == nullptr) return fallback;
    const std::string path = parent + "." + key;
    if (!v->is_object()) fail(path, "must be an object with a \"kind\"");
    reject_unknown_keys(*v, path, {"kind", "value", "center", "width", "amplitude", "base"});

    FieldSpec spec;
    spec.kind = get_string(*v, path, "kind", "");
    if (spec.kind == "zero") {
        // nothing further
    } else if (spec.kind == "constant") {
        spec.value = get_number(*v, path, "value", 0.0);
        if (!std::isfinite(spec.value)) fail(path + ".value", "must be finite");
    } else if (spec.kind == "bump") {
        const Json* center = find(*v, "center");
        if (center != nullptr) {
            if (!center->is_array() || center->empty() || center->size() > 2) {
                fail(path + ".center", "must be an array of 1 or 2 numbers");
            }
            for (const auto& c : *center) {
                if (!c.is_number()) fail(path + ".center", "must contain numbers");
            }
            spec.center_x = (*center)[0].get<double>();
            if (center->size() == 2) spec.center_y = (*center)[1].get<double>();
        }
        spec.width = get_number(*v, path, "width", 0.25);
        spec.amplitude = get_number(*v, path, "amplitude", 1.0);
        spec.base = get_number(*v, path, "base", 0.0);
        if (!(spec.width > 0.0)) fail(path + ".width", "must be positive");
        if (!std::isfinite(spec.amplitude) || !std::isfinite(spec.base)) {
            fail(path, "amplitude and base must be finite");
        }
    } else if (spec.kind == "random") {
        if (!allow_random) fail(path + ".kind", "\"random\" is only allowed for phi");
    } else {
        fail(path + ".kind",
             "must be one of \"zero\", \"constant\", \"bump\"" +
                 std::string(allow_random ? ", \"random\"" : ""));
    }
    return spec;
}

Json exponent_echo(double e) {
    if (std::isinf(e)) return Json("inf");
    return Json(e);
}

}  // namespace

bool is_known_experiment(const std::string& name) {
    static const std::set<std::string> known = {
        "forward",   "dnmap",      "operator-xcheck", "extension-check",
        "decay",     "gauge-demo", "ucp-probe",       "invert"};
    return known.count(name) > 0;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(origin + ": not valid JSON: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(origin + ": top level must be an object");
    reject_unknown_keys(doc, "",
                        {"experiment", "grid", "regions", "physics", "solver", "output",
                         "seed"});

    RunConfig cfg;
    cfg.experiment = get_string(doc, "", "experiment", "");
    if (cfg.experiment.empty()) fail("experiment", "missing required key");
    if (!is_known_experiment(cfg.experiment)) {
        fail("experiment",
             "unknown experiment '" + cfg.experiment +
                 "' (expected forward, dnmap, operator-xcheck, extension-check, decay, "
                 "gauge-demo, ucp-probe, or invert)");
    }

    {
        const Json& grid = require(doc, "", "grid");
        if (!grid.is_object()) fail("grid", "must be an object");
        reject_unknown_keys(grid, "grid", {"dim", "L", "M"});
        cfg.dim = get_int(grid, "grid", "dim", 1);
        if (cfg.dim != 1 && cfg.dim != 2) fail("grid.dim", "must be 1 or 2");
        cfg.L = get_number(grid, "grid", "L", 1.0);
        if (!(cfg.L > 0.0) || !std::isfinite(cfg.L)) fail("grid.L", "must be positive");
        cfg.M = get_int(grid, "grid", "M", 31);
        if (cfg.M < 8) fail("grid.M", "must be at least 8 nodes per axis");
    }

    {
        const Json& regions = require(doc, "", "regions");
        if (!regions.is_object()) fail("regions", "must be an object");
        reject_unknown_keys(regions, "regions", {"omega", "w"});
        cfg.omega_box = parse_box(regions, "regions", "omega");
        cfg.w_box = parse_box(regions, "regions", "w");
    }

    cfg.sigma.kind = "constant";
    cfg.sigma.value = 1.0;
    if (const Json* physics = find(doc, "physics")) {
        if (!physics->is_object()) fail("physics", "must be an object");
        reject_unknown_keys(*physics, "physics", {"s", "sigma", "source", "phi"});
        cfg.s = get_number(*physics, "physics", "s", 0.5);
        if (!(cfg.s > 0.0 && cfg.s < 1.0)) fail("physics.s", "must lie in (0, 1)");
        cfg.sigma = parse_field(*physics, "physics", "sigma", cfg.sigma, false);
        if (cfg.sigma.kind == "zero") fail("physics.sigma.kind", "conductivity cannot be zero");
        cfg.source = parse_field(*physics, "physics", "source", cfg.source, false);
        cfg.phi = parse_field(*physics, "physics", "phi", cfg.phi, true);
    }

    if (const Json* solver = find(doc, "solver")) {
        if (!solver->is_object()) fail("solver", "must be an object");
        reject_unknown_keys(
            *solver, "solver",
            {"quad_tol", "source_alpha", "gn", "noise", "y_ladder", "holder", "trace"});
        SolverConfig& sc = cfg.solver;
        sc.quad_tol = get_number(*solver, "solver", "quad_tol", sc.quad_tol);
        if (!(sc.quad_tol > 0.0)) fail("solver.quad_tol", "must be positive");
        sc.source_alpha = get_number(*solver, "solver", "source_alpha", sc.source_alpha);
        if (sc.source_alpha < 0.0) fail("solver.source_alpha", "must be non-negative");
        sc.noise = get_number(*solver, "solver", "noise", sc.noise);
        if (sc.noise < 0.0) fail("solver.noise", "must be non-negative");

        if (const Json* gn = find(*solver, "gn")) {
            if (!gn->is_object()) fail("solver.gn", "must be an object");
            reject_unknown_keys(*gn, "solver.gn",
                                {"alpha", "max_iter", "grad_tol", "ellipticity",
                                 "armijo_max", "armijo_c", "stall_rel", "stall_iters"});
            GnParams& g = sc.gn;
            g.alpha = get_number(*gn, "solver.gn", "alpha", g.alpha);
            if (g.alpha < 0.0) fail("solver.gn.alpha", "must be non-negative");
            g.max_iter = get_int(*gn, "solver.gn", "max_iter", g.max_iter);
            if (g.max_iter < 0) fail("solver.gn.max_iter", "must be non-negative");
            g.grad_tol = get_number(*gn, "solver.gn", "grad_tol", g.grad_tol);
            if (!(g.grad_tol >= 0.0)) fail("solver.gn.grad_tol", "must be non-negative");
            g.ellipticity = get_number(*gn, "solver.gn", "ellipticity", g.ellipticity);
            if (!(g.ellipticity > 0.0 && g.ellipticity < 1.0)) {
                fail("solver.gn.ellipticity", "must lie in (0, 1)");
            }
            g.armijo_max = get_int(*gn, "solver.gn", "armijo_max", g.armijo_max);
            if (g.armijo_max < 1) fail("solver.gn.armijo_max", "must be at least 1");
            g.armijo_c = get_number(*gn, "solver.gn", "armijo_c", g.armijo_c);
            if (!(g.armijo_c > 0.0 && g.armijo_c < 1.0)) {
                fail("solver.gn.armijo_c", "must lie in (0, 1)");
            }
            g.stall_rel = get_number(*gn, "solver.gn", "stall_rel", g.stall_rel);
            if (!(g.stall_rel >= 0.0)) fail("solver.gn.stall_rel", "must be non-negative");
            g.stall_iters = get_int(*gn, "solver.gn", "stall_iters", g.stall_iters);
            if (g.stall_iters < 1) fail("solver.gn.stall_iters", "must be at least 1");
        }

        if (const Json* ladder = find(*solver, "y_ladder")) {
            if (!ladder->is_object()) fail("solver.y_ladder", "must be an object");
            reject_unknown_keys(*ladder, "solver.y_ladder", {"lo", "hi", "rungs"});
            YLadderSpec& y = sc.y_ladder;
            y.lo = get_number(*ladder, "solver.y_ladder", "lo", y.lo);
            y.hi = get_number(*ladder, "solver.y_ladder", "hi", y.hi);
            y.rungs = get_int(*ladder, "solver.y_ladder", "rungs", y.rungs);
            if (!(y.lo > 0.0)) fail("solver.y_ladder.lo", "must be positive");
            if (!(y.hi > y.lo)) fail("solver.y_ladder.hi", "must exceed lo");
            if (y.rungs < 2) fail("solver.y_ladder.rungs", "must be at least 2");
        }

        if (const Json* holder = find(*solver, "holder")) {
            if (!holder->is_object()) fail("solver.holder", "must be an object");
            reject_unknown_keys(*holder, "solver.holder", {"p", "q", "r"});
            HolderSpec& h = sc.holder;
            h.p = get_exponent(*holder, "solver.holder", "p", h.p);
            h.q = get_exponent(*holder, "solver.holder", "q", h.q);
            h.r = get_exponent(*holder, "solver.holder", "r", h.r);
            const auto inv = [](double e) { return std::isinf(e) ? 0.0 : 1.0 / e; };
            if (std::abs(1.0 + inv(h.r) - inv(h.p) - inv(h.q)) > 1e-12) {
                fail("solver.holder", "exponents must satisfy 1 + 1/r = 1/p + 1/q");
            }
        }

        if (const Json* trace = find(*solver, "trace")) {
            if (!trace->is_object()) fail("solver.trace", "must be an object");
            reject_unknown_keys(*trace, "solver.trace", {"z0", "rungs"});
            TraceLadderSpec& t = sc.trace;
            t.z0 = get_number(*trace, "solver.trace", "z0", t.z0);
            t.rungs = get_int(*trace, "solver.trace", "rungs", t.rungs);
            if (!(t.z0 > 0.0)) fail("solver.trace.z0", "must be positive");
            if (t.rungs < 3) fail("solver.trace.rungs", "must be at least 3");
        }
    }

    if (const Json* output = find(doc, "output")) {
        if (!output->is_object()) fail("output", "must be an object");
        reject_unknown_keys(*output, "output", {"dir", "csv", "json"});
        cfg.output.dir = get_string(*output, "output", "dir", cfg.output.dir);
        if (cfg.output.dir.empty()) fail("output.dir", "must be non-empty");
        cfg.output.csv = get_bool(*output, "output", "csv", cfg.output.csv);
        cfg.output.json = get_bool(*output, "output", "json", cfg.output.json);
    }

    if (const Json* seed = find(doc, "seed")) {
        if (!seed->is_number_unsigned() && !(seed->is_number_integer() && seed->get<long long>() >= 0)) {
            fail("seed", "must be a non-negative integer");
        }
        cfg.seed = seed->get<std::uint64_t>();
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text_file(path), path.string());
}

std::string config_echo(const RunConfig& cfg) {
    const auto field_json = [](const FieldSpec& f) {
        Json j;
        j["kind"] = f.kind;
        if (f.kind == "constant") j["value"] = f.value;
        if (f.kind == "bump") {
            j["center"] = {f.center_x, f.center_y};
            j["width"] = f.width;
            j["amplitude"] = f.amplitude;
            j["base"] = f.base;
        }
        return j;
    };
    Json doc;
    doc["experiment"] = cfg.experiment;
    doc["grid"] = {{"dim", cfg.dim}, {"L", cfg.L}, {"M", cfg.M}};
    doc["regions"] = {{"omega", {cfg.omega_box.lo, cfg.omega_box.hi}},
                      {"w", {cfg.w_box.lo, cfg.w_box.hi}}};
    doc["physics"] = {{"s", cfg.s},
                      {"sigma", field_json(cfg.sigma)},
                      {"source", field_json(cfg.source)},
                      {"phi", field_json(cfg.phi)}};
    doc["solver"] = {
        {"quad_tol", cfg.solver.quad_tol},
        {"source_alpha", cfg.solver.source_alpha},
        {"gn",
         {{"alpha", cfg.solver.gn.alpha},
          {"max_iter", cfg.solver.gn.max_iter},
          {"grad_tol", cfg.solver.gn.grad_tol},
          {"ellipticity", cfg.solver.gn.ellipticity},
          {"armijo_max", cfg.solver.gn.armijo_max},
          {"armijo_c", cfg.solver.gn.armijo_c},
          {"stall_rel", cfg.solver.gn.stall_rel},
          {"stall_iters", cfg.solver.gn.stall_iters}}},
        {"noise", cfg.solver.noise},
        {"y_ladder",
         {{"lo", cfg.solver.y_ladder.lo},
          {"hi", cfg.solver.y_ladder.hi},
          {"rungs", cfg.solver.y_ladder.rungs}}},
        {"holder",
         {{"p", exponent_echo(cfg.solver.holder.p)},
          {"q", exponent_echo(cfg.solver.holder.q)},
          {"r", exponent_echo(cfg.solver.holder.r)}}},
        {"trace", {{"z0", cfg.solver.trace.z0}, {"rungs", cfg.solver.trace.rungs}}}};
    doc["output"] = {{"dir", cfg.output.dir}, {"csv", cfg.output.csv}, {"json", cfg.output.json}};
    doc["seed"] = cfg.seed;
    return doc.dump(2) + "\n";
}

}  // namespace fracdn
