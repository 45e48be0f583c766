#include "spin2/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace spin2 {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail("unknown key '" + it.key() + "' in " + where);
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_number()) fail("missing numeric '" + key + "' in " + where);
    return j[key].get<double>();
}

PotentialSpec parse_potential(const json& j) {
    PotentialSpec p;
    if (j.is_null()) return p;
    check_keys(j, "model.potential", {"kind", "eta", "q"});
    const std::string kind = j.value("kind", "harmonic_lattice");
    if (kind == "box") {
        p.kind = PotentialSpec::Kind::Box;
    } else if (kind == "harmonic_lattice") {
        p.kind = PotentialSpec::Kind::HarmonicLattice;
        p.eta = j.value("eta", 0.0);
        if (j.contains("q")) {
            const auto q = j["q"].get<std::vector<double>>();
            if (q.empty() || q.size() > 2) fail("potential q must have 1 or 2 entries");
            p.q[0] = q[0];
            p.q[1] = q.size() > 1 ? q[1] : q[0];
        }
    } else {
        fail("unknown potential kind '" + kind + "'");
    }
    return p;
}

Profile parse_profile(const std::string& s) {
    if (s == "auto") return Profile::Auto;
    if (s == "gaussian") return Profile::Gaussian;
    if (s == "thomas_fermi") return Profile::ThomasFermi;
    if (s == "box_mode") return Profile::BoxMode;
    fail("unknown profile '" + s + "'");
}

GroundVariant parse_variant(const json& j) {
    GroundVariant v;
    if (j.is_null()) return v;
    check_keys(j, "initial.variant", {"family", "gamma", "theta", "plus_branch"});
    v.family = j.value("family", 0);
    v.gamma = j.value("gamma", 0.0);
    if (j.contains("theta") && !j["theta"].is_null()) v.theta = j["theta"].get<double>();
    v.plus_branch = j.value("plus_branch", false);
    return v;
}

InitialDataSpec parse_initial(const json& j) {
    InitialDataSpec spec;
    if (j.is_null()) return spec;
    check_keys(j, "initial", {"kind", "profile", "sigma", "variant", "custom"});
    const std::string kind = j.value("kind", "sma");
    if (kind == "sma") spec.kind = InitialDataSpec::Kind::SmaClosedForm;
    else if (kind == "general_sigma") spec.kind = InitialDataSpec::Kind::GeneralSigma;
    else if (kind == "custom") spec.kind = InitialDataSpec::Kind::Custom;
    else fail("unknown initial-data kind '" + kind + "'");
    spec.profile = parse_profile(j.value("profile", "auto"));
    spec.sigma = j.value("sigma", 0.0);
    if (j.contains("variant")) spec.variant = parse_variant(j["variant"]);
    if (spec.kind == InitialDataSpec::Kind::Custom) {
        if (!j.contains("custom") || !j["custom"].is_array() || j["custom"].size() != 5)
            fail("custom initial data needs an array of 5 {profile, weight} entries");
        for (int i = 0; i < 5; ++i) {
            const json& c = j["custom"][i];
            check_keys(c, "initial.custom[i]", {"profile", "weight"});
            spec.custom[i].profile = parse_profile(c.value("profile", "gaussian"));
            spec.custom[i].weight = c.value("weight", 0.0);
        }
    }
    return spec;
}

Grid parse_grid(const json& j) {
    int dim = 1;
    if (!j.is_null()) {
        check_keys(j, "grid", {"dim", "lower", "upper", "cells"});
        dim = j.value("dim", 1);
    }
    if (dim != 1 && dim != 2) fail("grid.dim must be 1 or 2");

    Grid g;
    g.dim = dim;
    g.cells = dim == 1 ? std::array<int, 2>{1280, 0} : std::array<int, 2>{320, 320};
    g.lower = {-10.0, -10.0};
    g.upper = {10.0, 10.0};
    auto fill = [&](const char* key, auto& arr, auto cast) {
        if (j.is_null() || !j.contains(key)) return;
        const auto vals = j[key].get<std::vector<double>>();
        if (static_cast<int>(vals.size()) != dim)
            fail(std::string("grid.") + key + " must have dim entries");
        for (int a = 0; a < dim; ++a) arr[a] = cast(vals[a]);
    };
    fill("lower", g.lower, [](double x) { return x; });
    fill("upper", g.upper, [](double x) { return x; });
    fill("cells", g.cells, [](double x) { return static_cast<int>(x); });
    try {
        g.validate();
    } catch (const std::exception& e) {
        fail(e.what());
    }
    return g;
}

StepperConfig parse_stepper(const json& j) {
    StepperConfig c;
    if (j.is_null()) return c;
    check_keys(j, "stepper",
               {"dt", "eps", "max_iters", "linear_tol", "linear_max_iters", "threads"});
    c.dt = j.value("dt", c.dt);
    c.eps = j.value("eps", c.eps);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.linear_tol = j.value("linear_tol", c.linear_tol);
    c.linear_max_iters = j.value("linear_max_iters", c.linear_max_iters);
    c.threads = j.value("threads", c.threads);
    if (!(c.dt > 0.0) || !(c.eps > 0.0) || c.max_iters <= 0 || !(c.linear_tol > 0.0)
        || c.linear_max_iters <= 0)
        fail("stepper parameters must be positive");
    return c;
}

RunConfig parse_run(const json& j) {
    check_keys(j, "top level",
               {"model", "grid", "stepper", "initial", "output", "seed", "perturb", "sweep"});
    if (!j.contains("model")) fail("missing 'model' section");
    const json& jm = j["model"];
    check_keys(jm, "model", {"beta0", "beta1", "beta2", "M", "potential"});

    RunConfig cfg;
    const double beta0 = jm.value("beta0", 100.0);
    const double beta1 = require_number(jm, "beta1", "model");
    const double beta2 = require_number(jm, "beta2", "model");
    const double M = jm.value("M", 0.0);
    if (!(std::abs(M) < 2.0)) fail("|M| must be < 2");
    cfg.model = make_params(beta0, beta1, beta2, M,
                            parse_potential(jm.contains("potential") ? jm["potential"] : json{}));
    cfg.grid = parse_grid(j.contains("grid") ? j["grid"] : json{});
    cfg.stepper = parse_stepper(j.contains("stepper") ? j["stepper"] : json{});
    cfg.initial = parse_initial(j.contains("initial") ? j["initial"] : json{});
    if (j.contains("output")) {
        const json& jo = j["output"];
        check_keys(jo, "output", {"dir", "fields", "diagnostics"});
        cfg.output_dir = jo.value("dir", cfg.output_dir);
        cfg.emit_fields = jo.value("fields", cfg.emit_fields);
        cfg.emit_diagnostics = jo.value("diagnostics", cfg.emit_diagnostics);
    }
    cfg.seed = j.value("seed", 0ULL);
    cfg.perturb = j.value("perturb", 0.0);
    if (cfg.perturb < 0.0) fail("perturb must be >= 0");
    return cfg;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail("parse error in '" + path + "': " + e.what());
    }
    return j;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const std::exception& e) {
        fail(std::string("parse error: ") + e.what());
    }
}

SweepConfig parse_sweep(const json& j) {
    SweepConfig s;
    s.base = parse_run(j);
    if (!j.contains("sweep")) fail("missing 'sweep' section");
    const json& js = j["sweep"];
    check_keys(js, "sweep", {"parameter", "values"});
    s.parameter = js.value("parameter", "");
    if (s.parameter != "M" && s.parameter != "beta1" && s.parameter != "beta2")
        fail("sweep.parameter must be one of M, beta1, beta2");
    if (!js.contains("values") || !js["values"].is_array() || js["values"].empty())
        fail("sweep.values must be a non-empty array");
    s.values = js["values"].get<std::vector<double>>();
    for (double v : s.values)
        if (s.parameter == "M" && !(std::abs(v) < 2.0)) fail("swept |M| values must be < 2");
    return s;
}

} // namespace

RunConfig load_run_config(const std::string& path) { return parse_run(load_json(path)); }
RunConfig parse_run_config(const std::string& text) { return parse_run(parse_text(text)); }
SweepConfig load_sweep_config(const std::string& path) { return parse_sweep(load_json(path)); }
SweepConfig parse_sweep_config(const std::string& text) { return parse_sweep(parse_text(text)); }

} // namespace spin2
