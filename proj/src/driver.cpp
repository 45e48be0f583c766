#include "spin2/driver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "spin2/projection.hpp"
#include "spin2/sma.hpp"

namespace spin2 {

namespace {

void apply_perturbation(SpinorField& f, double amp, unsigned long long seed) {
    double peak = 0.0;
    for (const auto& comp : f.c)
        for (const Complex& z : comp) peak = std::max(peak, std::abs(z));
    if (peak == 0.0) peak = 1.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& comp : f.c)
        for (Complex& z : comp) z += amp * peak * Complex{u(rng), u(rng)};
    for (auto& comp : f.c) zero_boundary(comp, f.grid);
}

Masses reported_masses(const SpinorField& state, bool mirrored) {
    Masses m = masses(state);
    if (mirrored) {
        std::reverse(m.comp.begin(), m.comp.end());
        m.magnetization = -m.magnetization;
    }
    return m;
}

} // namespace

RunOutcome execute_run(const RunConfig& cfg, bool dry_run) {
    RunOutcome out;
    out.dry_run = dry_run;

    SpinorField phi0 = build_initial_data(cfg.initial, cfg.model, cfg.grid);
    if (cfg.perturb > 0.0) {
        apply_perturbation(phi0, cfg.perturb, cfg.seed);
        project_in_place(phi0, solve_sigma(weights_of(phi0, cfg.model.M)));
    }

    if (dry_run) {
        out.state = std::move(phi0);
        out.energy = total_energy(out.state, cfg.model);
        out.diag.converged = false;
        out.diag.iterations = 0;
        out.report = reported_masses(out.state, cfg.model.mirrored);
        return out;
    }

    auto [state, diag] = run_to_ground(phi0, cfg.model, cfg.stepper);
    out.state = std::move(state);
    out.diag = std::move(diag);
    out.energy = out.diag.energy.back();
    out.fit = el_residual(out.state, cfg.model);
    out.report = reported_masses(out.state, cfg.model.mirrored);
    return out;
}

std::string summary_json(const RunConfig& cfg, const RunOutcome& out) {
    nlohmann::ordered_json j;
    j["energy"] = out.energy;
    j["masses"] = out.report.comp;
    j["n_total"] = out.report.total;
    j["m_total"] = out.report.magnetization;
    j["mu"] = out.fit.mu;
    j["lambda"] = cfg.model.mirrored ? -out.fit.lambda : out.fit.lambda;
    j["el_residual"] = out.fit.residual;
    j["degenerate_fit"] = out.fit.degenerate;
    j["iterations"] = out.diag.iterations;
    j["converged"] = out.diag.converged;
    j["dry_run"] = out.dry_run;
    j["seed"] = cfg.seed;
    j["perturb"] = cfg.perturb;

    const LandscapeMin lm = minimize_landscape(cfg.model.beta1, cfg.model.beta2, cfg.model.M);
    const BetaM bm = beta_of_M(cfg.model.beta0, cfg.model.beta1, cfg.model.beta2, cfg.model.M);
    nlohmann::ordered_json ph;
    ph["label"] = phase_name(lm.phase);
    if (!lm.detail.empty()) ph["detail"] = lm.detail;
    ph["tau_g"] = lm.td.tau;
    ph["delta_g"] = lm.td.delta;
    ph["beta_M"] = bm.value;
    j["phase"] = ph;
    j["mirrored"] = cfg.model.mirrored;
    return j.dump(2) + "\n";
}

void write_run_outputs(const RunConfig& cfg, const RunOutcome& out) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    {
        std::ofstream s(fs::path(cfg.output_dir) / "summary.json");
        s << summary_json(cfg, out);
    }
    if (cfg.emit_fields) {
        const SpinorField view = cfg.model.mirrored ? mirror(out.state) : out.state;
        write_field_snapshot((fs::path(cfg.output_dir) / "fields.tsv").string(), view);
    }
    if (cfg.emit_diagnostics && !out.dry_run)
        write_diagnostics((fs::path(cfg.output_dir) / "diagnostics.tsv").string(), out.diag);
}

} // namespace spin2
