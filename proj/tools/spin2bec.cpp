#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "spin2/driver.hpp"
#include "spin2/projection.hpp"
#include "spin2/uniform.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNonConverged = 3;
constexpr int kExitInfeasible = 4;

int default_workers() {
    if (const char* env = std::getenv("SPIN2BEC_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

void print_run_summary(const spin2::RunConfig& cfg, const spin2::RunOutcome& out) {
    std::printf("energy      %.10g\n", out.energy);
    std::printf("masses      %.6f %.6f %.6f %.6f %.6f\n", out.report.comp[0], out.report.comp[1],
                out.report.comp[2], out.report.comp[3], out.report.comp[4]);
    std::printf("n_total     %.12g\nm_total     %.12g\n", out.report.total,
                out.report.magnetization);
    if (!out.dry_run) {
        std::printf("mu, lambda  %.10g  %.10g\n", out.fit.mu,
                    cfg.model.mirrored ? -out.fit.lambda : out.fit.lambda);
        std::printf("el residual %.3g\n", out.fit.residual);
        std::printf("iterations  %ld (%s)\n", out.diag.iterations,
                    out.diag.converged ? "converged" : "NOT converged");
    }
}

int run_gs(const std::string& config_path, const std::string& outdir_override, bool dry_run) {
    spin2::RunConfig cfg = spin2::load_run_config(config_path);
    if (!outdir_override.empty()) cfg.output_dir = outdir_override;
    const spin2::RunOutcome out = spin2::execute_run(cfg, dry_run);
    spin2::write_run_outputs(cfg, out);
    print_run_summary(cfg, out);
    if (!dry_run && !out.diag.converged) {
        std::fprintf(stderr, "spin2bec: run did not converge; partial outputs in %s\n",
                     cfg.output_dir.c_str());
        return kExitNonConverged;
    }
    return kExitOk;
}

int run_uniform(double beta0, double beta1, double beta2, double M_in,
                const spin2::GroundVariant& variant) {
    const bool mirrored = M_in < 0.0;
    const double M = std::abs(M_in);

    if (M == 2.0) {
        // fully polarized: a single occupied component
        std::printf("phase       fully polarized (|M| = 2)\n");
        std::printf("tau, delta  0  0\n");
        std::printf("xi          %s\n", mirrored ? "(0, 0, 0, 0, 1)" : "(1, 0, 0, 0, 0)");
        std::printf("E_U         %.10g\n", 0.5 * (beta0 + 4.0 * beta1));
        return kExitOk;
    }

    const spin2::LandscapeMin lm = spin2::minimize_landscape(beta1, beta2, M);
    const spin2::BetaM bm = spin2::beta_of_M(beta0, beta1, beta2, M);
    std::printf("phase       %s\n", spin2::phase_name(lm.phase));
    if (!lm.detail.empty()) std::printf("detail      %s\n", lm.detail.c_str());
    if (lm.phase == spin2::Phase::Boundary) {
        std::printf("minimizers ");
        for (const auto& td : lm.minimizers) std::printf("  (tau=%.10g, delta=%.10g)", td.tau, td.delta);
        std::printf("\n");
    }
    std::printf("tau, delta  %.10g  %.10g\n", lm.td.tau, lm.td.delta);

    spin2::UniformState xi = spin2::ground_xi(beta1, beta2, M, variant);
    spin2::ModelParams p = spin2::make_params(beta0, beta1, beta2, M);
    const double eu = spin2::uniform_energy(xi, p);
    if (mirrored) std::reverse(xi.xi.begin(), xi.xi.end());
    std::printf("xi          (%.10g, %.10g, %.10g, %.10g, %.10g)\n", xi.xi[0], xi.xi[1], xi.xi[2],
                xi.xi[3], xi.xi[4]);
    std::printf("E_U         %.10g\n", eu);
    std::printf("beta(M)     %.10g%s\n", bm.value, bm.boundary ? "  (boundary regime)" : "");
    return kExitOk;
}

int run_landscape(double beta0, double beta1, double beta2, double M, int resolution,
                  const std::string& out_path) {
    const auto rows = spin2::landscape_grid(beta0, beta1, beta2, std::abs(M), resolution);
    if (!out_path.empty()) {
        spin2::write_landscape(out_path, rows);
    } else {
        std::printf("tau\tdelta\tenergy\targmin\n");
        for (const auto& r : rows)
            std::printf("%.17g\t%.17g\t%.17g\t%d\n", r.tau, r.delta, r.energy, r.argmin ? 1 : 0);
    }
    for (const auto& r : rows)
        if (r.argmin)
            std::fprintf(stderr, "argmin: tau=%.10g delta=%.10g energy=%.10g\n", r.tau, r.delta,
                         r.energy);
    return kExitOk;
}

int run_sweep(const std::string& config_path, const std::string& outdir_override, int workers) {
    spin2::SweepConfig sweep = spin2::load_sweep_config(config_path);
    if (!outdir_override.empty()) sweep.base.output_dir = outdir_override;

    struct Row {
        double value = 0.0;
        spin2::RunOutcome out;
        std::string error;
    };
    std::vector<Row> rows(sweep.values.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> infeasible{false};

    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < sweep.values.size(); i = next.fetch_add(1)) {
            const double value = sweep.values[i];
            rows[i].value = value;
            spin2::RunConfig cfg = sweep.base;
            double b0 = cfg.model.beta0, b1 = cfg.model.beta1, b2 = cfg.model.beta2;
            double M = cfg.model.mirrored ? -cfg.model.M : cfg.model.M;
            if (sweep.parameter == "M") M = value;
            else if (sweep.parameter == "beta1") b1 = value;
            else b2 = value;
            cfg.model = spin2::make_params(b0, b1, b2, M, cfg.model.potential);
            char tag[64];
            std::snprintf(tag, sizeof tag, "%s_%g", sweep.parameter.c_str(), value);
            cfg.output_dir = (std::filesystem::path(sweep.base.output_dir) / tag).string();
            try {
                rows[i].out = spin2::execute_run(cfg);
                spin2::write_run_outputs(cfg, rows[i].out);
            } catch (const spin2::InfeasibleProjection& e) {
                rows[i].error = e.what();
                infeasible = true;
            }
        }
    };
    const int nw = std::max(1, std::min<int>(workers, static_cast<int>(sweep.values.size())));
    std::vector<std::thread> pool;
    for (int t = 0; t < nw; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::filesystem::create_directories(sweep.base.output_dir);
    const auto table = std::filesystem::path(sweep.base.output_dir) / "sweep.tsv";
    std::FILE* out = std::fopen(table.string().c_str(), "w");
    if (!out) throw std::runtime_error("cannot write " + table.string());
    std::fprintf(out, "%s\tenergy\tn2\tn1\tn0\tnm1\tnm2\titerations\tconverged\n",
                 sweep.parameter.c_str());
    bool all_converged = true;
    for (const auto& r : rows) {
        if (!r.error.empty()) {
            std::fprintf(out, "%.10g\tfailed: %s\n", r.value, r.error.c_str());
            all_converged = false;
            continue;
        }
        std::fprintf(out, "%.10g\t%.10g\t%.6f\t%.6f\t%.6f\t%.6f\t%.6f\t%ld\t%d\n", r.value,
                     r.out.energy, r.out.report.comp[0], r.out.report.comp[1],
                     r.out.report.comp[2], r.out.report.comp[3], r.out.report.comp[4],
                     r.out.diag.iterations, r.out.diag.converged ? 1 : 0);
        all_converged = all_converged && r.out.diag.converged;
        std::printf("%s = %-10g energy = %.10g iters = %ld%s\n", sweep.parameter.c_str(), r.value,
                    r.out.energy, r.out.diag.iterations, r.out.diag.converged ? "" : "  [not converged]");
    }
    std::fclose(out);
    if (infeasible) return kExitInfeasible;
    return all_converged ? kExitOk : kExitNonConverged;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ground states of spin-2 condensates by normalized gradient flow"};
    app.require_subcommand(1);

    std::string config_path, outdir, out_path;
    bool dry_run = false;
    double beta0 = 0.0, beta1 = 0.0, beta2 = 0.0, M = 0.0;
    int resolution = 41;
    int workers = default_workers();
    spin2::GroundVariant variant;
    double theta = 0.0;
    bool have_theta = false, plus_branch = false;

    CLI::App* gs = app.add_subcommand("gs", "compute one ground state from a config file");
    gs->add_option("-c,--config", config_path, "run config (json)")->required();
    gs->add_option("-o,--output-dir", outdir, "override the output directory");
    gs->add_flag("--dry-run", dry_run, "build and project the initial data, then stop");

    CLI::App* uni = app.add_subcommand("uniform", "closed-form uniform-system ground state");
    uni->add_option("--beta0", beta0, "spin-independent interaction")->capture_default_str();
    uni->add_option("--beta1", beta1, "spin-exchange interaction")->required();
    uni->add_option("--beta2", beta2, "spin-singlet interaction")->required();
    uni->add_option("-M,--magnetization", M, "magnetization in [-2,2]")->capture_default_str();
    uni->add_option("--family", variant.family, "ground-state family index");
    uni->add_option("--gamma", variant.gamma, "nematic M=0 family-1 parameter");
    auto* topt = uni->add_option("--theta", theta, "family angle parameter");
    uni->add_flag("--plus-branch", plus_branch, "cyclic theta-family sign branch");

    CLI::App* land = app.add_subcommand("landscape", "reduced-energy samples over the feasible set");
    land->add_option("--beta0", beta0, "")->capture_default_str();
    land->add_option("--beta1", beta1, "")->required();
    land->add_option("--beta2", beta2, "")->required();
    land->add_option("-M,--magnetization", M, "")->capture_default_str();
    land->add_option("-r,--resolution", resolution, "lattice points per coordinate")
        ->capture_default_str();
    land->add_option("-o,--out", out_path, "write the table here instead of stdout");

    CLI::App* sw = app.add_subcommand("sweep", "run a parameter sweep from a config file");
    sw->add_option("-c,--config", config_path, "sweep config (json)")->required();
    sw->add_option("-o,--output-dir", outdir, "override the output directory");
    sw->add_option("-w,--workers", workers, "concurrent runs (env SPIN2BEC_WORKERS)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*gs) return run_gs(config_path, outdir, dry_run);
        if (*uni) {
            if (std::abs(M) > 2.0) throw spin2::ConfigError("uniform: |M| must be <= 2");
            have_theta = topt->count() > 0;
            if (have_theta) variant.theta = theta;
            variant.plus_branch = plus_branch;
            return run_uniform(beta0, beta1, beta2, M, variant);
        }
        if (*land) {
            if (!(std::abs(M) < 2.0)) throw spin2::ConfigError("landscape: |M| must be < 2");
            return run_landscape(beta0, beta1, beta2, M, resolution, out_path);
        }
        if (*sw) return run_sweep(config_path, outdir, workers);
    } catch (const spin2::ConfigError& e) {
        std::fprintf(stderr, "spin2bec: %s\n", e.what());
        return kExitConfig;
    } catch (const spin2::InfeasibleProjection& e) {
        std::fprintf(stderr, "spin2bec: %s\n", e.what());
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "spin2bec: %s\n", e.what());
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "spin2bec: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "spin2bec: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
