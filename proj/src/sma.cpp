#include "spin2/sma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spin2/kernels.hpp"
#include "spin2/projection.hpp"

namespace spin2 {

namespace {

inline const double* dptr(const std::vector<Complex>& v) {
    return reinterpret_cast<const double*>(v.data());
}
inline double* dptr(std::vector<Complex>& v) {
    return reinterpret_cast<double*>(v.data());
}

double cell_measure(const Grid& g) {
    return g.dim == 2 ? g.h(0) * g.h(1) : g.h(0);
}

void normalize(ScalarField& f) {
    const double n2 = cell_measure(f.grid)
                      * kernels::active_ops().sumsq(dptr(f.v), 2 * f.grid.size());
    if (n2 <= 0.0) throw std::domain_error("profile: zero mode");
    const double s = 1.0 / std::sqrt(n2);
    kernels::active_ops().scale(s, dptr(f.v), 2 * f.grid.size());
}

ScalarField gaussian_profile(const Grid& g) {
    ScalarField f(g);
    if (g.dim == 1) {
        for (int i = 1; i < g.cells[0]; ++i) {
            const double x = g.coord(0, i);
            f.v[i] = std::exp(-0.5 * x * x);
        }
    } else {
        for (int iy = 1; iy < g.cells[1]; ++iy)
            for (int ix = 1; ix < g.cells[0]; ++ix) {
                const double x = g.coord(0, ix), y = g.coord(1, iy);
                f.v[g.index(ix, iy)] = std::exp(-0.5 * (x * x + y * y));
            }
    }
    normalize(f);
    return f;
}

ScalarField thomas_fermi_profile(double beta, const PotentialSpec& pot, const Grid& g) {
    const std::vector<double> v = potential_field(pot, g);
    const double hd = cell_measure(g);
    auto mass_at = [&](double mu) {
        double m = 0.0;
        for (double vj : v) m += std::max(0.0, mu - vj);
        return hd * m / (2.0 * beta);
    };
    double lo = *std::min_element(v.begin(), v.end());
    double hi = lo + 1.0;
    while (mass_at(hi) < 1.0) hi = lo + 2.0 * (hi - lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mass_at(mid) < 1.0 ? lo : hi) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    ScalarField f(g);
    for (std::size_t j = 0; j < g.size(); ++j)
        f.v[j] = std::sqrt(std::max(0.0, mu - v[j]) / (2.0 * beta));
    zero_boundary(f.v, g);
    normalize(f);
    return f;
}

ScalarField box_mode_profile(const Grid& g) {
    ScalarField f(g);
    if (g.dim == 1) {
        const double L = g.upper[0] - g.lower[0];
        for (int i = 1; i < g.cells[0]; ++i)
            f.v[i] = std::sin(M_PI * (g.coord(0, i) - g.lower[0]) / L);
    } else {
        const double Lx = g.upper[0] - g.lower[0], Ly = g.upper[1] - g.lower[1];
        for (int iy = 1; iy < g.cells[1]; ++iy)
            for (int ix = 1; ix < g.cells[0]; ++ix)
                f.v[g.index(ix, iy)] = std::sin(M_PI * (g.coord(0, ix) - g.lower[0]) / Lx)
                                       * std::sin(M_PI * (g.coord(1, iy) - g.lower[1]) / Ly);
    }
    normalize(f);
    return f;
}

} // namespace

ScalarField build_profile(Profile profile, double beta_eff, const PotentialSpec& pot,
                          const Grid& grid) {
    if (profile == Profile::Auto) {
        if (pot.kind == PotentialSpec::Kind::Box) profile = Profile::BoxMode;
        else if (beta_eff > 10.0) profile = Profile::ThomasFermi;
        else profile = Profile::Gaussian;
    }
    switch (profile) {
        case Profile::Gaussian: return gaussian_profile(grid);
        case Profile::ThomasFermi:
            if (beta_eff > 0.0) return thomas_fermi_profile(beta_eff, pot, grid);
            return gaussian_profile(grid);
        case Profile::BoxMode: return box_mode_profile(grid);
        default: throw std::logic_error("unreachable");
    }
}

double scalar_energy(const ScalarField& phi, double beta, const PotentialSpec& pot) {
    const auto& k = kernels::active_ops();
    const Grid& g = phi.grid;
    const std::vector<double> v = potential_field(pot, g);
    const double hd = cell_measure(g);
    const double* z = dptr(phi.v);

    double grad = 0.0;
    if (g.dim == 1) {
        grad = k.sumsq_diff(z + 2, z, 2 * static_cast<std::size_t>(g.cells[0])) / (g.h(0) * g.h(0));
    } else {
        const std::size_t row = static_cast<std::size_t>(g.cells[0]) + 1;
        for (int iy = 0; iy <= g.cells[1]; ++iy)
            grad += k.sumsq_diff(z + 2 * row * iy + 2, z + 2 * row * iy,
                                 2 * static_cast<std::size_t>(g.cells[0]))
                    / (g.h(0) * g.h(0));
        grad += k.sumsq_diff(z + 2 * row, z, 2 * row * static_cast<std::size_t>(g.cells[1]))
                / (g.h(1) * g.h(1));
    }
    double e = 0.5 * grad;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double r = std::norm(phi.v[j]);
        e += v[j] * r + beta * r * r;
    }
    return hd * e;
}

std::pair<ScalarField, ScalarRun> scalar_ground_state(double beta, const PotentialSpec& pot,
                                                      const Grid& grid, const StepperConfig& cfg) {
    const auto& k = kernels::active_ops();
    const std::vector<double> v = potential_field(pot, grid);
    const double hd = cell_measure(grid);
    const std::size_t n = grid.size();

    ScalarField phi = build_profile(Profile::Auto, beta, pot, grid);
    ScalarRun run;
    std::vector<double> diag(n);
    std::vector<Complex> rhs(n);

    for (long it = 0; it < cfg.max_iters; ++it) {
        run.energy.push_back(scalar_energy(phi, beta, pot));
        for (std::size_t j = 0; j < n; ++j)
            diag[j] = 1.0 / cfg.dt + v[j] + 2.0 * beta * std::norm(phi.v[j]);
        rhs = phi.v;
        k.scale(1.0 / cfg.dt, dptr(rhs), 2 * n);
        std::vector<Complex> star = solve_component_system(diag, rhs, grid, cfg, &phi.v);
        const double nrm = std::sqrt(hd * k.sumsq(dptr(star), 2 * n));
        const double s = 1.0 / nrm;
        double res = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const Complex nv = s * star[j];
            res = std::max(res, std::abs(nv - phi.v[j]));
            phi.v[j] = nv;
        }
        run.iterations = it + 1;
        if (res / cfg.dt <= cfg.eps) {
            run.converged = true;
            break;
        }
    }
    run.energy.push_back(scalar_energy(phi, beta, pot));
    return {std::move(phi), std::move(run)};
}

SpinorField assemble_sma(const UniformState& xi, const ScalarField& phi) {
    SpinorField out(phi.grid);
    for (int i = 0; i < 5; ++i) {
        out.c[i] = phi.v;
        kernels::active_ops().scale(xi.xi[i], dptr(out.c[i]), 2 * phi.grid.size());
    }
    return out;
}

SpinorField build_initial_data(const InitialDataSpec& spec, const ModelParams& p,
                               const Grid& grid) {
    SpinorField out(grid);
    const double beta_eff = beta_of_M(p.beta0, p.beta1, p.beta2, p.M).value;

    if (spec.kind == InitialDataSpec::Kind::Custom) {
        for (int i = 0; i < 5; ++i) {
            if (spec.custom[i].weight == 0.0) continue;
            ScalarField mode = build_profile(spec.custom[i].profile, beta_eff, p.potential, grid);
            out.c[i] = mode.v;
            kernels::active_ops().scale(spec.custom[i].weight, dptr(out.c[i]),
                                        2 * grid.size());
        }
    } else {
        UniformState xi;
        if (spec.kind == InitialDataSpec::Kind::SmaClosedForm) {
            xi = ground_xi(p.beta1, p.beta2, p.M, spec.variant);
        } else {
            const double s = spec.sigma;
            if (s < 0.0 || s > 1.0 - 0.5 * p.M)
                throw std::domain_error("initial data: sigma must lie in [0, 1 - M/2]");
            xi.M = p.M;
            xi.xi = {0.5 * std::sqrt(2.0 + p.M - 2.0 * s), 0.5 * std::sqrt(s),
                     0.5 * std::sqrt(2.0 * s), 0.5 * std::sqrt(s),
                     0.5 * std::sqrt(2.0 - p.M - 2.0 * s)};
        }
        out = assemble_sma(xi, build_profile(spec.profile, beta_eff, p.potential, grid));
    }

    project_in_place(out, solve_sigma(weights_of(out, p.M)));
    return out;
}

SmaCheck sma_validity(const SpinorField& f, double tol) {
    const Masses m = masses(f);
    if (m.total <= 0.0) throw std::domain_error("sma_validity: zero field");
    const int ref = static_cast<int>(
        std::max_element(m.comp.begin(), m.comp.end()) - m.comp.begin());

    double peak = 0.0;
    std::size_t peak_j = 0;
    for (std::size_t j = 0; j < f.grid.size(); ++j) {
        const double a = std::abs(f.c[ref][j]);
        if (a > peak) {
            peak = a;
            peak_j = j;
        }
    }
    if (peak <= 0.0) throw std::domain_error("sma_validity: reference component below floor");
    const double floor = 1e-6 * peak;

    SmaCheck out;
    for (int i = 0; i < 5; ++i) {
        if (i == ref || m.comp[i] <= 1e-10 * m.total) continue;
        const Complex rbar = f.c[i][peak_j] / f.c[ref][peak_j];
        const double scale = std::abs(rbar);
        for (std::size_t j = 0; j < f.grid.size(); ++j) {
            if (std::abs(f.c[ref][j]) < floor) continue;
            const Complex r = f.c[i][j] / f.c[ref][j];
            out.deviation = std::max(out.deviation, std::abs(r - rbar) / std::max(scale, 1e-300));
        }
    }
    out.valid = out.deviation <= tol;
    return out;
}

} // namespace spin2
