#include "spin2/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <thread>

#include "spin2/kernels.hpp"

namespace spin2 {

namespace {

inline const double* dptr(const std::vector<Complex>& v) {
    return reinterpret_cast<const double*>(v.data());
}
inline double* dptr(std::vector<Complex>& v) {
    return reinterpret_cast<double*>(v.data());
}

// y = A x on interior nodes of the full-size arrays; boundary of y untouched
// (callers keep it zero). diag_c already contains the stencil center term.
void apply_operator(const std::vector<double>& diag_c, const std::vector<Complex>& x,
                    std::vector<Complex>& y, const Grid& g) {
    const auto& k = kernels::active_ops();
    const double cx = 0.5 / (g.h(0) * g.h(0));
    if (g.dim == 1) {
        k.stencil1d(diag_c.data() + 1, dptr(x) + 2, dptr(y) + 2,
                    static_cast<std::size_t>(g.cells[0] - 1), cx);
        return;
    }
    const double cy = 0.5 / (g.h(1) * g.h(1));
    const std::size_t row = static_cast<std::size_t>(g.cells[0]) + 1;
    for (int iy = 1; iy < g.cells[1]; ++iy) {
        const std::size_t off = row * iy + 1;
        k.stencil2d_row(diag_c.data() + off, dptr(x) + 2 * off, dptr(x) + 2 * (off - row),
                        dptr(x) + 2 * (off + row), dptr(y) + 2 * off,
                        static_cast<std::size_t>(g.cells[0] - 1), cx, cy);
    }
}

struct CgWork {
    std::vector<Complex> r, z, q, p;
    void resize(std::size_t n) {
        if (r.size() == n) return;   // r, z, p are fully overwritten each solve;
        r.assign(n, Complex{});      // q only needs its boundary zeroed once
        z.assign(n, Complex{});
        q.assign(n, Complex{});
        p.assign(n, Complex{});
    }
};

// Jacobi-preconditioned CG for the SPD operator diag_c - lap/2. Works on the
// full arrays; boundary entries stay zero throughout.
void solve_cg(const std::vector<double>& diag_c, const std::vector<double>& inv_diag,
              const std::vector<Complex>& rhs, std::vector<Complex>& x, const Grid& g,
              const StepperConfig& cfg, CgWork& w) {
    const auto& k = kernels::active_ops();
    const std::size_t n2 = 2 * g.size();
    w.resize(g.size());

    const double b2 = k.sumsq(dptr(rhs), n2);
    if (b2 == 0.0) {
        std::fill(x.begin(), x.end(), Complex{});
        return;
    }
    const double target2 = cfg.linear_tol * cfg.linear_tol * b2;

    apply_operator(diag_c, x, w.q, g);
    w.r = rhs;
    k.axpy(-1.0, dptr(w.q), dptr(w.r), n2);
    k.cdiag_mul(inv_diag.data(), dptr(w.r), dptr(w.z), g.size());
    w.p = w.z;
    double rz = k.dot(dptr(w.r), dptr(w.z), n2);

    for (int it = 0; it < cfg.linear_max_iters; ++it) {
        if (k.sumsq(dptr(w.r), n2) <= target2) return;
        apply_operator(diag_c, w.p, w.q, g);
        const double pq = k.dot(dptr(w.p), dptr(w.q), n2);
        if (pq <= 0.0)
            throw LinearSolverFailure("cg: operator lost positive definiteness");
        const double alpha = rz / pq;
        k.axpy(alpha, dptr(w.p), dptr(x), n2);
        k.axpy(-alpha, dptr(w.q), dptr(w.r), n2);
        k.cdiag_mul(inv_diag.data(), dptr(w.r), dptr(w.z), g.size());
        const double rz_new = k.dot(dptr(w.r), dptr(w.z), n2);
        k.xpby(dptr(w.z), rz_new / rz, dptr(w.p), n2);
        rz = rz_new;
    }
    const double achieved = std::sqrt(k.sumsq(dptr(w.r), n2) / b2);
    throw LinearSolverFailure("cg: no convergence within iteration budget, relative residual " +
                              std::to_string(achieved));
}

// Thomas elimination for (diag_c + e*(left+right)) u = rhs with constant
// off-diagonal e = -1/(2h^2); diag_c includes the center term.
void solve_tridiag(const std::vector<double>& diag_c, const std::vector<Complex>& rhs,
                   std::vector<Complex>& x, const Grid& g, std::vector<double>& cw,
                   std::vector<Complex>& dw) {
    const int n = g.cells[0] - 1;
    const double e = -0.5 / (g.h(0) * g.h(0));
    cw.resize(n);
    dw.resize(n);
    double denom = diag_c[1];
    cw[0] = e / denom;
    dw[0] = rhs[1] / denom;
    for (int i = 1; i < n; ++i) {
        denom = diag_c[i + 1] - e * cw[i - 1];
        cw[i] = e / denom;
        dw[i] = (rhs[i + 1] - e * dw[i - 1]) / denom;
    }
    x[n] = dw[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i + 1] = dw[i] - cw[i] * x[i + 2];
    x[0] = Complex{};
    x[n + 1] = Complex{};
}

double stencil_center(const Grid& g) {
    double c = 1.0 / (g.h(0) * g.h(0));
    if (g.dim == 2) c += 1.0 / (g.h(1) * g.h(1));
    return c;
}

void check_positive_interior(const std::vector<double>& diag, const Grid& g) {
    auto bad = [&](double d) { return !(d > 0.0); };
    if (g.dim == 1) {
        for (int i = 1; i < g.cells[0]; ++i)
            if (bad(diag[i]))
                throw TimeStepTooLarge("implicit operator lost positivity; reduce dt");
        return;
    }
    for (int iy = 1; iy < g.cells[1]; ++iy)
        for (int ix = 1; ix < g.cells[0]; ++ix)
            if (bad(diag[g.index(ix, iy)]))
                throw TimeStepTooLarge("implicit operator lost positivity; reduce dt");
}

} // namespace

std::vector<Complex> apply_laplacian(const std::vector<Complex>& v, const Grid& g) {
    std::vector<Complex> out(g.size(), Complex{});
    if (g.dim == 1) {
        const double ih2 = 1.0 / (g.h(0) * g.h(0));
        for (int i = 1; i < g.cells[0]; ++i)
            out[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) * ih2;
        return out;
    }
    const double ihx2 = 1.0 / (g.h(0) * g.h(0));
    const double ihy2 = 1.0 / (g.h(1) * g.h(1));
    for (int iy = 1; iy < g.cells[1]; ++iy)
        for (int ix = 1; ix < g.cells[0]; ++ix) {
            const std::size_t j = g.index(ix, iy);
            out[j] = (v[j - 1] - 2.0 * v[j] + v[j + 1]) * ihx2
                     + (v[j - g.points(0)] - 2.0 * v[j] + v[j + g.points(0)]) * ihy2;
        }
    return out;
}

std::vector<Complex> solve_component_system(const std::vector<double>& diag,
                                            const std::vector<Complex>& rhs, const Grid& g,
                                            const StepperConfig& cfg,
                                            const std::vector<Complex>* guess) {
    check_positive_interior(diag, g);
    const double center = stencil_center(g);
    std::vector<double> diag_c(diag.size());
    for (std::size_t j = 0; j < diag.size(); ++j) diag_c[j] = diag[j] + center;

    std::vector<Complex> x(g.size(), Complex{});
    if (g.dim == 1) {
        std::vector<double> cw;
        std::vector<Complex> dw;
        solve_tridiag(diag_c, rhs, x, g, cw, dw);
        return x;
    }
    std::vector<double> inv_diag(g.size(), 0.0);
    for (std::size_t j = 0; j < g.size(); ++j) inv_diag[j] = 1.0 / diag_c[j];
    if (guess) x = *guess;
    CgWork w;
    solve_cg(diag_c, inv_diag, rhs, x, g, cfg, w);
    zero_boundary(x, g);
    return x;
}

// ---------------------------------------------------------------------------

struct GroundStateSolver::Impl {
    ModelParams params;
    Grid grid;
    StepperConfig cfg;
    int threads;

    std::vector<double> v;                      // potential samples
    Observables obs;
    AfSplit af;
    ProjectionConstants sigma_prev;             // constants applied by the previous step
    std::array<std::vector<double>, 5> diag;    // per component, includes stencil center
    std::array<std::vector<double>, 5> inv_diag;
    std::array<std::vector<Complex>, 5> star;
    std::array<std::vector<Complex>, 5> rhs;
    std::array<CgWork, 5> cg;
    std::array<std::vector<double>, 5> tri_cw;
    std::array<std::vector<Complex>, 5> tri_dw;

    Impl(const ModelParams& p, const Grid& g, const StepperConfig& c)
        : params(p), grid(g), cfg(c) {
        grid.validate();
        v = potential_field(p.potential, grid);
        threads = cfg.threads;
        if (threads <= 0)
            threads = grid.dim == 2 ? static_cast<int>(std::thread::hardware_concurrency()) : 1;
        threads = std::clamp(threads, 1, 5);
        for (int i = 0; i < 5; ++i) {
            star[i].assign(grid.size(), Complex{});
            rhs[i].resize(grid.size());
        }
    }

    void solve_component(int i, const SpinorField& phi) {
        const auto& k = kernels::active_ops();
        const std::size_t n = grid.size();
        const std::size_t n2 = 2 * n;
        const double center = stencil_center(grid);
        const double inv_dt = 1.0 / cfg.dt;

        diag[i].resize(n);
        for (std::size_t j = 0; j < n; ++j)
            diag[i][j] = inv_dt + v[j] + params.beta0 * obs.rho[j] + af.a[i][j];
        check_positive_interior(diag[i], grid);
        for (std::size_t j = 0; j < n; ++j) diag[i][j] += center;

        // rhs = phi/dt - f/sigma_prev; weighting f by the previous projection
        // constant makes the discrete stationary states exact fixed points
        rhs[i] = phi.c[i];
        k.scale(inv_dt, dptr(rhs[i]), n2);
        k.axpy(-1.0 / sigma_prev.sigma[i], dptr(af.f[i]), dptr(rhs[i]), n2);
        zero_boundary(rhs[i], grid);

        if (grid.dim == 1) {
            solve_tridiag(diag[i], rhs[i], star[i], grid, tri_cw[i], tri_dw[i]);
        } else {
            inv_diag[i].resize(n);
            for (std::size_t j = 0; j < n; ++j) inv_diag[i][j] = 1.0 / diag[i][j];
            star[i] = phi.c[i];   // warm start
            solve_cg(diag[i], inv_diag[i], rhs[i], star[i], grid, cfg, cg[i]);
            zero_boundary(star[i], grid);
        }
    }

    StepRecord step(SpinorField& phi) {
        observables_into(phi, obs);
        StepRecord rec;
        rec.energy = total_energy_with(phi, obs, v, params);
        split_af_with(phi, params, obs, af);

        if (threads == 1 || grid.dim == 1) {
            for (int i = 0; i < 5; ++i) solve_component(i, phi);
        } else {
            std::array<std::exception_ptr, 5> errors{};
            std::vector<std::thread> pool;
            pool.reserve(threads);
            for (int t = 0; t < threads; ++t)
                pool.emplace_back([&, t] {
                    for (int i = t; i < 5; i += threads) {
                        try {
                            solve_component(i, phi);
                        } catch (...) {
                            errors[i] = std::current_exception();
                        }
                    }
                });
            for (auto& th : pool) th.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }

        ProjectionWeights w;
        w.M = params.M;
        const auto& k = kernels::active_ops();
        const double hd = grid.dim == 2 ? grid.h(0) * grid.h(1) : grid.h(0);
        for (int i = 0; i < 5; ++i) w.w[i] = hd * k.sumsq(dptr(star[i]), 2 * grid.size());
        const ProjectionConstants sig = solve_sigma(w);

        double res = 0.0;
        for (int i = 0; i < 5; ++i) {
            const double s = sig.sigma[i];
            auto& dst = phi.c[i];
            const auto& src = star[i];
            for (std::size_t j = 0; j < dst.size(); ++j) {
                const Complex nv = s * src[j];
                res = std::max(res, std::abs(nv - dst[j]));
                dst[j] = nv;
            }
            rec.n_total += sig.sigma[i] * sig.sigma[i] * w.w[i];
            rec.m_total += kSpin[i] * sig.sigma[i] * sig.sigma[i] * w.w[i];
        }
        rec.residual = res / cfg.dt;
        rec.lambda = sig.lambda;
        sigma_prev = sig;
        return rec;
    }
};

GroundStateSolver::GroundStateSolver(const ModelParams& p, const Grid& g, const StepperConfig& c)
    : impl_(std::make_unique<Impl>(p, g, c)) {}

GroundStateSolver::~GroundStateSolver() = default;

StepRecord GroundStateSolver::step(SpinorField& phi) { return impl_->step(phi); }

const ProjectionConstants& GroundStateSolver::last_sigma() const { return impl_->sigma_prev; }

std::pair<SpinorField, RunDiagnostics> GroundStateSolver::run(SpinorField phi) {
    for (auto& comp : phi.c) zero_boundary(comp, impl_->grid);
    project_in_place(phi, solve_sigma(weights_of(phi, impl_->params.M)));

    // seed the lagged projection constants from the fitted multipliers, their
    // value at a stationary point; a near-stationary start then stays put
    {
        const ElFit fit = el_residual(phi, impl_->params);
        ProjectionConstants seed;
        seed.sigma0 = std::exp(impl_->cfg.dt * fit.mu);
        seed.lambda = std::exp(2.0 * impl_->cfg.dt * fit.lambda);
        const double sl = std::sqrt(seed.lambda);
        seed.sigma = {seed.sigma0 * seed.lambda, seed.sigma0 * sl, seed.sigma0,
                      seed.sigma0 / sl, seed.sigma0 / seed.lambda};
        impl_->sigma_prev = seed;
    }

    RunDiagnostics diag;
    diag.converged = false;
    for (long n = 0; n < impl_->cfg.max_iters; ++n) {
        const StepRecord rec = impl_->step(phi);
        diag.energy.push_back(rec.energy);
        diag.n_total.push_back(rec.n_total);
        diag.m_total.push_back(rec.m_total);
        diag.residual.push_back(rec.residual);
        diag.lambda.push_back(rec.lambda);
        diag.iterations = n + 1;
        if (rec.residual <= impl_->cfg.eps) {
            diag.converged = true;
            break;
        }
    }
    diag.energy.push_back(total_energy_with(phi, observables(phi), impl_->v, impl_->params));
    return {std::move(phi), std::move(diag)};
}

std::pair<SpinorField, StepRecord> befd_step(const SpinorField& phi, const ModelParams& p,
                                             const StepperConfig& cfg) {
    GroundStateSolver solver(p, phi.grid, cfg);
    SpinorField next = phi;
    StepRecord rec = solver.step(next);
    return {std::move(next), rec};
}

std::pair<SpinorField, RunDiagnostics> run_to_ground(const SpinorField& phi0, const ModelParams& p,
                                                     const StepperConfig& cfg) {
    GroundStateSolver solver(p, phi0.grid, cfg);
    return solver.run(phi0);
}

} // namespace spin2
