#include "spin2/model.hpp"

#include <cmath>

#include "spin2/kernels.hpp"

namespace spin2 {

namespace {

const double kSqrt6 = std::sqrt(6.0);
const double kInvSqrt5 = 1.0 / std::sqrt(5.0);

inline const double* dptr(const std::vector<Complex>& v) {
    return reinterpret_cast<const double*>(v.data());
}
inline double* dptr(std::vector<Complex>& v) {
    return reinterpret_cast<double*>(v.data());
}

double cell_measure(const Grid& g) {
    double m = g.h(0);
    if (g.dim == 2) m *= g.h(1);
    return m;
}

// gradient energy sum over all cell faces, both axes
double face_gradient_sum(const SpinorField& f) {
    const auto& k = kernels::active_ops();
    const Grid& g = f.grid;
    double s = 0.0;
    if (g.dim == 1) {
        const double inv_h2 = 1.0 / (g.h(0) * g.h(0));
        for (const auto& comp : f.c) {
            const double* z = dptr(comp);
            s += inv_h2 * k.sumsq_diff(z + 2, z, 2 * static_cast<std::size_t>(g.cells[0]));
        }
        return s;
    }
    const int nx = g.cells[0], ny = g.cells[1];
    const double inv_hx2 = 1.0 / (g.h(0) * g.h(0));
    const double inv_hy2 = 1.0 / (g.h(1) * g.h(1));
    const std::size_t row = static_cast<std::size_t>(nx) + 1;
    for (const auto& comp : f.c) {
        const double* z = dptr(comp);
        for (int iy = 0; iy <= ny; ++iy) {
            const double* r = z + 2 * row * iy;
            s += inv_hx2 * k.sumsq_diff(r + 2, r, 2 * static_cast<std::size_t>(nx));
        }
        s += inv_hy2 * k.sumsq_diff(z + 2 * row, z, 2 * row * static_cast<std::size_t>(ny));
    }
    return s;
}

} // namespace

void observables_into(const SpinorField& f, Observables& o) {
    const std::size_t n = f.grid.size();
    o.rho.resize(n);
    o.fz.resize(n);
    o.fplus.resize(n);
    o.a00.resize(n);
    const double* phi[5] = {dptr(f.c[0]), dptr(f.c[1]), dptr(f.c[2]), dptr(f.c[3]), dptr(f.c[4])};
    kernels::active_ops().spinor_observables(phi, n, o.rho.data(), dptr(o.fplus),
                                             o.fz.data(), dptr(o.a00));
}

Observables observables(const SpinorField& f) {
    Observables o;
    observables_into(f, o);
    return o;
}

Masses masses(const SpinorField& f) {
    const auto& k = kernels::active_ops();
    const double hd = cell_measure(f.grid);
    Masses m;
    for (int i = 0; i < 5; ++i) {
        m.comp[i] = hd * k.sumsq(dptr(f.c[i]), 2 * f.grid.size());
        m.total += m.comp[i];
        m.magnetization += kSpin[i] * m.comp[i];
    }
    return m;
}

double total_energy_with(const SpinorField& f, const Observables& obs,
                         const std::vector<double>& v, const ModelParams& p) {
    const auto& k = kernels::active_ops();
    const std::size_t n = f.grid.size();
    const double hd = cell_measure(f.grid);
    double e = 0.5 * face_gradient_sum(f);
    e += k.dot(v.data(), obs.rho.data(), n);
    e += 0.5 * p.beta0 * k.sumsq(obs.rho.data(), n);
    e += 0.5 * p.beta1 * (k.sumsq(dptr(obs.fplus), 2 * n) + k.sumsq(obs.fz.data(), n));
    e += 0.5 * p.beta2 * k.sumsq(dptr(obs.a00), 2 * n);
    return hd * e;
}

double total_energy(const SpinorField& f, const ModelParams& p) {
    return total_energy_with(f, observables(f), potential_field(p.potential, f.grid), p);
}

SpinorField el_gradient(const SpinorField& f, const ModelParams& p) {
    const auto& k = kernels::active_ops();
    const Grid& g = f.grid;
    const std::size_t n = g.size();
    const Observables obs = observables(f);
    const std::vector<double> v = potential_field(p.potential, g);

    // diagonal of H_rho plus the stencil center
    std::vector<double> diag(n);
    double center = 1.0 / (g.h(0) * g.h(0));
    if (g.dim == 2) center += 1.0 / (g.h(1) * g.h(1));
    for (std::size_t j = 0; j < n; ++j) diag[j] = v[j] + p.beta0 * obs.rho[j] + center;

    SpinorField out(g);
    const double cx = 0.5 / (g.h(0) * g.h(0));
    for (int i = 0; i < 5; ++i) {
        const double* z = dptr(f.c[i]);
        double* y = dptr(out.c[i]);
        if (g.dim == 1) {
            k.stencil1d(diag.data() + 1, z + 2, y + 2, static_cast<std::size_t>(g.cells[0] - 1), cx);
        } else {
            const double cy = 0.5 / (g.h(1) * g.h(1));
            const std::size_t row = static_cast<std::size_t>(g.cells[0]) + 1;
            for (int iy = 1; iy < g.cells[1]; ++iy) {
                const std::size_t off = row * iy + 1;
                k.stencil2d_row(diag.data() + off, z + 2 * off, z + 2 * (off - row),
                                z + 2 * (off + row), y + 2 * off,
                                static_cast<std::size_t>(g.cells[0] - 1), cx, cy);
            }
        }
    }

    // spin-coupling terms, interior only (boundary fields are zero anyway)
    const double b1 = p.beta1, b2 = p.beta2;
    for (std::size_t j = 0; j < n; ++j) {
        const Complex p2 = f.c[0][j], p1 = f.c[1][j], p0 = f.c[2][j];
        const Complex m1 = f.c[3][j], m2 = f.c[4][j];
        const Complex fp = obs.fplus[j];
        const Complex fm = std::conj(fp);
        const Complex a = obs.a00[j];
        const double fz = obs.fz[j];
        out.c[0][j] += 2.0 * b1 * fz * p2 + b1 * fm * p1 + b2 * kInvSqrt5 * a * std::conj(m2);
        out.c[1][j] += b1 * fz * p1 + b1 * (0.5 * kSqrt6 * fm * p0 + fp * p2)
                       - b2 * kInvSqrt5 * a * std::conj(m1);
        out.c[2][j] += 0.5 * kSqrt6 * b1 * (fp * p1 + fm * m1) + b2 * kInvSqrt5 * a * std::conj(p0);
        out.c[3][j] += -b1 * fz * m1 + b1 * (0.5 * kSqrt6 * fp * p0 + fm * m2)
                       - b2 * kInvSqrt5 * a * std::conj(p1);
        out.c[4][j] += -2.0 * b1 * fz * m2 + b1 * fp * m1 + b2 * kInvSqrt5 * a * std::conj(p2);
    }
    for (auto& comp : out.c) zero_boundary(comp, g);
    return out;
}

AfSplit split_af(const SpinorField& f, const ModelParams& p) {
    AfSplit s;
    split_af_with(f, p, observables(f), s);
    return s;
}

void split_af_with(const SpinorField& f, const ModelParams& p, const Observables& obs,
                   AfSplit& s) {
    const std::size_t n = f.grid.size();
    for (int i = 0; i < 5; ++i) {
        s.a[i].resize(n);
        s.f[i].resize(n);
    }
    const double b1 = p.beta1, b2 = p.beta2;
    for (std::size_t j = 0; j < n; ++j) {
        const Complex p2 = f.c[0][j], p1 = f.c[1][j], p0 = f.c[2][j];
        const Complex m1 = f.c[3][j], m2 = f.c[4][j];
        const double n2 = std::norm(p2), n1 = std::norm(p1), n0 = std::norm(p0);
        const double nm1 = std::norm(m1), nm2 = std::norm(m2);
        const Complex fp = obs.fplus[j];
        const Complex fm = std::conj(fp);
        const Complex a = obs.a00[j];
        const double fz = obs.fz[j];

        s.a[0][j] = b1 * (2.0 * n1 + 2.0 * fz) + 0.4 * b2 * nm2;
        s.a[1][j] = b1 * (2.0 * n2 + fz + 3.0 * n0) + 0.4 * b2 * nm1;
        s.a[2][j] = 3.0 * b1 * (n1 + nm1) + 0.2 * b2 * n0;
        s.a[3][j] = b1 * (2.0 * nm2 - fz + 3.0 * n0) + 0.4 * b2 * n1;
        s.a[4][j] = b1 * (2.0 * nm1 - 2.0 * fz) + 0.4 * b2 * n2;

        s.f[0][j] = b1 * (fm - 2.0 * std::conj(p1) * p2) * p1
                    + b2 * (kInvSqrt5 * a - 0.4 * p2 * m2) * std::conj(m2);
        s.f[1][j] = b1 * ((fp - 2.0 * std::conj(p2) * p1) * p2
                          + (0.5 * kSqrt6 * fm - 3.0 * std::conj(p0) * p1) * p0)
                    + b2 * (-kInvSqrt5 * a - 0.4 * p1 * m1) * std::conj(m1);
        s.f[2][j] = b1 * ((0.5 * kSqrt6 * fp - 3.0 * std::conj(p1) * p0) * p1
                          + (0.5 * kSqrt6 * fm - 3.0 * std::conj(m1) * p0) * m1)
                    + b2 * (kInvSqrt5 * a - 0.2 * p0 * p0) * std::conj(p0);
        s.f[3][j] = b1 * ((fm - 2.0 * std::conj(m2) * m1) * m2
                          + (0.5 * kSqrt6 * fp - 3.0 * std::conj(p0) * m1) * p0)
                    + b2 * (-kInvSqrt5 * a - 0.4 * m1 * p1) * std::conj(p1);
        s.f[4][j] = b1 * (fp - 2.0 * std::conj(m1) * m2) * m1
                    + b2 * (kInvSqrt5 * a - 0.4 * m2 * p2) * std::conj(p2);
    }
}

ElFit el_residual(const SpinorField& f, const ModelParams& p) {
    const auto& k = kernels::active_ops();
    const double hd = cell_measure(f.grid);
    const std::size_t n2 = 2 * f.grid.size();
    const SpinorField grad = el_gradient(f, p);

    double nn = 0.0, mm = 0.0, rr = 0.0, kk = 0.0, pp = 0.0;
    std::array<double, 5> nl{}, kl{};
    for (int i = 0; i < 5; ++i) {
        nl[i] = hd * k.sumsq(dptr(f.c[i]), n2);
        kl[i] = hd * k.dot(dptr(f.c[i]), dptr(grad.c[i]), n2);
        nn += nl[i];
        mm += kSpin[i] * nl[i];
        rr += kSpin[i] * kSpin[i] * nl[i];
        kk += kl[i];
        pp += kSpin[i] * kl[i];
    }

    ElFit fit;
    const double det = nn * rr - mm * mm;
    if (det <= 1e-12 * nn * rr || rr == 0.0) {
        fit.degenerate = true;
        fit.mu = kk / nn;
        fit.lambda = 0.0;
    } else {
        fit.mu = (rr * kk - mm * pp) / det;
        fit.lambda = (nn * pp - mm * kk) / det;
    }

    double r2 = 0.0;
    std::vector<Complex> tmp;
    for (int i = 0; i < 5; ++i) {
        tmp = grad.c[i];
        k.axpy(-(fit.mu + kSpin[i] * fit.lambda), dptr(f.c[i]), dptr(tmp), n2);
        r2 += hd * k.sumsq(dptr(tmp), n2);
    }
    fit.residual = std::sqrt(r2);
    return fit;
}

} // namespace spin2
