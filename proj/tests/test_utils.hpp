#pragma once
// Shared helpers and independent oracles for the test suites. Everything here
// recomputes quantities with plain loops (long double accumulation where it
// matters) so the checks do not share code paths with the library.

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "spin2/field.hpp"
#include "spin2/model.hpp"
#include "spin2/params.hpp"

namespace testutil {

using spin2::Complex;
using spin2::Grid;
using spin2::ModelParams;
using spin2::SpinorField;

inline std::mt19937_64 rng(unsigned long long seed) { return std::mt19937_64(seed); }

inline SpinorField random_spinor(const Grid& g, std::mt19937_64& r, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SpinorField f(g);
    for (auto& comp : f.c)
        for (auto& z : comp) z = scale * Complex{u(r), u(r)};
    for (auto& comp : f.c) spin2::zero_boundary(comp, g);
    return f;
}

// naive interior mass sums, long double accumulation
inline std::array<double, 5> oracle_comp_masses(const SpinorField& f) {
    const Grid& g = f.grid;
    long double hd = g.h(0);
    if (g.dim == 2) hd *= g.h(1);
    std::array<double, 5> out{};
    for (int c = 0; c < 5; ++c) {
        long double s = 0.0L;
        if (g.dim == 1) {
            for (int i = 1; i < g.cells[0]; ++i) s += (long double)std::norm(f.c[c][i]);
        } else {
            for (int iy = 1; iy < g.cells[1]; ++iy)
                for (int ix = 1; ix < g.cells[0]; ++ix)
                    s += (long double)std::norm(f.c[c][g.index(ix, iy)]);
        }
        out[c] = static_cast<double>(hd * s);
    }
    return out;
}

// independent discrete GP energy: forward-difference gradient over all faces,
// pointwise observables from the definitions, rectangle rule
inline double oracle_energy(const SpinorField& f, const ModelParams& p) {
    const Grid& g = f.grid;
    const long double s6 = std::sqrt(6.0L);
    long double hd = g.h(0);
    if (g.dim == 2) hd *= g.h(1);

    long double kin = 0.0L;
    for (int c = 0; c < 5; ++c) {
        if (g.dim == 1) {
            const long double ih2 = 1.0L / ((long double)g.h(0) * g.h(0));
            for (int i = 0; i < g.cells[0]; ++i)
                kin += ih2 * (long double)std::norm(f.c[c][i + 1] - f.c[c][i]);
        } else {
            const long double ihx2 = 1.0L / ((long double)g.h(0) * g.h(0));
            const long double ihy2 = 1.0L / ((long double)g.h(1) * g.h(1));
            for (int iy = 0; iy <= g.cells[1]; ++iy)
                for (int ix = 0; ix < g.cells[0]; ++ix)
                    kin += ihx2 * (long double)std::norm(f.c[c][g.index(ix + 1, iy)]
                                                         - f.c[c][g.index(ix, iy)]);
            for (int iy = 0; iy < g.cells[1]; ++iy)
                for (int ix = 0; ix <= g.cells[0]; ++ix)
                    kin += ihy2 * (long double)std::norm(f.c[c][g.index(ix, iy + 1)]
                                                         - f.c[c][g.index(ix, iy)]);
        }
    }

    long double pot = 0.0L;
    const int ny = g.dim == 2 ? g.cells[1] : 0;
    for (int iy = 0; iy <= ny; ++iy)
        for (int ix = 0; ix <= g.cells[0]; ++ix) {
            const std::size_t j = g.index(ix, iy);
            const std::complex<long double> p2 = f.c[0][j], p1 = f.c[1][j], p0 = f.c[2][j];
            const std::complex<long double> m1 = f.c[3][j], m2 = f.c[4][j];
            const long double rho = std::norm(p2) + std::norm(p1) + std::norm(p0)
                                    + std::norm(m1) + std::norm(m2);
            const std::complex<long double> fp =
                2.0L * (std::conj(p2) * p1 + std::conj(m1) * m2)
                + s6 * (std::conj(p1) * p0 + std::conj(p0) * m1);
            const long double fz = 2.0L * (std::norm(p2) - std::norm(m2)) + std::norm(p1)
                                   - std::norm(m1);
            const std::complex<long double> a00 =
                (2.0L * p2 * m2 - 2.0L * p1 * m1 + p0 * p0) / std::sqrt(5.0L);
            double x[2] = {g.coord(0, ix), g.dim == 2 ? g.coord(1, iy) : 0.0};
            const long double v = spin2::eval_potential(p.potential, x, g.dim);
            pot += v * rho + 0.5L * p.beta0 * rho * rho
                   + 0.5L * p.beta1 * (std::norm(fp) + fz * fz)
                   + 0.5L * p.beta2 * std::norm(a00);
        }

    return static_cast<double>(hd * (0.5L * kin + pot));
}

// dense LU solve for small complex systems (partial pivoting)
inline std::vector<Complex> dense_solve(std::vector<std::vector<Complex>> a,
                                        std::vector<Complex> b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
        std::swap(a[k], a[piv]);
        std::swap(b[k], b[piv]);
        for (int i = k + 1; i < n; ++i) {
            const Complex m = a[i][k] / a[k][k];
            for (int jj = k; jj < n; ++jj) a[i][jj] -= m * a[k][jj];
            b[i] -= m * b[k];
        }
    }
    std::vector<Complex> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Complex s = b[i];
        for (int jj = i + 1; jj < n; ++jj) s -= a[i][jj] * x[jj];
        x[i] = s / a[i][i];
    }
    return x;
}

// smallest eigenpairs of the real symmetric tridiagonal operator
// -lap/2 + diag(v) on the interior of a 1D grid, by shifted inverse iteration
// with its own elimination (independent of the library solvers).
struct EigPair {
    double value = 0.0;
    std::vector<double> vec;   // full-size, zero boundary, unit discrete norm
};

inline EigPair tridiag_ground_mode(const Grid& g, const std::vector<double>& v, int excited,
                                   std::mt19937_64& r) {
    const int n = g.cells[0] - 1;
    const double h = g.h(0);
    const double off = -0.5 / (h * h);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = 1.0 / (h * h) + v[i + 1];

    auto solve_shifted = [&](double shift, std::vector<double>& x) {
        std::vector<double> c(n), d(n);
        double den = diag[0] - shift;
        c[0] = off / den;
        d[0] = x[0] / den;
        for (int i = 1; i < n; ++i) {
            den = diag[i] - shift - off * c[i - 1];
            c[i] = off / den;
            d[i] = (x[i] - off * d[i - 1]) / den;
        }
        x[n - 1] = d[n - 1];
        for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
    };

    // deflation against lower modes via Gram-Schmidt
    std::vector<std::vector<double>> lower;
    EigPair out;
    for (int mode = 0; mode <= excited; ++mode) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> x(n);
        for (double& xi : x) xi = u(r);
        double lambda = 0.0;
        // fixed iteration count: the Rayleigh quotient stagnates long before
        // the eigenvector reaches full accuracy
        for (int it = 0; it < 400; ++it) {
            for (const auto& lo : lower) {
                double proj = 0.0;
                for (int i = 0; i < n; ++i) proj += x[i] * lo[i];
                for (int i = 0; i < n; ++i) x[i] -= proj * lo[i];
            }
            solve_shifted(-1.0, x);   // shift below the spectrum
            double nrm = 0.0;
            for (double xi : x) nrm += xi * xi;
            nrm = std::sqrt(nrm);
            for (double& xi : x) xi /= nrm;
            double num = 0.0;
            for (int i = 0; i < n; ++i) {
                double ax = diag[i] * x[i];
                if (i > 0) ax += off * x[i - 1];
                if (i + 1 < n) ax += off * x[i + 1];
                num += x[i] * ax;
            }
            lambda = num;
        }
        if (mode == excited) {
            out.value = lambda;
            out.vec.assign(g.size(), 0.0);
            double nrm = 0.0;
            for (double xi : x) nrm += xi * xi;
            const double s = 1.0 / std::sqrt(h * nrm);
            for (int i = 0; i < n; ++i) out.vec[i + 1] = s * x[i];
        }
        lower.push_back(x);
    }
    return out;
}

} // namespace testutil
