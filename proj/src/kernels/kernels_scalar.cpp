#include "spin2/kernels.hpp"

#include <cmath>

namespace spin2::kernels {
namespace {

double dot_s(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sumsq_s(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

double sumsq_diff_s(const double* x, const double* y, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

void axpy_s(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby_s(const double* x, double b, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void scale_s(double a, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void cdiag_mul_s(const double* d, const double* z, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = d[i] * z[2 * i];
        out[2 * i + 1] = d[i] * z[2 * i + 1];
    }
}

void stencil1d_s(const double* d, const double* z, double* out, std::size_t n, double c) {
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = d[i] * z[2 * i] - c * (z[2 * i - 2] + z[2 * i + 2]);
        out[2 * i + 1] = d[i] * z[2 * i + 1] - c * (z[2 * i - 1] + z[2 * i + 3]);
    }
}

void stencil2d_row_s(const double* d, const double* z, const double* zm,
                     const double* zp, double* out, std::size_t n,
                     double cx, double cy) {
    for (std::size_t i = 0; i < n; ++i) {
        out[2 * i] = d[i] * z[2 * i] - cx * (z[2 * i - 2] + z[2 * i + 2])
                     - cy * (zm[2 * i] + zp[2 * i]);
        out[2 * i + 1] = d[i] * z[2 * i + 1] - cx * (z[2 * i - 1] + z[2 * i + 3])
                         - cy * (zm[2 * i + 1] + zp[2 * i + 1]);
    }
}

void spinor_observables_s(const double* const* phi, std::size_t n,
                          double* rho, double* fplus, double* fz, double* a00) {
    const double s6 = std::sqrt(6.0);
    const double inv_s5 = 1.0 / std::sqrt(5.0);
    const double* p2 = phi[0];
    const double* p1 = phi[1];
    const double* p0 = phi[2];
    const double* m1 = phi[3];
    const double* m2 = phi[4];
    for (std::size_t i = 0; i < n; ++i) {
        const double a2r = p2[2 * i], a2i = p2[2 * i + 1];
        const double a1r = p1[2 * i], a1i = p1[2 * i + 1];
        const double a0r = p0[2 * i], a0i = p0[2 * i + 1];
        const double b1r = m1[2 * i], b1i = m1[2 * i + 1];
        const double b2r = m2[2 * i], b2i = m2[2 * i + 1];

        const double n2 = a2r * a2r + a2i * a2i;
        const double n1 = a1r * a1r + a1i * a1i;
        const double n0 = a0r * a0r + a0i * a0i;
        const double nm1 = b1r * b1r + b1i * b1i;
        const double nm2 = b2r * b2r + b2i * b2i;
        rho[i] = n2 + n1 + n0 + nm1 + nm2;
        fz[i] = 2.0 * (n2 - nm2) + n1 - nm1;

        // conj(a)*b products
        const double c21r = a2r * a1r + a2i * a1i, c21i = a2r * a1i - a2i * a1r;
        const double cm12r = b1r * b2r + b1i * b2i, cm12i = b1r * b2i - b1i * b2r;
        const double c10r = a1r * a0r + a1i * a0i, c10i = a1r * a0i - a1i * a0r;
        const double c0m1r = a0r * b1r + a0i * b1i, c0m1i = a0r * b1i - a0i * b1r;
        fplus[2 * i] = 2.0 * (c21r + cm12r) + s6 * (c10r + c0m1r);
        fplus[2 * i + 1] = 2.0 * (c21i + cm12i) + s6 * (c10i + c0m1i);

        // plain products
        const double q22r = a2r * b2r - a2i * b2i, q22i = a2r * b2i + a2i * b2r;
        const double q11r = a1r * b1r - a1i * b1i, q11i = a1r * b1i + a1i * b1r;
        const double q00r = a0r * a0r - a0i * a0i, q00i = 2.0 * a0r * a0i;
        a00[2 * i] = (2.0 * q22r - 2.0 * q11r + q00r) * inv_s5;
        a00[2 * i + 1] = (2.0 * q22i - 2.0 * q11i + q00i) * inv_s5;
    }
}

constexpr Ops kScalarOps = {
    "scalar",   dot_s,        sumsq_s,     sumsq_diff_s,
    axpy_s,     xpby_s,       scale_s,     cdiag_mul_s,
    stencil1d_s, stencil2d_row_s, spinor_observables_s,
};

} // namespace

const Ops& scalar_ops() { return kScalarOps; }

} // namespace spin2::kernels
