#pragma once
#include <cstddef>

// Data-parallel inner loops used by the field operations and the linear
// solvers. Every kernel has a scalar reference implementation and, on x86-64
// with AVX2+FMA, a vectorized variant selected at runtime. Complex arrays are
// passed as interleaved (re,im) doubles; `n` always counts complex elements
// for the complex kernels and doubles for the real ones.
namespace spin2::kernels {

struct Ops {
    const char* name;

    // sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    // sum_i x[i]^2
    double (*sumsq)(const double* x, std::size_t n);
    // sum_i (x[i]-y[i])^2
    double (*sumsq_diff)(const double* x, const double* y, std::size_t n);
    // y += a*x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // y = x + b*y
    void (*xpby)(const double* x, double b, double* y, std::size_t n);
    // x *= a
    void (*scale)(double a, double* x, std::size_t n);

    // out_j = d_j * z_j for complex z, real d (n complex elements)
    void (*cdiag_mul)(const double* d, const double* z, double* out, std::size_t n);

    // out_j = d_j*z_j - c*(z_{j-1} + z_{j+1}); z must have valid (zero)
    // neighbours one complex element before and after the passed range.
    void (*stencil1d)(const double* d, const double* z, double* out, std::size_t n, double c);

    // out_j = d_j*z_j - cx*(z_{j-1}+z_{j+1}) - cy*(zm_j + zp_j)
    // zm/zp point at the same offset in the rows below/above.
    void (*stencil2d_row)(const double* d, const double* z, const double* zm,
                          const double* zp, double* out, std::size_t n,
                          double cx, double cy);

    // Pointwise spinor observables from the five component fields
    // phi[0..4] (complex, order l = 2,1,0,-1,-2):
    //   rho   = sum_l |phi_l|^2                               (n reals)
    //   fplus = 2(conj(p2)p1 + conj(p-1)p-2)
    //           + sqrt6(conj(p1)p0 + conj(p0)p-1)             (n complex)
    //   fz    = 2(|p2|^2-|p-2|^2) + |p1|^2 - |p-1|^2          (n reals)
    //   a00   = (2 p2 p-2 - 2 p1 p-1 + p0^2)/sqrt5            (n complex)
    void (*spinor_observables)(const double* const* phi, std::size_t n,
                               double* rho, double* fplus, double* fz, double* a00);
};

const Ops& scalar_ops();

// nullptr when the binary was built without AVX2 support or the CPU lacks it.
const Ops* avx2_ops();

// Selected once per process. Override with SPIN2_KERNELS=scalar|avx2|auto.
const Ops& active_ops();

} // namespace spin2::kernels
