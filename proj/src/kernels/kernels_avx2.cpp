#include "spin2/kernels.hpp"

#if defined(SPIN2_HAVE_AVX2)

#include <cmath>
#include <immintrin.h>

namespace spin2::kernels {
namespace {

// --- small helpers on vectors of 2 interleaved complex doubles ------------

// (d0,d1) -> (d0,d0,d1,d1)
inline __m256d broadcast_pair(const double* d) {
    return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(d)), 0x50);
}

// a*b for two complex lanes
inline __m256d cmul(__m256d a, __m256d b) {
    __m256d are = _mm256_movedup_pd(a);          // (ar,ar)
    __m256d aim = _mm256_permute_pd(a, 0xF);     // (ai,ai)
    __m256d bsw = _mm256_permute_pd(b, 0x5);     // (bi,br)
    return _mm256_fmaddsub_pd(are, b, _mm256_mul_pd(aim, bsw));
}

// conj(a)*b for two complex lanes
inline __m256d cmulc(__m256d a, __m256d b) {
    __m256d are = _mm256_movedup_pd(a);
    __m256d aim = _mm256_permute_pd(a, 0xF);
    __m256d bsw = _mm256_permute_pd(b, 0x5);
    return _mm256_fmsubadd_pd(are, b, _mm256_mul_pd(aim, bsw));
}

// (x0+x1, x2+x3) of a 4-vector, stored to two doubles
inline void store_pair_sums(double* out, __m256d x) {
    __m256d h = _mm256_hadd_pd(x, x);                   // (x0+x1, ., x2+x3, .)
    _mm_storeu_pd(out, _mm256_castpd256_pd128(_mm256_permute4x64_pd(h, 0x08)));
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// --- BLAS-1 style kernels ---------------------------------------------------

double dot_v(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

double sumsq_v(const double* x, std::size_t n) { return dot_v(x, x, n); }

double sumsq_diff_v(const double* x, const double* y, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

void axpy_v(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void xpby_v(const double* x, double b, double* y, std::size_t n) {
    const __m256d bv = _mm256_set1_pd(b);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(bv, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

void scale_v(double a, double* x, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

// --- complex field kernels --------------------------------------------------

void cdiag_mul_v(const double* d, const double* z, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        _mm256_storeu_pd(out + 2 * i,
                         _mm256_mul_pd(broadcast_pair(d + i), _mm256_loadu_pd(z + 2 * i)));
    for (; i < n; ++i) {
        out[2 * i] = d[i] * z[2 * i];
        out[2 * i + 1] = d[i] * z[2 * i + 1];
    }
}

void stencil1d_v(const double* d, const double* z, double* out, std::size_t n, double c) {
    const __m256d cv = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d zc = _mm256_loadu_pd(z + 2 * i);
        __m256d nb = _mm256_add_pd(_mm256_loadu_pd(z + 2 * i - 2), _mm256_loadu_pd(z + 2 * i + 2));
        __m256d r = _mm256_fnmadd_pd(cv, nb, _mm256_mul_pd(broadcast_pair(d + i), zc));
        _mm256_storeu_pd(out + 2 * i, r);
    }
    for (; i < n; ++i) {
        out[2 * i] = d[i] * z[2 * i] - c * (z[2 * i - 2] + z[2 * i + 2]);
        out[2 * i + 1] = d[i] * z[2 * i + 1] - c * (z[2 * i - 1] + z[2 * i + 3]);
    }
}

void stencil2d_row_v(const double* d, const double* z, const double* zm,
                     const double* zp, double* out, std::size_t n,
                     double cx, double cy) {
    const __m256d cxv = _mm256_set1_pd(cx);
    const __m256d cyv = _mm256_set1_pd(cy);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d zc = _mm256_loadu_pd(z + 2 * i);
        __m256d nbx = _mm256_add_pd(_mm256_loadu_pd(z + 2 * i - 2), _mm256_loadu_pd(z + 2 * i + 2));
        __m256d nby = _mm256_add_pd(_mm256_loadu_pd(zm + 2 * i), _mm256_loadu_pd(zp + 2 * i));
        __m256d r = _mm256_mul_pd(broadcast_pair(d + i), zc);
        r = _mm256_fnmadd_pd(cxv, nbx, r);
        r = _mm256_fnmadd_pd(cyv, nby, r);
        _mm256_storeu_pd(out + 2 * i, r);
    }
    for (; i < n; ++i) {
        out[2 * i] = d[i] * z[2 * i] - cx * (z[2 * i - 2] + z[2 * i + 2])
                     - cy * (zm[2 * i] + zp[2 * i]);
        out[2 * i + 1] = d[i] * z[2 * i + 1] - cx * (z[2 * i - 1] + z[2 * i + 3])
                         - cy * (zm[2 * i + 1] + zp[2 * i + 1]);
    }
}

void spinor_observables_v(const double* const* phi, std::size_t n,
                          double* rho, double* fplus, double* fz, double* a00) {
    const double s6 = std::sqrt(6.0);
    const double inv_s5 = 1.0 / std::sqrt(5.0);
    const __m256d s6v = _mm256_set1_pd(s6);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d inv_s5v = _mm256_set1_pd(inv_s5);
    const double* p2 = phi[0];
    const double* p1 = phi[1];
    const double* p0 = phi[2];
    const double* m1 = phi[3];
    const double* m2 = phi[4];

    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        __m256d v2 = _mm256_loadu_pd(p2 + 2 * i);
        __m256d v1 = _mm256_loadu_pd(p1 + 2 * i);
        __m256d v0 = _mm256_loadu_pd(p0 + 2 * i);
        __m256d w1 = _mm256_loadu_pd(m1 + 2 * i);
        __m256d w2 = _mm256_loadu_pd(m2 + 2 * i);

        __m256d s2 = _mm256_mul_pd(v2, v2);
        __m256d s1 = _mm256_mul_pd(v1, v1);
        __m256d s0 = _mm256_mul_pd(v0, v0);
        __m256d t1 = _mm256_mul_pd(w1, w1);
        __m256d t2 = _mm256_mul_pd(w2, w2);

        store_pair_sums(rho + i, _mm256_add_pd(_mm256_add_pd(_mm256_add_pd(s2, s1),
                                                             _mm256_add_pd(s0, t1)), t2));
        __m256d fzv = _mm256_fmadd_pd(two, _mm256_sub_pd(s2, t2), _mm256_sub_pd(s1, t1));
        store_pair_sums(fz + i, fzv);

        __m256d fp = _mm256_add_pd(cmulc(v2, v1), cmulc(w1, w2));
        fp = _mm256_fmadd_pd(s6v, _mm256_add_pd(cmulc(v1, v0), cmulc(v0, w1)),
                             _mm256_mul_pd(two, fp));
        _mm256_storeu_pd(fplus + 2 * i, fp);

        __m256d av = _mm256_sub_pd(cmul(v2, w2), cmul(v1, w1));
        av = _mm256_fmadd_pd(two, av, cmul(v0, v0));
        _mm256_storeu_pd(a00 + 2 * i, _mm256_mul_pd(av, inv_s5v));
    }
    if (i < n) {
        const double* tail[5] = {p2 + 2 * i, p1 + 2 * i, p0 + 2 * i, m1 + 2 * i, m2 + 2 * i};
        scalar_ops().spinor_observables(tail, n - i, rho + i, fplus + 2 * i, fz + i, a00 + 2 * i);
    }
}

constexpr Ops kAvx2Ops = {
    "avx2",      dot_v,        sumsq_v,     sumsq_diff_v,
    axpy_v,      xpby_v,       scale_v,     cdiag_mul_v,
    stencil1d_v, stencil2d_row_v, spinor_observables_v,
};

} // namespace

const Ops* avx2_ops() {
    static const Ops* ops = []() -> const Ops* {
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
            return &kAvx2Ops;
        return nullptr;
    }();
    return ops;
}

} // namespace spin2::kernels

#else // !SPIN2_HAVE_AVX2

namespace spin2::kernels {
const Ops* avx2_ops() { return nullptr; }
} // namespace spin2::kernels

#endif
