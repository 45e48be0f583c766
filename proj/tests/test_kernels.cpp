#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "spin2/kernels.hpp"

using namespace spin2::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& r, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = scale * u(r);
    return v;
}

constexpr std::size_t kSizes[] = {0, 1, 2, 3, 5, 8, 16, 33, 101, 1024};

} // namespace

TEST_CASE("active kernel set is one of the registered ones") {
    const Ops& ops = active_ops();
    CHECK((std::string(ops.name) == "scalar" || std::string(ops.name) == "avx2"));
}

TEST_CASE("dot agrees with long double reference") {
    auto r = std::mt19937_64(1);
    for (std::size_t n : kSizes) {
        auto x = random_vec(n, r), y = random_vec(n, r);
        long double ref = 0.0L;
        for (std::size_t i = 0; i < n; ++i) ref += (long double)x[i] * y[i];
        CHECK(scalar_ops().dot(x.data(), y.data(), n)
              == doctest::Approx((double)ref).epsilon(1e-13));
        if (const Ops* v = avx2_ops())
            CHECK(v->dot(x.data(), y.data(), n) == doctest::Approx((double)ref).epsilon(1e-13));
    }
}

TEST_CASE("vector kernels match the scalar reference") {
    const Ops* v = avx2_ops();
    if (!v) return;   // nothing to compare on this host
    auto r = std::mt19937_64(2);
    for (std::size_t n : kSizes) {
        auto x = random_vec(n, r), y = random_vec(n, r);

        CHECK(v->sumsq(x.data(), n)
              == doctest::Approx(scalar_ops().sumsq(x.data(), n)).epsilon(1e-13));
        CHECK(v->sumsq_diff(x.data(), y.data(), n)
              == doctest::Approx(scalar_ops().sumsq_diff(x.data(), y.data(), n)).epsilon(1e-13));

        auto y1 = y, y2 = y;
        scalar_ops().axpy(0.37, x.data(), y1.data(), n);
        v->axpy(0.37, x.data(), y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));

        y1 = y;
        y2 = y;
        scalar_ops().xpby(x.data(), -1.7, y1.data(), n);
        v->xpby(x.data(), -1.7, y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == doctest::Approx(y2[i]).epsilon(1e-14));

        y1 = x;
        y2 = x;
        scalar_ops().scale(3.25, y1.data(), n);
        v->scale(3.25, y2.data(), n);
        for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == y2[i]);
    }
}

TEST_CASE("complex diagonal and stencil kernels match the scalar reference") {
    const Ops* v = avx2_ops();
    auto r = std::mt19937_64(3);
    for (std::size_t n : {1u, 2u, 3u, 9u, 64u, 255u}) {
        auto d = random_vec(n, r);
        // one complex halo element on each side for the stencils
        auto z = random_vec(2 * n + 4, r);
        std::vector<double> zm = random_vec(2 * n, r), zp = random_vec(2 * n, r);

        std::vector<double> o1(2 * n), o2(2 * n);
        scalar_ops().cdiag_mul(d.data(), z.data() + 2, o1.data(), n);
        if (v) {
            v->cdiag_mul(d.data(), z.data() + 2, o2.data(), n);
            for (std::size_t i = 0; i < 2 * n; ++i)
                CHECK(o1[i] == doctest::Approx(o2[i]).epsilon(1e-14));
        }

        scalar_ops().stencil1d(d.data(), z.data() + 2, o1.data(), n, 0.5);
        // naive check of the scalar stencil itself
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(o1[2 * i]
                  == doctest::Approx(d[i] * z[2 + 2 * i] - 0.5 * (z[2 * i] + z[4 + 2 * i]))
                         .epsilon(1e-14));
        }
        if (v) {
            v->stencil1d(d.data(), z.data() + 2, o2.data(), n, 0.5);
            for (std::size_t i = 0; i < 2 * n; ++i)
                CHECK(o1[i] == doctest::Approx(o2[i]).epsilon(1e-14));
        }

        scalar_ops().stencil2d_row(d.data(), z.data() + 2, zm.data(), zp.data(), o1.data(), n,
                                   0.5, 0.25);
        if (v) {
            v->stencil2d_row(d.data(), z.data() + 2, zm.data(), zp.data(), o2.data(), n, 0.5,
                             0.25);
            for (std::size_t i = 0; i < 2 * n; ++i)
                CHECK(o1[i] == doctest::Approx(o2[i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("spinor observables: single-component fields") {
    // phi = (0,0,g,0,0): F+ = 0, Fz = 0, A00 = g^2/sqrt5
    const std::size_t n = 4;
    std::vector<std::vector<double>> phi(5, std::vector<double>(2 * n, 0.0));
    const double gr = 0.8, gi = -0.3;
    for (std::size_t i = 0; i < n; ++i) {
        phi[2][2 * i] = gr;
        phi[2][2 * i + 1] = gi;
    }
    const double* ptrs[5] = {phi[0].data(), phi[1].data(), phi[2].data(), phi[3].data(),
                             phi[4].data()};
    std::vector<double> rho(n), fz(n), fp(2 * n), a00(2 * n);
    scalar_ops().spinor_observables(ptrs, n, rho.data(), fp.data(), fz.data(), a00.data());

    const std::complex<double> gsq = std::complex<double>(gr, gi) * std::complex<double>(gr, gi);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(rho[i] == doctest::Approx(gr * gr + gi * gi));
        CHECK(fz[i] == doctest::Approx(0.0));
        CHECK(fp[2 * i] == doctest::Approx(0.0));
        CHECK(fp[2 * i + 1] == doctest::Approx(0.0));
        CHECK(a00[2 * i] == doctest::Approx(gsq.real() / std::sqrt(5.0)));
        CHECK(a00[2 * i + 1] == doctest::Approx(gsq.imag() / std::sqrt(5.0)));
    }

    // phi = (g,0,0,0,0): Fz = 2|g|^2, F+ = 0, A00 = 0
    for (auto& c : phi) std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        phi[0][2 * i] = gr;
        phi[0][2 * i + 1] = gi;
    }
    scalar_ops().spinor_observables(ptrs, n, rho.data(), fp.data(), fz.data(), a00.data());
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(fz[i] == doctest::Approx(2.0 * (gr * gr + gi * gi)));
        CHECK(fp[2 * i] == doctest::Approx(0.0));
        CHECK(a00[2 * i] == doctest::Approx(0.0));
    }
}

TEST_CASE("spinor observables: vector variant matches scalar on random data") {
    const Ops* v = avx2_ops();
    if (!v) return;
    auto r = std::mt19937_64(4);
    for (std::size_t n : {1u, 2u, 3u, 7u, 32u, 333u}) {
        std::vector<std::vector<double>> phi;
        for (int c = 0; c < 5; ++c) phi.push_back(random_vec(2 * n, r));
        const double* ptrs[5] = {phi[0].data(), phi[1].data(), phi[2].data(), phi[3].data(),
                                 phi[4].data()};
        std::vector<double> rho1(n), fz1(n), fp1(2 * n), a1(2 * n);
        std::vector<double> rho2(n), fz2(n), fp2(2 * n), a2(2 * n);
        scalar_ops().spinor_observables(ptrs, n, rho1.data(), fp1.data(), fz1.data(), a1.data());
        v->spinor_observables(ptrs, n, rho2.data(), fp2.data(), fz2.data(), a2.data());
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(rho1[i] == doctest::Approx(rho2[i]).epsilon(1e-13));
            CHECK(fz1[i] == doctest::Approx(fz2[i]).epsilon(1e-13));
        }
        for (std::size_t i = 0; i < 2 * n; ++i) {
            CHECK(fp1[i] == doctest::Approx(fp2[i]).epsilon(1e-13));
            CHECK(a1[i] == doctest::Approx(a2[i]).epsilon(1e-13));
        }
    }
}
