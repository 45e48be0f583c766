#include "spin2/projection.hpp"

#include <cmath>

#include "spin2/kernels.hpp"

namespace spin2 {

namespace {

// quartic coefficients of g in descending powers: c[k] multiplies lambda^(4-k)
// g(lambda) = sum_l (l-M) w_l lambda^(l+2), slot i holds l = 2-i
std::array<double, 5> quartic_coeffs(const std::array<double, 5>& w, double M) {
    return {(2.0 - M) * w[0], (1.0 - M) * w[1], -M * w[2], -(1.0 + M) * w[3], -(2.0 + M) * w[4]};
}

} // namespace

ProjectionWeights weights_of(const SpinorField& f, double M) {
    const auto& k = kernels::active_ops();
    const double hd = f.grid.dim == 2 ? f.grid.h(0) * f.grid.h(1) : f.grid.h(0);
    ProjectionWeights w;
    w.M = M;
    for (int i = 0; i < 5; ++i)
        w.w[i] = hd * k.sumsq(reinterpret_cast<const double*>(f.c[i].data()), 2 * f.grid.size());
    return w;
}

ProjectionConstants solve_sigma(const ProjectionWeights& input) {
    double total = 0.0;
    for (double wi : input.w) {
        if (wi < 0.0 || !std::isfinite(wi))
            throw std::invalid_argument("projection: weights must be finite and non-negative");
        total += wi;
    }
    if (total <= 0.0) throw InfeasibleProjection("projection: all weights are zero");
    const double M = input.M;

    // components carrying less than 1e-30 of the total are dead and stay dead
    std::array<double, 5> w = input.w;
    std::array<bool, 5> alive{};
    for (int i = 0; i < 5; ++i) {
        alive[i] = w[i] >= 1e-30 * total;
        if (!alive[i]) w[i] = 0.0;
    }

    ProjectionConstants out;

    // dedicated single-component cases of the constants theorem
    if (M == 1.0 && alive[1] && !alive[0] && !alive[2] && !alive[3] && !alive[4]) {
        out.theorem_case = 1;
        out.sigma0 = 1.0;
        out.lambda = 1.0 / w[1];   // sigma_l = sigma1^l with sigma1 = 1/sqrt(w1)
    } else if (M == 0.0 && alive[2] && !alive[0] && !alive[1] && !alive[3] && !alive[4]) {
        out.theorem_case = 2;
        out.sigma0 = 1.0 / std::sqrt(w[2]);
        out.lambda = w[2];         // sigma_l = sigma0^(1-l)
    } else {
        // feasibility: mass strictly below and strictly above M
        double below = 0.0, above = 0.0;
        for (int i = 0; i < 5; ++i) {
            if (kSpin[i] < M) below += w[i];
            if (kSpin[i] > M) above += w[i];
        }
        if (below <= 0.0 || above <= 0.0)
            throw InfeasibleProjection("projection: magnetization unreachable from current weights");

        out.theorem_case = 3;

        // scaling covariance: the root is invariant under w -> w/total
        std::array<double, 5> wn = w;
        for (double& x : wn) x /= total;
        const auto c = quartic_coeffs(wn, M);

        // factor out the leading zero-weight powers: h(lambda) = g(lambda)/lambda^p
        int lead = 4;   // slot of the lowest occupied l
        while (lead > 0 && c[lead] == 0.0) --lead;
        auto h = [&](double x) {
            double s = 0.0;
            for (int k = 0; k <= lead; ++k) s = s * x + c[k];
            return s;
        };
        auto hp = [&](double x) {
            double s = 0.0;
            for (int k = 0; k < lead; ++k) s = s * x + (lead - k) * c[k];
            return s;
        };

        double root = 1.0;
        const double h1 = h(1.0);
        if (h1 != 0.0) {
            // bracket by geometric expansion from 1; h(0+) < 0, h(+inf) = +inf
            double lo = 1.0, hi = 1.0;
            if (h1 > 0.0) {
                do { hi = lo; lo /= 10.0; } while (h(lo) > 0.0);
            } else {
                do { lo = hi; hi *= 10.0; } while (h(hi) < 0.0);
            }
            // bisect to a narrow bracket, then polish with safeguarded Newton
            while (hi - lo > 1e-3 * lo) {
                const double mid = 0.5 * (lo + hi);
                if (h(mid) >= 0.0) hi = mid; else lo = mid;
            }
            root = 0.5 * (lo + hi);
            for (int it = 0; it < 200; ++it) {
                const double hr = h(root);
                if (hr == 0.0) break;
                (hr > 0.0 ? hi : lo) = root;
                const double d = hp(root);
                double next = d != 0.0 ? root - hr / d : 0.0;
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                if (std::abs(next - root) <= 1e-14 * root) { root = next; break; }
                root = next;
            }
        }
        out.lambda = root;
        double denom = 0.0;
        for (int i = 0; i < 5; ++i)
            if (w[i] > 0.0) denom += w[i] * std::pow(root, kSpin[i]);
        out.sigma0 = 1.0 / std::sqrt(denom);
    }

    const double sqrt_l = std::sqrt(out.lambda);
    out.sigma = {out.sigma0 * out.lambda, out.sigma0 * sqrt_l, out.sigma0,
                 out.sigma0 / sqrt_l, out.sigma0 / out.lambda};
    return out;
}

void project_in_place(SpinorField& f, const ProjectionConstants& s) {
    auto& k = kernels::active_ops();
    for (int i = 0; i < 5; ++i)
        k.scale(s.sigma[i], reinterpret_cast<double*>(f.c[i].data()), 2 * f.grid.size());
}

SpinorField project(const SpinorField& f, const ProjectionConstants& s) {
    SpinorField out = f;
    project_in_place(out, s);
    return out;
}

} // namespace spin2
