#include "spin2/uniform.hpp"

#include <algorithm>
#include <cmath>

#include "spin2/field.hpp"

namespace spin2 {

namespace {

const double kSqrt6 = std::sqrt(6.0);

double sq(double x) { return x * x; }

UniformState make_state(double x2, double x1, double x0, double xm1, double xm2, double M) {
    UniformState s;
    s.xi = {x2, x1, x0, xm1, xm2};
    s.M = M;
    return s;
}

void check_M(double M) {
    if (!(M >= 0.0 && M < 2.0)) throw std::invalid_argument("uniform: M must lie in [0,2)");
}

Phase classify(double beta1, double beta2) {
    if (beta1 < 0.0 && beta2 > 20.0 * beta1) return Phase::Ferromagnetic;
    if (beta2 < 0.0 && beta2 < 20.0 * beta1) return Phase::Nematic;
    if (beta1 > 0.0 && beta2 > 0.0) return Phase::Cyclic;
    return Phase::Boundary;
}

} // namespace

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Ferromagnetic: return "ferromagnetic";
        case Phase::Nematic: return "nematic";
        case Phase::Cyclic: return "cyclic";
        default: return "boundary";
    }
}

TauDelta tau_delta(const UniformState& s) {
    const auto& x = s.xi;
    TauDelta td;
    td.tau = 2.0 * (x[0] * x[1] + x[3] * x[4]) + kSqrt6 * (x[1] * x[2] + x[2] * x[3]);
    td.delta = 2.0 * x[0] * x[4] - 2.0 * x[1] * x[3] + sq(x[2]);
    return td;
}

double uniform_energy(const UniformState& s, const ModelParams& p) {
    const TauDelta td = tau_delta(s);
    return 0.5 * (p.beta1 * sq(td.tau) + 0.2 * p.beta2 * sq(td.delta) + p.beta0 + p.beta1 * sq(s.M));
}

bool feasible(double tau, double delta, double M) {
    return sq(tau) + 4.0 * sq(delta) <= 4.0 - sq(M);
}

LandscapeMin minimize_landscape(double beta1, double beta2, double M) {
    check_M(M);
    const double r = std::sqrt(4.0 - sq(M));
    LandscapeMin out;
    out.phase = classify(beta1, beta2);
    if (out.phase == Phase::Ferromagnetic) {
        out.td = {r, 0.0};
    } else if (out.phase == Phase::Nematic) {
        out.td = {0.0, 0.5 * r};   // delta = -r/2 minimizes equally
        out.minimizers = {{0.0, 0.5 * r}, {0.0, -0.5 * r}};
    } else if (out.phase == Phase::Cyclic) {
        out.td = {0.0, 0.0};
    } else {
        if (beta1 < 0.0 && beta2 == 20.0 * beta1) {
            out.detail = "ferromagnetic/nematic boundary: every (tau,delta) with tau^2+4delta^2 = 4-M^2 minimizes";
            out.td = {r, 0.0};
            out.minimizers = {{r, 0.0}, {0.0, 0.5 * r}, {0.0, -0.5 * r}};
        } else if (beta1 == 0.0 && beta2 > 0.0) {
            out.detail = "ferromagnetic/cyclic boundary: every (tau,0) with 0 <= tau <= sqrt(4-M^2) minimizes";
            out.td = {r, 0.0};
            out.minimizers = {{r, 0.0}, {0.0, 0.0}};
        } else if (beta1 > 0.0 && beta2 == 0.0) {
            out.detail = "nematic/cyclic boundary: every (0,delta) with |delta| <= sqrt(4-M^2)/2 minimizes";
            out.td = {0.0, 0.5 * r};
            out.minimizers = {{0.0, 0.5 * r}, {0.0, -0.5 * r}, {0.0, 0.0}};
        } else {
            out.detail = "degenerate parameters: the reduced energy is constant on the feasible set";
            out.td = {0.0, 0.0};
            out.minimizers = {{r, 0.0}, {0.0, 0.5 * r}, {0.0, 0.0}};
        }
    }
    if (out.minimizers.empty()) out.minimizers = {out.td};
    return out;
}

namespace {

// Gauss-Newton refinement of the two constraints and the (tau, delta) targets.
// The case formulas lose digits where their trigonometric factors are large
// (small M with tau > 0); two or three corrector steps restore full accuracy.
void polish_xi(UniformState& s, double tau, double delta, double M) {
    auto& x = s.xi;
    for (int it = 0; it < 4; ++it) {
        const TauDelta td = tau_delta(s);
        double nrm = 0.0, mag = 0.0;
        for (int i = 0; i < 5; ++i) {
            nrm += sq(x[i]);
            mag += kSpin[i] * sq(x[i]);
        }
        const double r[4] = {nrm - 1.0, mag - M, td.tau - tau, td.delta - delta};
        if (std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]) + std::abs(r[3]) < 1e-15) return;

        const double J[4][5] = {
            {2 * x[0], 2 * x[1], 2 * x[2], 2 * x[3], 2 * x[4]},
            {4 * x[0], 2 * x[1], 0.0, -2 * x[3], -4 * x[4]},
            {2 * x[1], 2 * x[0] + kSqrt6 * x[2], kSqrt6 * (x[1] + x[3]),
             kSqrt6 * x[2] + 2 * x[4], 2 * x[3]},
            {2 * x[4], -2 * x[3], 2 * x[2], -2 * x[1], 2 * x[0]},
        };
        // least-norm correction dx = -J^T (J J^T)^{-1} r
        double a[4][5];   // [JJ^T | y] augmented
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                a[i][j] = 0.0;
                for (int k = 0; k < 5; ++k) a[i][j] += J[i][k] * J[j][k];
            }
            a[i][4] = r[i];
        }
        for (int k = 0; k < 4; ++k) {
            int piv = k;
            for (int i = k + 1; i < 4; ++i)
                if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
            if (std::abs(a[piv][k]) < 1e-11) return;   // rank-deficient target set
            std::swap(a[k], a[piv]);
            for (int i = k + 1; i < 4; ++i) {
                const double f = a[i][k] / a[k][k];
                for (int j = k; j < 5; ++j) a[i][j] -= f * a[k][j];
            }
        }
        double y[4];
        for (int i = 3; i >= 0; --i) {
            y[i] = a[i][4];
            for (int j = i + 1; j < 4; ++j) y[i] -= a[i][j] * y[j];
            y[i] /= a[i][i];
        }
        for (int k = 0; k < 5; ++k) {
            double dx = 0.0;
            for (int i = 0; i < 4; ++i) dx += J[i][k] * y[i];
            x[k] -= dx;
        }
    }
}

} // namespace

UniformState reconstruct_xi(double tau, double delta, double M) {
    check_M(M);
    if (tau < 0.0) throw std::domain_error("reconstruct: tau must be >= 0");
    if (sq(tau) + 4.0 * sq(delta) > 4.0 - sq(M) + 1e-12)
        throw std::domain_error("reconstruct: (tau,delta) outside S_{tau,delta}");

    if (delta >= 1.0) return make_state(0.0, 0.0, 1.0, 0.0, 0.0, M);

    const double p = std::sqrt(1.0 - delta);

    if (M == 0.0) {
        // cos(theta) = 0 branch: xi_-2 = xi_2, xi_-1 = p - xi_1
        const double disc = std::max(0.0, -48.0 * sq(p) * (4.0 * sq(delta) + sq(tau) + 4.0 * sq(M) - 4.0));
        const double x2 = (4.0 * p * tau + std::sqrt(disc)) / (32.0 * sq(p));
        const double x0 = (tau - 2.0 * p * x2) / (p * kSqrt6);
        const double x1 = (M + sq(p)) / (2.0 * p);
        UniformState s = make_state(x2, x1, x0, p - x1, x2, M);
        polish_xi(s, tau, delta, M);
        return s;
    }
    if (tau == 0.0) {
        // sin(theta) = 0 branch (cos(theta) = 1): xi_1 = -xi_-1 = 0
        const double x2 = -(M + 2.0 * sq(p)) / (4.0 * p);
        const double x0 = std::sqrt(std::max(0.0, (4.0 - sq(M) - 4.0 * sq(delta)) / (8.0 * sq(p))));
        UniformState s = make_state(x2, 0.0, x0, 0.0, p + x2, M);
        polish_xi(s, tau, delta, M);
        return s;
    }

    // general branch with theta = pi - arctan(tau/M), so M sin + tau cos = 0
    const double th = M_PI - std::atan(tau / M);
    const double s = std::sin(th), c = std::cos(th);
    const double s2 = std::sin(2.0 * th), c2 = std::cos(2.0 * th);
    const double A = 8.0 / sq(s2);
    const double B = (5.0 * tau * c + 3.0 * tau * std::cos(3.0 * th) - 5.0 * M * s
                      - 8.0 * sq(p) * s + 3.0 * M * std::sin(3.0 * th))
                     / (sq(s) * sq(c) * 4.0 * p);
    const double C = (sq(tau) / sq(s) + (M - 2.0 * sq(p)) * tau / (s * c)
                      - 0.5 / sq(c)
                            * (-2.0 * sq(M) + 6.0 * delta * sq(p) - M * sq(p) + sq(sq(p))
                               + 3.0 * sq(p) * (2.0 * delta + M + sq(p)) * c2
                               - 3.0 * sq(p) * tau * s2))
                     / (2.0 * sq(p));
    const double disc = std::max(0.0, B * B - 4.0 * A * C);
    const double x1 = (-B + std::sqrt(disc)) / (2.0 * A);
    const double x0 = (4.0 - 6.0 * sq(s)) / (kSqrt6 * s2) * x1
                      + (M - 2.0 * sq(p) + 3.0 * sq(p) * sq(s)) / (2.0 * kSqrt6 * p * c)
                      + tau / (kSqrt6 * p * s);
    const double x2 = -(M + 2.0 * sq(p) - sq(p) * sq(s) - 2.0 * p * s * x1) / (4.0 * p * c);
    UniformState out = make_state(x2, x1, x0, p * s - x1, p * c + x2, M);
    polish_xi(out, tau, delta, M);
    return out;
}

namespace {

UniformState ferro_xi(double M) {
    const double m1 = std::sqrt(2.0 + M), m2 = std::sqrt(2.0 - M);
    return make_state(sq(sq(m1)) / 16.0, m1 * sq(m1) * m2 / 8.0, kSqrt6 * sq(m1) * sq(m2) / 16.0,
                      m1 * m2 * sq(m2) / 8.0, sq(sq(m2)) / 16.0, M);
}

UniformState nematic_xi(double M, const GroundVariant& v) {
    if (M > 0.0 || v.family == 0) {
        const double m1 = std::sqrt(2.0 + M), m2 = std::sqrt(2.0 - M);
        return make_state(0.5 * m1, 0.0, 0.0, 0.0, 0.5 * m2, M);
    }
    const double th = v.theta.value_or(0.0);
    if (v.family == 1) {
        // xi0 = gamma free in [-1,1], the rest split by the angle
        if (std::abs(v.gamma) > 1.0)
            throw std::domain_error("nematic family 1: |gamma| must be <= 1");
        const double g1 = std::sqrt(0.5 * (1.0 - sq(v.gamma)));
        return make_state(g1 * std::cos(th), g1 * std::sin(th), v.gamma,
                          -g1 * std::sin(th), g1 * std::cos(th), 0.0);
    }
    if (v.family == 2) {
        const double is2 = 1.0 / std::sqrt(2.0);
        return make_state(std::cos(th) * is2, std::sin(th) * is2, 0.0,
                          std::sin(th) * is2, -std::cos(th) * is2, 0.0);
    }
    throw std::invalid_argument("nematic: unknown family");
}

UniformState cyclic_theta_xi(double M, double th, bool plus_branch) {
    const double s = std::sin(th), c = std::cos(th);
    if (s == 0.0 || c == 0.0)
        throw std::domain_error("cyclic theta-family: theta must avoid multiples of pi/2");
    const double bound = (4.0 - sq(M)) - 3.0 * sq(M) * sq(s);
    if (bound < 0.0)
        throw std::domain_error("cyclic theta-family: m1^2 m2^2 - 3 M^2 sin^2(theta) >= 0 violated");
    const double g = std::sqrt(bound) * std::abs(s * c);
    const double sgn = plus_branch ? 1.0 : -1.0;
    const double x1 = 0.75 * M * s * sq(s) + 0.25 * (2.0 - M) * s + sgn * std::sqrt(3.0) / 4.0 * g;
    const double x2 = 0.125 * (3.0 * M * sq(s) + 2.0 * (2.0 + M)) * c
                      - sgn * std::sqrt(3.0) / 8.0 * g * (s / c);
    const double cot2 = std::cos(2.0 * th) / std::sin(2.0 * th);
    const double x0 = -0.375 * kSqrt6 * M * sq(s) * c
                      - sgn * std::sqrt(2.0) / 8.0 * (2.0 * cot2 + c / s) * g;
    return make_state(x2, x1, x0, s - x1, x2 - c, M);
}

UniformState cyclic_xi(double M, const GroundVariant& v) {
    const double default_theta = std::atan(std::sqrt((2.0 - M) / (1.0 + M)));
    if (v.family == 0 && !v.theta) {
        // the suggested representative (1,2)-component state
        return make_state(std::sqrt((M + 1.0) / 3.0), 0.0, 0.0, std::sqrt((2.0 - M) / 3.0), 0.0, M);
    }
    if (v.family == 1) {
        if (M > 1.0) throw std::domain_error("cyclic family 1 requires M <= 1");
        const double m1 = std::sqrt(2.0 + M), m2 = std::sqrt(2.0 - M);
        return make_state(sq(m1) / 4.0, 0.0, std::sqrt(2.0) * m1 * m2 / 4.0, 0.0, -sq(m2) / 4.0, M);
    }
    if (v.family == 2) {
        if (M > 1.0) throw std::domain_error("cyclic family 2 requires M <= 1");
        const double m3 = std::sqrt(1.0 + M), m4 = std::sqrt(1.0 - M);
        return make_state(std::sqrt(3.0) * m3 * m4 / 4.0, sq(m3) / 2.0,
                          -std::sqrt(2.0) * m3 * m4 / 4.0, sq(m4) / 2.0,
                          std::sqrt(3.0) * m3 * m4 / 4.0, M);
    }
    // theta-family (family 0 with explicit theta, or family 3)
    return cyclic_theta_xi(M, v.theta.value_or(default_theta), v.plus_branch);
}

} // namespace

UniformState ground_xi(double beta1, double beta2, double M, const GroundVariant& variant) {
    check_M(M);
    const LandscapeMin lm = minimize_landscape(beta1, beta2, M);
    switch (lm.phase) {
        case Phase::Ferromagnetic:
            return ferro_xi(M);
        case Phase::Nematic:
            return nematic_xi(M, variant);
        case Phase::Cyclic:
            return cyclic_xi(M, variant);
        case Phase::Boundary: {
            // the union of the adjacent regimes' families; family indices are
            // offset so 0 stays a sensible default
            if (beta1 < 0.0 && beta2 == 20.0 * beta1)
                return variant.family == 0 ? ferro_xi(M)
                                           : nematic_xi(M, {variant.family - 1, variant.gamma,
                                                            variant.theta, variant.plus_branch});
            if (beta1 == 0.0 && beta2 > 0.0)
                return variant.family == 0 ? ferro_xi(M)
                                           : cyclic_xi(M, {variant.family - 1, variant.gamma,
                                                           variant.theta, variant.plus_branch});
            if (beta1 > 0.0 && beta2 == 0.0)
                return variant.family == 0 ? nematic_xi(M, {0, variant.gamma, variant.theta,
                                                            variant.plus_branch})
                                           : cyclic_xi(M, {variant.family - 1, variant.gamma,
                                                           variant.theta, variant.plus_branch});
            // fully degenerate: any feasible state; return the cyclic default
            return cyclic_xi(M, variant);
        }
    }
    throw std::logic_error("unreachable");
}

BetaM beta_of_M(double beta0, double beta1, double beta2, double M) {
    if (!(std::abs(M) <= 2.0)) throw std::invalid_argument("beta_of_M: M must lie in [-2,2]");
    BetaM out;
    const double M2 = sq(M);
    switch (classify(beta1, beta2)) {
        case Phase::Ferromagnetic:
            out.value = 0.5 * (beta0 + 4.0 * beta1);
            break;
        case Phase::Nematic:
            out.value = 0.5 * (beta0 + 0.2 * beta2 + (20.0 * beta1 - beta2) * M2 / 20.0);
            break;
        case Phase::Cyclic:
            out.value = 0.5 * (beta0 + beta1 * M2);
            break;
        case Phase::Boundary:
            // adjacent regimes agree on the value at the boundary
            out.boundary = true;
            if (beta1 < 0.0)
                out.value = 0.5 * (beta0 + 4.0 * beta1);
            else
                out.value = 0.5 * (beta0 + beta1 * M2);
            break;
    }
    out.regime = classify(beta1, beta2);
    return out;
}

BetaMin min_beta_over_M(double beta0, double beta1, double beta2) {
    BetaMin out;
    out.regime = classify(beta1, beta2);
    switch (out.regime) {
        case Phase::Ferromagnetic:
            out.value = 0.5 * (beta0 + 4.0 * beta1);
            out.M_free = true;
            break;
        case Phase::Nematic:
            out.value = 0.5 * (beta0 + 0.2 * beta2);
            break;
        case Phase::Cyclic:
            out.value = 0.5 * beta0;
            break;
        case Phase::Boundary:
            out.boundary = true;
            out.value = beta1 < 0.0 ? 0.5 * (beta0 + 4.0 * beta1) : 0.5 * beta0;
            out.M_free = beta1 <= 0.0;   // the flat direction of the adjacent regimes
            break;
    }
    return out;
}

std::vector<LandscapeRow> landscape_grid(double beta0, double beta1, double beta2,
                                         double M, int resolution) {
    check_M(M);
    if (resolution < 2) throw std::invalid_argument("landscape: resolution must be >= 2");
    const double rmax = std::sqrt(4.0 - sq(M));

    std::vector<LandscapeRow> rows;
    rows.reserve(static_cast<std::size_t>(resolution) * resolution);
    std::size_t best = 0;
    double best_e = 1e300;
    for (int ir = 0; ir < resolution; ++ir) {
        const double r = rmax * ir / (resolution - 1);
        for (int it = 0; it < resolution; ++it) {
            const double th = -0.5 * M_PI + M_PI * it / resolution;
            LandscapeRow row;
            row.tau = r * std::cos(th);
            row.delta = 0.5 * r * std::sin(th);
            row.energy = 0.5 * (beta1 * sq(row.tau) + 0.2 * beta2 * sq(row.delta)
                                + beta0 + beta1 * sq(M));
            if (row.energy < best_e) {
                best_e = row.energy;
                best = rows.size();
            }
            rows.push_back(row);
        }
    }
    rows[best].argmin = true;
    return rows;
}

} // namespace spin2
