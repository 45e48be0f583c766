#pragma once
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spin2/grid.hpp"

namespace spin2 {

// External trapping potential. HarmonicLattice is
//   V(x) = sum_j [ nu_j^2/2 + eta*(d-1)*sin^2(q_j nu_j) ],
// so in 1D the lattice term drops out and eta=0 is the pure harmonic trap.
// Box is zero on the computational domain; the wall is realized by the
// Dirichlet boundary.
struct PotentialSpec {
    enum class Kind { HarmonicLattice, Box };
    Kind kind = Kind::HarmonicLattice;
    double eta = 0.0;
    std::array<double, 2> q{1.0, 1.0};
};

inline double eval_potential(const PotentialSpec& spec, const double* x, int dim) {
    if (spec.kind == PotentialSpec::Kind::Box) return 0.0;
    double v = 0.0;
    for (int j = 0; j < dim; ++j) {
        const double s = std::sin(spec.q[j] * x[j]);
        v += 0.5 * x[j] * x[j] + spec.eta * (dim - 1) * s * s;
    }
    return v;
}

inline double eval_potential(const PotentialSpec& spec, double x) {
    return eval_potential(spec, &x, 1);
}

inline double eval_potential(const PotentialSpec& spec, double x, double y) {
    const double p[2] = {x, y};
    return eval_potential(spec, p, 2);
}

// V sampled on all grid nodes.
inline std::vector<double> potential_field(const PotentialSpec& spec, const Grid& grid) {
    std::vector<double> v(grid.size());
    if (grid.dim == 1) {
        for (int i = 0; i <= grid.cells[0]; ++i) v[i] = eval_potential(spec, grid.coord(0, i));
    } else {
        for (int iy = 0; iy <= grid.cells[1]; ++iy)
            for (int ix = 0; ix <= grid.cells[0]; ++ix)
                v[grid.index(ix, iy)] = eval_potential(spec, grid.coord(0, ix), grid.coord(1, iy));
    }
    return v;
}

// Interaction strengths and the magnetization target. M is normalized into
// [0,2) at construction; a negative input is recorded through `mirrored` and
// handled by flipping the component order on input/output (the energy is
// invariant under l -> -l together with M -> -M).
struct ModelParams {
    double beta0 = 100.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double M = 0.0;
    PotentialSpec potential{};
    bool mirrored = false;
};

inline ModelParams make_params(double beta0, double beta1, double beta2, double M,
                               PotentialSpec potential = {}) {
    ModelParams p;
    p.beta0 = beta0;
    p.beta1 = beta1;
    p.beta2 = beta2;
    p.mirrored = M < 0.0;
    p.M = std::abs(M);
    p.potential = potential;
    if (!(p.M < 2.0)) throw std::invalid_argument("params: |M| must be < 2");
    return p;
}

} // namespace spin2
