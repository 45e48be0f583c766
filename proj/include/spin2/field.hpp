#pragma once
#include <array>
#include <complex>
#include <vector>

#include "spin2/grid.hpp"

namespace spin2 {

using Complex = std::complex<double>;

// spin index of component slot i (slots run phi_2, phi_1, phi_0, phi_-1, phi_-2)
inline constexpr std::array<int, 5> kSpin = {2, 1, 0, -1, -2};
inline constexpr int slot_of_spin(int l) { return 2 - l; }

// Five complex scalar fields on a common grid, boundary values zero.
struct SpinorField {
    Grid grid;
    std::array<std::vector<Complex>, 5> c;

    explicit SpinorField(const Grid& g) : grid(g) {
        for (auto& v : c) v.assign(grid.size(), Complex{0.0, 0.0});
    }
    SpinorField() = default;
};

// One complex field on a grid (the shared spatial mode of the SMA and the
// scalar ground-state solver).
struct ScalarField {
    Grid grid;
    std::vector<Complex> v;

    explicit ScalarField(const Grid& g) : grid(g), v(g.size(), Complex{0.0, 0.0}) {}
    ScalarField() = default;
};

// l -> -l component flip (used with M -> -M)
inline SpinorField mirror(const SpinorField& f) {
    SpinorField out(f.grid);
    for (int i = 0; i < 5; ++i) out.c[i] = f.c[4 - i];
    return out;
}

inline void zero_boundary(std::vector<Complex>& v, const Grid& g) {
    if (g.dim == 1) {
        v.front() = 0.0;
        v.back() = 0.0;
        return;
    }
    const int nx = g.cells[0], ny = g.cells[1];
    for (int ix = 0; ix <= nx; ++ix) {
        v[g.index(ix, 0)] = 0.0;
        v[g.index(ix, ny)] = 0.0;
    }
    for (int iy = 0; iy <= ny; ++iy) {
        v[g.index(0, iy)] = 0.0;
        v[g.index(nx, iy)] = 0.0;
    }
}

} // namespace spin2
