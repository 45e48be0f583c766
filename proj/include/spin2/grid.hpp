#pragma once
#include <array>
#include <cstddef>
#include <stdexcept>

namespace spin2 {

// Rectangular grid with homogeneous Dirichlet boundary. Axis j has N[j]+1
// nodes x_i = lower[j] + i*h[j]; indices 1..N[j]-1 are interior, boundary
// values of all fields are identically zero.
struct Grid {
    int dim = 1;
    std::array<double, 2> lower{-10.0, -10.0};
    std::array<double, 2> upper{10.0, 10.0};
    std::array<int, 2> cells{0, 0};   // N per axis, even and positive

    double h(int axis) const { return (upper[axis] - lower[axis]) / cells[axis]; }
    int points(int axis) const { return cells[axis] + 1; }
    double coord(int axis, int i) const { return lower[axis] + i * h(axis); }

    // total storage nodes (boundary included); 2D layout is row-major with x
    // fastest: idx = iy*(Nx+1) + ix
    std::size_t size() const {
        std::size_t s = static_cast<std::size_t>(points(0));
        if (dim == 2) s *= static_cast<std::size_t>(points(1));
        return s;
    }
    std::size_t index(int ix, int iy = 0) const {
        return static_cast<std::size_t>(iy) * points(0) + ix;
    }

    void validate() const {
        if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
        for (int a = 0; a < dim; ++a) {
            if (cells[a] <= 0 || cells[a] % 2 != 0)
                throw std::invalid_argument("grid: point count must be even and positive");
            if (!(upper[a] > lower[a]))
                throw std::invalid_argument("grid: upper bound must exceed lower bound");
        }
    }
};

inline Grid make_grid_1d(double a, double b, int n) {
    Grid g;
    g.dim = 1;
    g.lower[0] = a;
    g.upper[0] = b;
    g.cells[0] = n;
    g.validate();
    return g;
}

inline Grid make_grid_2d(double ax, double bx, int nx, double ay, double by, int ny) {
    Grid g;
    g.dim = 2;
    g.lower = {ax, ay};
    g.upper = {bx, by};
    g.cells = {nx, ny};
    g.validate();
    return g;
}

} // namespace spin2
