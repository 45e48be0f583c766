#include "spin2/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace spin2 {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using File = std::unique_ptr<std::FILE, FileCloser>;

File open_write(const std::string& path) {
    File f(std::fopen(path.c_str(), "w"));
    if (!f) throw std::runtime_error("io: cannot write '" + path + "'");
    return f;
}

} // namespace

void write_field_snapshot(const std::string& path, const SpinorField& f) {
    const Grid& g = f.grid;
    File out = open_write(path);
    if (g.dim == 1)
        std::fprintf(out.get(), "# grid dim=1 cells=%d lower=%.17g upper=%.17g\n", g.cells[0],
                     g.lower[0], g.upper[0]);
    else
        std::fprintf(out.get(), "# grid dim=2 cells=%d,%d lower=%.17g,%.17g upper=%.17g,%.17g\n",
                     g.cells[0], g.cells[1], g.lower[0], g.lower[1], g.upper[0], g.upper[1]);
    std::fprintf(out.get(), "%s", g.dim == 1 ? "x" : "x\ty");
    for (const char* name : {"p2", "p1", "0", "m1", "m2"})
        std::fprintf(out.get(), "\tre_phi_%s\tim_phi_%s", name, name);
    std::fprintf(out.get(), "\n");

    const int ny = g.dim == 2 ? g.cells[1] : 0;
    for (int iy = 0; iy <= ny; ++iy) {
        for (int ix = 0; ix <= g.cells[0]; ++ix) {
            const std::size_t j = g.index(ix, iy);
            std::fprintf(out.get(), "%.17g", g.coord(0, ix));
            if (g.dim == 2) std::fprintf(out.get(), "\t%.17g", g.coord(1, iy));
            for (int c = 0; c < 5; ++c)
                std::fprintf(out.get(), "\t%.17g\t%.17g", f.c[c][j].real(), f.c[c][j].imag());
            std::fprintf(out.get(), "\n");
        }
    }
}

SpinorField read_field_snapshot(const std::string& path) {
    File in(std::fopen(path.c_str(), "r"));
    if (!in) throw std::runtime_error("io: cannot read '" + path + "'");

    Grid g;
    {
        char line[512];
        if (!std::fgets(line, sizeof line, in.get()))
            throw std::runtime_error("io: empty snapshot '" + path + "'");
        int dim = 0;
        if (std::sscanf(line, "# grid dim=%d", &dim) != 1 || (dim != 1 && dim != 2))
            throw std::runtime_error("io: bad snapshot header in '" + path + "'");
        g.dim = dim;
        if (dim == 1) {
            if (std::sscanf(line, "# grid dim=1 cells=%d lower=%lg upper=%lg", &g.cells[0],
                            &g.lower[0], &g.upper[0]) != 3)
                throw std::runtime_error("io: bad snapshot header in '" + path + "'");
        } else {
            if (std::sscanf(line, "# grid dim=2 cells=%d,%d lower=%lg,%lg upper=%lg,%lg",
                            &g.cells[0], &g.cells[1], &g.lower[0], &g.lower[1], &g.upper[0],
                            &g.upper[1]) != 6)
                throw std::runtime_error("io: bad snapshot header in '" + path + "'");
        }
        g.validate();
        if (!std::fgets(line, sizeof line, in.get()))   // column header
            throw std::runtime_error("io: truncated snapshot '" + path + "'");
    }

    SpinorField f(g);
    const int ny = g.dim == 2 ? g.cells[1] : 0;
    for (int iy = 0; iy <= ny; ++iy)
        for (int ix = 0; ix <= g.cells[0]; ++ix) {
            double coord;
            if (std::fscanf(in.get(), "%lg", &coord) != 1)
                throw std::runtime_error("io: truncated snapshot '" + path + "'");
            if (g.dim == 2 && std::fscanf(in.get(), "%lg", &coord) != 1)
                throw std::runtime_error("io: truncated snapshot '" + path + "'");
            for (int c = 0; c < 5; ++c) {
                double re, im;
                if (std::fscanf(in.get(), "%lg %lg", &re, &im) != 2)
                    throw std::runtime_error("io: truncated snapshot '" + path + "'");
                f.c[c][g.index(ix, iy)] = Complex{re, im};
            }
        }
    return f;
}

void write_diagnostics(const std::string& path, const RunDiagnostics& d) {
    File out = open_write(path);
    std::fprintf(out.get(), "iter\tenergy\tn_total\tm_total\tresidual\tlambda\n");
    for (long k = 0; k < d.iterations; ++k)
        std::fprintf(out.get(), "%ld\t%.17g\t%.17g\t%.17g\t%.17g\t%.17g\n", k + 1,
                     d.energy[k + 1], d.n_total[k], d.m_total[k], d.residual[k], d.lambda[k]);
}

void write_landscape(const std::string& path, const std::vector<LandscapeRow>& rows) {
    File out = open_write(path);
    std::fprintf(out.get(), "tau\tdelta\tenergy\targmin\n");
    for (const auto& r : rows)
        std::fprintf(out.get(), "%.17g\t%.17g\t%.17g\t%d\n", r.tau, r.delta, r.energy,
                     r.argmin ? 1 : 0);
}

} // namespace spin2
