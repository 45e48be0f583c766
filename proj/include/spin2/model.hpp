#pragma once
#include <array>
#include <vector>

#include "spin2/field.hpp"
#include "spin2/params.hpp"

namespace spin2 {

// Pointwise quadratic observables of the spinor: total density, transverse
// spin density F+, longitudinal spin density Fz, and the spin-singlet pair
// amplitude A00 = (2 phi_2 phi_-2 - 2 phi_1 phi_-1 + phi_0^2)/sqrt(5).
struct Observables {
    std::vector<double> rho;
    std::vector<Complex> fplus;
    std::vector<double> fz;
    std::vector<Complex> a00;
};

Observables observables(const SpinorField& f);
void observables_into(const SpinorField& f, Observables& out);

struct Masses {
    double total = 0.0;
    double magnetization = 0.0;
    std::array<double, 5> comp{};
};

// Discrete masses: N_l = h^d sum_j |phi_l,j|^2 over interior nodes,
// M = sum_l l*N_l.
Masses masses(const SpinorField& f);

// Discrete GP energy with the gradient term assembled from forward
// differences across cell faces (summation by parts then reproduces the
// centered Laplacian exactly under the zero boundary).
double total_energy(const SpinorField& f, const ModelParams& p);

// Same, reusing precomputed observables and potential samples.
double total_energy_with(const SpinorField& f, const Observables& obs,
                         const std::vector<double>& v, const ModelParams& p);

// Right-hand side of the Euler-Lagrange system without the multiplier terms:
//   G_l = H_rho phi_l + (spin-coupling terms),  H_rho = -lap/2 + V + beta0*rho.
SpinorField el_gradient(const SpinorField& f, const ModelParams& p);

// Splitting of the spin-coupling part of G into a diagonal real factor and a
// remainder: a_l*phi_l + f_l = G_l - H_rho*phi_l, exactly, pointwise.
struct AfSplit {
    std::array<std::vector<double>, 5> a;
    std::array<std::vector<Complex>, 5> f;
};

AfSplit split_af(const SpinorField& f, const ModelParams& p);
void split_af_with(const SpinorField& f, const ModelParams& p, const Observables& obs,
                   AfSplit& out);

// Least-squares fit of (mu, lambda) in G_l ~ (mu + l*lambda) phi_l, plus the
// discrete L2 norm of the misfit. `degenerate` is set when all mass sits in a
// single component (lambda is then reported as zero).
struct ElFit {
    double mu = 0.0;
    double lambda = 0.0;
    double residual = 0.0;
    bool degenerate = false;
};

ElFit el_residual(const SpinorField& f, const ModelParams& p);

} // namespace spin2
