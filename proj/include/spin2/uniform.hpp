#pragma once
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spin2/params.hpp"

namespace spin2 {

// Real representative of a spatially uniform state: a five-vector xi with
// sum xi_l^2 = 1 and sum l*xi_l^2 = M.
struct UniformState {
    std::array<double, 5> xi{};   // order l = 2,1,0,-1,-2
    double M = 0.0;
};

// Values of the spin observables on a uniform state: tau = F+(xi) and
// delta = 2 xi2 xi-2 - 2 xi1 xi-1 + xi0^2 (the singlet amplitude without the
// 1/sqrt5 normalization). Feasible states satisfy tau^2 + 4 delta^2 <= 4 - M^2.
struct TauDelta {
    double tau = 0.0;
    double delta = 0.0;
};

enum class Phase { Ferromagnetic, Nematic, Cyclic, Boundary };

const char* phase_name(Phase p);

// Result of minimizing the reduced energy over the feasible ellipse. On the
// boundary parameter sets the minimizer is not unique; `minimizers` then lists
// one representative per degenerate family and `detail` describes the set.
struct LandscapeMin {
    TauDelta td;
    Phase phase = Phase::Cyclic;
    std::string detail;
    std::vector<TauDelta> minimizers;
};

TauDelta tau_delta(const UniformState& s);
double uniform_energy(const UniformState& s, const ModelParams& p);
bool feasible(double tau, double delta, double M);

LandscapeMin minimize_landscape(double beta1, double beta2, double M);

// Rebuilds a real five-vector from feasible (tau, delta, M), tau >= 0.
// Throws std::domain_error on infeasible input.
UniformState reconstruct_xi(double tau, double delta, double M);

// Selects among the closed-form ground-state families. family 0 is always the
// suggested default. Where a family has free parameters (gamma, theta, sign
// branch) they are taken from here.
struct GroundVariant {
    int family = 0;
    double gamma = 0.0;              // nematic M=0, family 1
    std::optional<double> theta;     // family-specific angle
    bool plus_branch = false;        // cyclic theta-family sign choice
};

// Closed-form ground state of the uniform system for the phase selected by
// (beta1, beta2). On boundary parameter sets `family` picks among the union of
// the adjacent regimes' families.
UniformState ground_xi(double beta1, double beta2, double M, const GroundVariant& variant = {});

// Ground-state energy density of the uniform system as a function of M.
struct BetaM {
    double value = 0.0;
    Phase regime = Phase::Cyclic;
    bool boundary = false;
};

BetaM beta_of_M(double beta0, double beta1, double beta2, double M);

// Minimum of beta(M) over M in [-2,2] (the one-constraint ground state).
struct BetaMin {
    double value = 0.0;
    double M_star = 0.0;
    bool M_free = false;   // ferromagnetic regime: every M attains the minimum
    Phase regime = Phase::Cyclic;
    bool boundary = false;
};

BetaMin min_beta_over_M(double beta0, double beta1, double beta2);

struct LandscapeRow {
    double tau = 0.0;
    double delta = 0.0;
    double energy = 0.0;
    bool argmin = false;
};

// Samples E(tau,delta) on an elliptic-coordinate lattice over the feasible
// region; the row closest to the analytic minimum is marked.
std::vector<LandscapeRow> landscape_grid(double beta0, double beta1, double beta2,
                                         double M, int resolution);

} // namespace spin2
