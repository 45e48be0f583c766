#pragma once
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spin2/field.hpp"
#include "spin2/model.hpp"
#include "spin2/params.hpp"
#include "spin2/projection.hpp"

namespace spin2 {

struct StepperConfig {
    double dt = 0.005;
    double eps = 1e-7;                 // stop when ||phi^{n+1}-phi^n||_inf / dt <= eps
    long max_iters = 1'000'000;
    double linear_tol = 1e-12;         // relative residual of the implicit solves
    int linear_max_iters = 10'000;
    int threads = 0;                   // component solves in parallel; 0 = auto
};

struct StepRecord {
    double energy = 0.0;      // energy of the state the step departed from
    double n_total = 0.0;     // post-projection mass
    double m_total = 0.0;     // post-projection magnetization
    double residual = 0.0;    // ||phi^{n+1}-phi^n||_inf / dt
    double lambda = 1.0;      // projection root used by this step
};

struct RunDiagnostics {
    std::vector<double> energy;     // E(phi^0) .. E(phi^n), one longer than the rest
    std::vector<double> n_total;
    std::vector<double> m_total;
    std::vector<double> residual;
    std::vector<double> lambda;
    long iterations = 0;
    bool converged = false;
};

struct TimeStepTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct LinearSolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Second-order centered Laplacian on interior nodes, zero on the boundary.
std::vector<Complex> apply_laplacian(const std::vector<Complex>& v, const Grid& grid);

// Solves (diag - lap/2) u = rhs with zero Dirichlet boundary. diag is sampled
// on all nodes but only interior entries are used; they must be positive.
// 1D uses direct tridiagonal elimination, 2D preconditioned conjugate
// gradients. `guess` warm-starts the 2D iteration.
std::vector<Complex> solve_component_system(const std::vector<double>& diag,
                                            const std::vector<Complex>& rhs, const Grid& grid,
                                            const StepperConfig& cfg,
                                            const std::vector<Complex>* guess = nullptr);

// One gradient-flow step: implicit solve per component with the nonlinear
// coefficients frozen at phi^n, followed by the five-constant projection.
// Requires phi^n to satisfy both constraints.
std::pair<SpinorField, StepRecord> befd_step(const SpinorField& phi, const ModelParams& p,
                                             const StepperConfig& cfg);

// Full flow to the stopping criterion. The initial state is projected first,
// so mildly inconsistent input is repaired. Non-convergence within max_iters
// is reported through the diagnostics flag, not an exception.
std::pair<SpinorField, RunDiagnostics> run_to_ground(const SpinorField& phi0,
                                                     const ModelParams& p,
                                                     const StepperConfig& cfg);

// Reusable stepping engine behind befd_step/run_to_ground. Owns the work
// buffers; one instance per run.
class GroundStateSolver {
  public:
    GroundStateSolver(const ModelParams& p, const Grid& grid, const StepperConfig& cfg);
    ~GroundStateSolver();

    // advances phi in place by one step
    StepRecord step(SpinorField& phi);
    std::pair<SpinorField, RunDiagnostics> run(SpinorField phi0);

    // projection constants applied by the most recent step
    const ProjectionConstants& last_sigma() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace spin2
