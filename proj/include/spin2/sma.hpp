#pragma once
#include <array>
#include <utility>
#include <vector>

#include "spin2/field.hpp"
#include "spin2/params.hpp"
#include "spin2/stepper.hpp"
#include "spin2/uniform.hpp"

namespace spin2 {

enum class Profile { Auto, Gaussian, ThomasFermi, BoxMode };

// reference spatial modes, unit discrete norm, zero boundary:
//   Gaussian    exp(-|x|^2/2)
//   ThomasFermi sqrt(max(0, mu - V)/(2 beta)), mu fixed by grid normalization
//               (requires beta > 0, otherwise falls back to Gaussian)
//   BoxMode     product of half-period sine modes
//   Auto        BoxMode for the box potential, ThomasFermi for large beta,
//               Gaussian otherwise
ScalarField build_profile(Profile profile, double beta_eff, const PotentialSpec& pot,
                          const Grid& grid);

struct ScalarRun {
    std::vector<double> energy;
    long iterations = 0;
    bool converged = false;
};

// Ground state of the one-component problem
//   E(phi) = int 1/2|grad phi|^2 + V|phi|^2 + beta|phi|^4,  ||phi|| = 1,
// by the same backward-forward flow with single-constant normalization.
std::pair<ScalarField, ScalarRun> scalar_ground_state(double beta, const PotentialSpec& pot,
                                                      const Grid& grid, const StepperConfig& cfg);

double scalar_energy(const ScalarField& phi, double beta, const PotentialSpec& pot);

// Phi_l = xi_l * phi pointwise.
SpinorField assemble_sma(const UniformState& xi, const ScalarField& phi);

struct InitialDataSpec {
    enum class Kind { SmaClosedForm, GeneralSigma, Custom };
    Kind kind = Kind::SmaClosedForm;

    GroundVariant variant{};          // SmaClosedForm: family selection
    double sigma = 0.0;               // GeneralSigma: sigma in [0, 1 - M/2]
    Profile profile = Profile::Auto;  // shared spatial mode

    struct CustomComponent {
        Profile profile = Profile::Gaussian;
        double weight = 0.0;
    };
    std::array<CustomComponent, 5> custom{};   // Custom: per-component modes
};

// Builds the initial spinor from the spec and projects it onto the
// constraint set. Throws std::domain_error on out-of-range spec parameters
// and InfeasibleProjection when the weights cannot reach M.
SpinorField build_initial_data(const InitialDataSpec& spec, const ModelParams& p,
                               const Grid& grid);

struct SmaCheck {
    bool valid = false;
    double deviation = 0.0;
};

// Post-hoc single-mode diagnosis: the component ratios phi_l/phi_ref must be
// spatially constant (relative tol) wherever the reference component exceeds
// 1e-6 of its peak. Components below a mass floor are ignored.
SmaCheck sma_validity(const SpinorField& f, double tol = 1e-3);

} // namespace spin2
