#pragma once
#include <array>
#include <stdexcept>

#include "spin2/field.hpp"

namespace spin2 {

// Squared discrete norms of the pre-projection components, plus the target
// magnetization.
struct ProjectionWeights {
    std::array<double, 5> w{};   // order l = 2,1,0,-1,-2
    double M = 0.0;
};

// The five projection constants sigma_l >= 0. They always take the form
// sigma_l = sigma0 * lambda^(l/2), which encodes the two normalization
// equations together with the three multiplicative relations
// sigma2*sigma-2 = sigma0^2, sigma1*sigma-1 = sigma0^2, sigma2*sigma0 = sigma1^2.
struct ProjectionConstants {
    std::array<double, 5> sigma{1.0, 1.0, 1.0, 1.0, 1.0};
    double sigma0 = 1.0;
    double lambda = 1.0;
    int theorem_case = 3;   // 1, 2, or 3
};

struct InfeasibleProjection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ProjectionWeights weights_of(const SpinorField& f, double M);

// Solves the five-constant system: the dedicated single-component cases when
// they trigger exactly, otherwise the unique positive root of
//   g(lambda) = sum_l (l - M) w_l lambda^(l+2).
// Throws InfeasibleProjection when the magnetization is unreachable from the
// given weights, std::invalid_argument on negative weights.
ProjectionConstants solve_sigma(const ProjectionWeights& w);

SpinorField project(const SpinorField& f, const ProjectionConstants& s);
void project_in_place(SpinorField& f, const ProjectionConstants& s);

} // namespace spin2
