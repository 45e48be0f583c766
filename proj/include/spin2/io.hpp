#pragma once
#include <string>
#include <vector>

#include "spin2/field.hpp"
#include "spin2/stepper.hpp"
#include "spin2/uniform.hpp"

namespace spin2 {

// Text snapshot: a grid metadata line, a header row, then one row per node
// with coordinates and Re/Im of phi_2..phi_-2 at full double precision.
void write_field_snapshot(const std::string& path, const SpinorField& f);
SpinorField read_field_snapshot(const std::string& path);

// One line per iteration: iter, energy, n_total, m_total, residual, lambda.
void write_diagnostics(const std::string& path, const RunDiagnostics& d);

// Columns tau, delta, energy, argmin flag.
void write_landscape(const std::string& path, const std::vector<LandscapeRow>& rows);

} // namespace spin2
