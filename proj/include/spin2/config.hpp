#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include "spin2/params.hpp"
#include "spin2/sma.hpp"
#include "spin2/stepper.hpp"

namespace spin2 {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ModelParams model;
    Grid grid;
    StepperConfig stepper;
    InitialDataSpec initial;
    std::string output_dir = "out";
    bool emit_fields = true;
    bool emit_diagnostics = true;
    unsigned long long seed = 0;
    double perturb = 0.0;   // relative amplitude of the seeded initial-data noise
};

struct SweepConfig {
    RunConfig base;
    std::string parameter;        // "M", "beta1" or "beta2"
    std::vector<double> values;
};

// Parses the single structured config file; unknown keys are rejected.
// Defaults: beta0=100, dt=0.005, eps=1e-7, domain [-10,10]^d with
// h=1/64 (d=1) or h=1/16 (d=2).
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

SweepConfig load_sweep_config(const std::string& path);
SweepConfig parse_sweep_config(const std::string& json_text);

} // namespace spin2
