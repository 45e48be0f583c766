#pragma once
#include <string>

#include "spin2/config.hpp"
#include "spin2/io.hpp"
#include "spin2/model.hpp"

namespace spin2 {

// One ground-state computation, end to end. The state is kept in the
// normalized orientation (M >= 0); reporting helpers mirror it back when the
// config asked for negative magnetization.
struct RunOutcome {
    SpinorField state;
    RunDiagnostics diag;
    ElFit fit;
    double energy = 0.0;
    Masses report;   // component masses in the user's orientation
    bool dry_run = false;
};

RunOutcome execute_run(const RunConfig& cfg, bool dry_run = false);

// summary.json, fields.tsv, diagnostics.tsv under cfg.output_dir
void write_run_outputs(const RunConfig& cfg, const RunOutcome& out);

// Deterministic JSON summary (identical config, identical bytes).
std::string summary_json(const RunConfig& cfg, const RunOutcome& out);

} // namespace spin2
