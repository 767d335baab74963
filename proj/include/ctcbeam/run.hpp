#pragma once

// A complete fixed-point run plus the artefacts written for it.

#include "ctcbeam/fixed_point.hpp"
#include "ctcbeam/scenario.hpp"

#include <filesystem>

namespace ctcbeam {

struct RunOutcome {
    ScenarioSpec spec;
    FixedPointResult result;

    double final_window_norm() const;
    double final_total_density() const;
};

RunOutcome run_scenario(const ScenarioSpec& spec);

// Writes density_ctc.ctcb, density_free.ctcb, difference.ctcb,
// convergence.csv and manifest.cfg into `dir` (created if missing). With
// `csv` the three maps are also written as CSV.
void write_run_outputs(const RunOutcome& outcome, const std::filesystem::path& dir, bool csv);

} // namespace ctcbeam
