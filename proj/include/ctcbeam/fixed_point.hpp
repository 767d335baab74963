#pragma once

#include "ctcbeam/ctc.hpp"
#include "ctcbeam/scenario.hpp"

namespace ctcbeam {

inline constexpr double kDefaultTolerance = 1e-12;
inline constexpr std::size_t kDefaultMaxIterations = 200;
inline constexpr double kDivergenceThreshold = 1e6;

struct FixedPointResult {
    EvolutionRecord record;      // history evolved from the last initial field
    EvolutionRecord free_record; // iteration zero, i.e. the run without feedback
    ConvergenceReport report;
};

// Iterates evolve -> extract -> inject from the scenario's base initial field.
// r_n = ||psi_{n+1}(.,0) - psi_n(.,0)|| / ||psi_0(.,0)||. Divergence is a
// status, not an error; NumericBlowup from the propagator still throws.
FixedPointResult solve_fixed_point(const Scenario& scenario, double tol = kDefaultTolerance,
                                   std::size_t max_iter = kDefaultMaxIterations);

// One application of the feedback map to an arbitrary initial field.
Field apply_feedback_map(const Scenario& scenario, const Field& initial);

// Windowed one-pass amplification of a small probe injected at y_in and read
// out at y_out. Values below 1/alpha_mod predict a contracting loop.
double loop_gain_estimate(const Scenario& scenario, double probe_scale = 1e-6);

} // namespace ctcbeam
