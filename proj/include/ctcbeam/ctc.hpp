#pragma once

// The feedback loop: a Gaussian window picks the signal out of psi(y, T) and
// adds it, scaled by the complex coupling alpha, to the initial field.

#include "ctcbeam/core.hpp"

#include <string_view>
#include <vector>

namespace ctcbeam {

enum class InjectionMode {
    TotalField,     // psi(y, T) is sent back as is
    MeanSubtracted, // only the deviation psi - psi_bar from a background run is sent
};

std::string_view to_string(InjectionMode mode);
InjectionMode injection_mode_from_string(std::string_view text);

struct CTCConfig {
    double y_out = 0.0; // extraction window centre at t = T
    double y_in = 0.0;  // injection window centre at t = 0
    double w = 1.0;     // Gaussian window width
    double alpha_mod = 1.0;
    double alpha_phase = 0.0;
    InjectionMode mode = InjectionMode::TotalField;

    Complex alpha() const;
    // Throws InvalidParameter unless w > 0, |alpha| >= 0 and both windows
    // lie inside the domain.
    void check(const GridSpec& grid) const;

    bool operator==(const CTCConfig&) const = default;
};

// exp(-(y - centre)^2 / (2 w^2)) sampled on the grid.
std::vector<double> window_weights(const GridSpec& grid, double centre, double w);

// The time-traveller signal: psi(y, T) already multiplied by the window.
struct WindowSignal {
    Field values;

    double norm() const { return l2_norm(values); }
};

enum class ConvergenceStatus { Converged, Diverged, MaxIterations };

std::string_view to_string(ConvergenceStatus status);

// One entry per iteration n: residual r_n, window norm ||s_n|| and the
// integrated density of the initial field psi_n(., 0) that produced s_n.
struct ConvergenceReport {
    std::vector<double> residuals;
    std::vector<double> window_norms;
    std::vector<double> total_densities;
    ConvergenceStatus status = ConvergenceStatus::MaxIterations;
    std::size_t iterations = 0;
    double tolerance = 0.0;
};

// s(y) = W(y) psi(y, T); in mean-subtracted mode psi is replaced by
// psi - background_at_T first. Throws Configuration when the background is
// required but missing.
WindowSignal extract_window(const EvolutionRecord& rec, const CTCConfig& c,
                            const Field* background_at_T = nullptr);

// psi0(y) + alpha * s(y - (y_in - y_out)): the window centre lands on y_in.
// `base` is always the iteration-zero initial condition.
Field inject(const Field& base, const WindowSignal& s, const CTCConfig& c);

// Outcome of the signal taxonomy for a converged run.
enum class SignalOutcome {
    CompleteSuppression,
    PartialSuppression,
    LimitedAmplification,
    UnlimitedAmplification,
};

std::string_view to_string(SignalOutcome outcome);

// Classifies the limit c against the iteration-zero signal. Diverged runs are
// unlimited amplification; `zero_threshold` is relative to ||s_0||.
SignalOutcome classify_signal(const ConvergenceReport& report, double zero_threshold = 1e-12);

} // namespace ctcbeam
