#include "ctcbeam/ctc.hpp"

#include "ctcbeam/error.hpp"
#include "ctcbeam/solver.hpp"

#include <cmath>
#include <string>

namespace ctcbeam {

std::string_view to_string(InjectionMode mode) {
    switch (mode) {
    case InjectionMode::TotalField:
        return "total";
    case InjectionMode::MeanSubtracted:
        return "mean-subtracted";
    }
    return "total";
}

InjectionMode injection_mode_from_string(std::string_view text) {
    if (text == "total" || text == "total-field") {
        return InjectionMode::TotalField;
    }
    if (text == "mean-subtracted") {
        return InjectionMode::MeanSubtracted;
    }
    throw Error(ErrorKind::Configuration,
                "unknown injection mode '" + std::string(text) +
                    "' (expected total or mean-subtracted)");
}

std::string_view to_string(ConvergenceStatus status) {
    switch (status) {
    case ConvergenceStatus::Converged:
        return "converged";
    case ConvergenceStatus::Diverged:
        return "diverged";
    case ConvergenceStatus::MaxIterations:
        return "max-iterations";
    }
    return "max-iterations";
}

std::string_view to_string(SignalOutcome outcome) {
    switch (outcome) {
    case SignalOutcome::CompleteSuppression:
        return "complete-suppression";
    case SignalOutcome::PartialSuppression:
        return "partial-suppression";
    case SignalOutcome::LimitedAmplification:
        return "limited-amplification";
    case SignalOutcome::UnlimitedAmplification:
        return "unlimited-amplification";
    }
    return "unlimited-amplification";
}

Complex CTCConfig::alpha() const { return std::polar(alpha_mod, alpha_phase); }

void CTCConfig::check(const GridSpec& grid) const {
    if (!(w > 0.0) || !std::isfinite(w)) {
        throw_invalid("ctc.w must be positive");
    }
    if (!(alpha_mod >= 0.0) || !std::isfinite(alpha_mod)) {
        throw_invalid("ctc.alpha_mod must be finite and >= 0");
    }
    if (!std::isfinite(alpha_phase)) {
        throw_invalid("ctc.alpha_phase must be finite");
    }
    if (!grid.contains(y_out)) {
        throw_invalid("ctc.y_out lies outside the domain");
    }
    if (!grid.contains(y_in)) {
        throw_invalid("ctc.y_in lies outside the domain");
    }
}

std::vector<double> window_weights(const GridSpec& grid, double centre, double w) {
    std::vector<double> out(grid.ny);
    for (std::size_t j = 0; j < grid.ny; ++j) {
        const double d = grid.y(j) - centre;
        out[j] = std::exp(-d * d / (2.0 * w * w));
    }
    return out;
}

WindowSignal extract_window(const EvolutionRecord& rec, const CTCConfig& c,
                            const Field* background_at_T) {
    if (rec.snapshots.empty()) {
        throw_invalid("extract_window: empty evolution record");
    }
    Field psi = rec.final();
    if (c.mode == InjectionMode::MeanSubtracted) {
        if (background_at_T == nullptr) {
            throw Error(ErrorKind::Configuration,
                        "mean-subtracted injection needs a background reference");
        }
        psi -= *background_at_T;
    }
    const auto weights = window_weights(rec.grid, c.y_out, c.w);
    for (std::size_t j = 0; j < psi.size(); ++j) {
        psi[j] *= weights[j];
    }
    return WindowSignal{std::move(psi)};
}

Field inject(const Field& base, const WindowSignal& s, const CTCConfig& c) {
    if (c.alpha_mod == 0.0) {
        return base;
    }
    Field moved = translate(s.values, c.y_in - c.y_out);
    moved *= c.alpha();
    return base + moved;
}

SignalOutcome classify_signal(const ConvergenceReport& report, double zero_threshold) {
    if (report.status == ConvergenceStatus::Diverged || report.window_norms.empty()) {
        return SignalOutcome::UnlimitedAmplification;
    }
    const double first = report.window_norms.front();
    const double last = report.window_norms.back();
    if (last <= zero_threshold * first) {
        return SignalOutcome::CompleteSuppression;
    }
    return last < first ? SignalOutcome::PartialSuppression : SignalOutcome::LimitedAmplification;
}

} // namespace ctcbeam
