#include "ctcbeam/fixed_point.hpp"

#include "ctcbeam/error.hpp"
#include "ctcbeam/solver.hpp"

#include <cmath>
#include <optional>

namespace ctcbeam {

namespace {

std::optional<Field> background_at_T(const Scenario& s) {
    if (s.ctc.mode != InjectionMode::MeanSubtracted) {
        return std::nullopt;
    }
    if (!s.background_reference) {
        throw Error(ErrorKind::Configuration,
                    "scenario '" + s.name + "' uses mean-subtracted injection without a "
                    "background reference");
    }
    return evolve(*s.background_reference, s.params, s.grid, s.T).final();
}

double residual_scale(const Field& base) {
    const double n = euclidean_norm(base.values());
    return n > 0.0 ? n : 1.0;
}

Field windowed(const Field& f, double centre, double w) {
    Field out = f;
    const auto weights = window_weights(f.grid(), centre, w);
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] *= weights[j];
    }
    return out;
}

} // namespace

FixedPointResult solve_fixed_point(const Scenario& scenario, double tol, std::size_t max_iter) {
    if (!(tol > 0.0)) {
        throw_invalid("tolerance must be positive");
    }
    if (max_iter < 1) {
        throw_invalid("max_iter must be >= 1");
    }
    scenario.ctc.check(scenario.grid);

    const Field& base = scenario.base_initial;
    const auto background = background_at_T(scenario);
    const Field* bg = background ? &*background : nullptr;
    const double scale = residual_scale(base);

    FixedPointResult out;
    out.report.tolerance = tol;
    out.report.status = ConvergenceStatus::MaxIterations;

    Field current = base;
    for (std::size_t n = 0; n < max_iter; ++n) {
        EvolutionRecord rec = evolve(current, scenario.params, scenario.grid, scenario.T);
        const WindowSignal s = extract_window(rec, scenario.ctc, bg);
        Field next = inject(base, s, scenario.ctc);

        Field diff = next - current;
        const double r = euclidean_norm(diff.values()) / scale;
        out.report.residuals.push_back(r);
        out.report.window_norms.push_back(s.norm());
        out.report.total_densities.push_back(integrated_density(current));
        out.report.iterations = n + 1;

        if (n == 0) {
            out.free_record = rec;
        }
        out.record = std::move(rec);

        if (!std::isfinite(r) || r > kDivergenceThreshold) {
            out.report.status = ConvergenceStatus::Diverged;
            break;
        }
        if (r < tol) {
            out.report.status = ConvergenceStatus::Converged;
            break;
        }
        current = std::move(next);
    }
    return out;
}

Field apply_feedback_map(const Scenario& scenario, const Field& initial) {
    const auto background = background_at_T(scenario);
    const EvolutionRecord rec = evolve(initial, scenario.params, scenario.grid, scenario.T);
    const WindowSignal s = extract_window(rec, scenario.ctc, background ? &*background : nullptr);
    return inject(scenario.base_initial, s, scenario.ctc);
}

double loop_gain_estimate(const Scenario& scenario, double probe_scale) {
    if (!(probe_scale > 0.0) || !std::isfinite(probe_scale)) {
        throw_invalid("probe_scale must be positive");
    }
    const GridSpec& grid = scenario.grid;
    const CTCConfig& c = scenario.ctc;
    c.check(grid);

    Field probe(grid);
    const auto weights = window_weights(grid, c.y_in, c.w);
    for (std::size_t j = 0; j < grid.ny; ++j) {
        probe[j] = weights[j];
    }
    const double base_norm = l2_norm(scenario.base_initial);
    const double target = probe_scale * (base_norm > 0.0 ? base_norm : 1.0);
    probe *= target / l2_norm(probe);

    Field delta_T(grid);
    if (scenario.params.is_linear()) {
        // The map is linear, so the perturbation can be propagated on its own.
        delta_T = evolve(probe, scenario.params, grid, scenario.T).final();
    } else {
        const Field reference = evolve(scenario.base_initial, scenario.params, grid, scenario.T).final();
        const Field perturbed =
            evolve(scenario.base_initial + probe, scenario.params, grid, scenario.T).final();
        delta_T = perturbed - reference;
    }

    const double out_norm = l2_norm(windowed(delta_T, c.y_out, c.w));
    const double in_norm = l2_norm(windowed(probe, c.y_in, c.w));
    return out_norm / in_norm;
}

} // namespace ctcbeam
