#include "ctcbeam/ctc.hpp"
#include "ctcbeam/fixed_point.hpp"
#include "ctcbeam/scenario.hpp"
#include "ctcbeam/solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ctcbeam;

namespace {

// Small linear scenario: free packet, Gaussian window, random coupling.
ScenarioSpec random_linear_spec(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScenarioSpec spec = preset_spec("fig2_diffraction");
    spec.grid.ny = 512;
    spec.grid.dy = 160.0 / 512.0;
    spec.grid.nt = 400;
    spec.grid.dt = 0.005;
    spec.grid.snapshot_stride = 400;
    spec.initial_y0 = -30.0 + 60.0 * u(rng);
    spec.initial_sigma = 2.0 + 2.0 * u(rng);
    spec.initial_ky = -2.0 + 4.0 * u(rng);
    spec.ctc.y_out = spec.initial_y0 + spec.initial_ky * spec.grid.total_time() +
                     (-4.0 + 8.0 * u(rng));
    spec.ctc.y_in = -30.0 + 60.0 * u(rng);
    spec.ctc.w = 1.0 + 3.0 * u(rng);
    spec.ctc.alpha_mod = 0.2 + 0.8 * u(rng);
    spec.ctc.alpha_phase = 2.0 * std::numbers::pi * u(rng);
    return spec;
}

double relative_distance(const Field& a, const Field& b) { return l2_norm(a - b) / l2_norm(b); }

} // namespace

TEST_CASE("the signal never suppresses itself completely") {
    std::mt19937_64 rng(20260101);
    int converged = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const ScenarioSpec spec = random_linear_spec(rng);
        CAPTURE(trial);
        REQUIRE(validate(spec).empty());
        const auto result = solve_fixed_point(build_scenario(spec), 1e-12, 400);
        const auto& rep = result.report;
        REQUIRE(rep.window_norms.front() > 0.0);
        for (double n : rep.window_norms) {
            CHECK(n != 0.0);
        }
        if (rep.status == ConvergenceStatus::Converged) {
            ++converged;
            CHECK(rep.window_norms.back() > 1e-6 * rep.window_norms.front());
            CHECK(classify_signal(rep) != SignalOutcome::CompleteSuppression);
        }
    }
    CHECK(converged > 0);
}

TEST_CASE("fixed point commutes with whole-cell translations") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 3; ++trial) {
        ScenarioSpec spec = random_linear_spec(rng);
        ScenarioSpec moved = spec;
        const double shift = static_cast<double>(8 * (trial + 1)) * spec.grid.dy;
        moved.initial_y0 += shift;
        moved.ctc.y_out += shift;
        moved.ctc.y_in += shift;
        const Scenario a = build_scenario(spec);
        const Scenario b = build_scenario(moved);
        const auto ra = solve_fixed_point(a, 1e-12, 400);
        const auto rb = solve_fixed_point(b, 1e-12, 400);
        CHECK(ra.report.iterations == rb.report.iterations);
        // The packet phase is e^{i ky y}, so moving y0 also rotates the base.
        const Complex phase = std::polar(1.0, spec.initial_ky * shift);
        CHECK(relative_distance(b.base_initial, phase * translate(a.base_initial, shift)) < 1e-12);
        CHECK(relative_distance(rb.record.initial(), phase * translate(ra.record.initial(), shift)) <
              1e-9);
    }
}

TEST_CASE("global phase covariance") {
    std::mt19937_64 rng(11);
    ScenarioSpec spec = preset_spec("fig5_solitons");
    spec.grid.nt = 600;
    spec.grid.snapshot_stride = 600;
    spec.ctc.mode = InjectionMode::TotalField;
    spec.background = BackgroundKind::None;
    spec.ctc.y_in = spec.ctc.y_out;
    spec.ctc.alpha_mod = 0.3;
    const Scenario s = build_scenario(spec);
    const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi *
                                              std::uniform_real_distribution<double>(0, 1)(rng));
    Scenario rotated = s;
    rotated.base_initial = phase * s.base_initial;
    const auto r1 = solve_fixed_point(s, 1e-12, 200);
    const auto r2 = solve_fixed_point(rotated, 1e-12, 200);
    REQUIRE(r1.report.status == ConvergenceStatus::Converged);
    CHECK(r1.report.iterations == r2.report.iterations);
    CHECK(relative_distance(r2.record.final(), phase * r1.record.final()) < 1e-10);
}

TEST_CASE("unperturbed background is a trivial fixed point of mean-subtracted feedback") {
    ScenarioSpec spec = preset_spec("fig5_solitons");
    spec.initial_depth = 0.0;
    spec.grid.nt = 600;
    spec.grid.snapshot_stride = 600;
    const auto result = solve_fixed_point(build_scenario(spec));
    CHECK(result.report.status == ConvergenceStatus::Converged);
    CHECK(result.report.iterations == 1);
    CHECK(result.report.window_norms.front() < 1e-12);
}

TEST_CASE("random nonlinear evolutions conserve the norm and reverse") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        GridSpec g;
        g.ny = 512;
        g.dy = 160.0 / 512.0;
        g.nt = 300;
        g.dt = 0.005;
        g.snapshot_stride = 300;
        PhysicsParams p;
        p.g = 2.0 * u(rng);
        p.potential.assign(g.ny, 0.0);
        const double depth = u(rng);
        for (std::size_t j = 0; j < g.ny; ++j) {
            p.potential[j] = depth * std::cos(2.0 * std::numbers::pi * 3.0 * g.y(j) / g.length());
        }
        const Field f0 = make_gaussian_packet(g, -20.0 + 40.0 * u(rng), 2.0 + 2.0 * u(rng),
                                              -1.0 + 2.0 * u(rng), std::polar(1.0, u(rng)));
        const Field fT = evolve(f0, p, g, g.total_time()).final();
        CHECK(std::abs(integrated_density(fT) / integrated_density(f0) - 1.0) < 1e-12);
        const Field back = evolve(fT, p, g, -g.total_time()).final();
        CHECK(l2_norm(back - f0) / l2_norm(f0) < 1e-10);
    }
}
