#include "ctcbeam/error.hpp"
#include "ctcbeam/solver.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ctcbeam;

namespace {

GridSpec fig2_like_grid() {
    GridSpec g;
    g.ny = 1024;
    g.dy = 160.0 / 1024.0;
    g.nt = 2000;
    g.dt = 0.0025;
    g.snapshot_stride = 20;
    return g;
}

PhysicsParams free_params(const GridSpec& g, double gnl = 0.0) {
    PhysicsParams p;
    p.g = gnl;
    p.potential.assign(g.ny, 0.0);
    return p;
}

PhysicsParams harmonic_params(const GridSpec& g, double omega) {
    PhysicsParams p = free_params(g);
    for (std::size_t j = 0; j < g.ny; ++j) {
        p.potential[j] = 0.5 * omega * omega * g.y(j) * g.y(j);
    }
    return p;
}

double l2_distance(const Field& a, const Field& b) { return l2_norm(a - b); }

// Distance between sample vectors of fields whose time steps differ.
double sample_distance(const Field& a, const Field& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        acc += std::norm(a[j] - b[j]);
    }
    return std::sqrt(acc);
}

std::vector<double> density_of(const Field& f) {
    std::vector<double> n(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        n[j] = std::norm(f[j]);
    }
    return n;
}

} // namespace

TEST_CASE("barrier potential") {
    GridSpec g;
    const double height = 25.0;
    const auto u = build_barrier_potential(g, 16.0, height, 2.0);
    CHECK(u[g.ny / 2] < 1e-6 * height);
    CHECK(u[0] >= height / 2);
    CHECK(u[g.ny - 1] >= height / 2);
    // Symmetric about the centre.
    CHECK(u[10] == doctest::Approx(u[g.ny - 10]).epsilon(1e-12));
    for (double v : build_barrier_potential(g, 16.0, 0.0, 2.0)) {
        CHECK(v == 0.0);
    }
    CHECK_THROWS_AS(build_barrier_potential(g, 16.0, -1.0, 2.0), Error);
    CHECK_THROWS_AS(build_barrier_potential(g, 16.0, 1.0, 0.0), Error);
}

TEST_CASE("plane wave is a kinetic eigenstate") {
    GridSpec g = fig2_like_grid();
    const double k = g.wavenumber(7);
    const auto p = free_params(g);
    const Field f = make_plane_wave(g, k, 1.0);
    const Field out = step(f, p, g.dt);
    const Complex phase = oracle::plane_wave_pass_factor(k, 0.0, g.dt);
    for (std::size_t j = 0; j < g.ny; ++j) {
        CHECK(std::abs(std::abs(out[j]) - 1.0) < 1e-12);
        CHECK(std::abs(out[j] - phase * f[j]) < 1e-12);
    }
}

TEST_CASE("uniform nonlinear field is stationary up to its phase") {
    GridSpec g = fig2_like_grid();
    const double n0 = 1.3, gnl = 0.8;
    const auto p = free_params(g, gnl);
    const Field f = make_plane_wave(g, 0.0, std::sqrt(n0));
    const Field out = step(f, p, g.dt);
    const Complex phase = oracle::uniform_nonlinear_phase(gnl, n0, g.dt);
    for (std::size_t j = 0; j < g.ny; ++j) {
        CHECK(std::abs(std::abs(out[j]) - std::sqrt(n0)) < 1e-12);
        CHECK(std::abs(out[j] - phase * f[j]) < 1e-12);
    }
}

TEST_CASE("eigenstate phases over 100 steps") {
    GridSpec g = fig2_like_grid();
    g.nt = 100;
    g.snapshot_stride = 100;
    const double T = g.total_time();

    const double k = g.wavenumber(12);
    const Field pw = make_plane_wave(g, k, 1.0);
    const auto rec = evolve(pw, free_params(g), g, T);
    const Complex expect = oracle::plane_wave_pass_factor(k, 0.0, T);
    double err = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) {
        err = std::max(err, std::abs(rec.final()[j] - expect * pw[j]));
    }
    CHECK(err < 1e-10);

    const double n0 = 0.7, gnl = 1.9;
    const Field u = make_plane_wave(g, 0.0, std::sqrt(n0));
    const auto rec2 = evolve(u, free_params(g, gnl), g, T);
    const Complex expect2 = oracle::uniform_nonlinear_phase(gnl, n0, T);
    err = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) {
        err = std::max(err, std::abs(rec2.final()[j] - expect2 * u[j]));
    }
    CHECK(err < 1e-10);
}

TEST_CASE("zero field stays zero") {
    GridSpec g = fig2_like_grid();
    const Field z(g);
    const Field out = step(z, free_params(g, 1.0), g.dt);
    for (std::size_t j = 0; j < g.ny; ++j) {
        CHECK(out[j] == Complex(0.0, 0.0));
    }
}

TEST_CASE("step rejects non-positive dt") {
    GridSpec g = fig2_like_grid();
    const Field f = make_plane_wave(g, 0.0, 1.0);
    CHECK_THROWS_AS(step(f, free_params(g), 0.0), Error);
    CHECK_THROWS_AS(step(f, free_params(g), -0.1), Error);
}

TEST_CASE("free Gaussian dispersion follows the analytic width") {
    const GridSpec g = fig2_like_grid();
    const double sigma = 3.0;
    const Field f0 = make_gaussian_packet(g, 0.0, sigma, 0.0, 1.0);
    const auto rec = evolve(f0, free_params(g), g);
    std::vector<double> y(g.ny);
    for (std::size_t j = 0; j < g.ny; ++j) {
        y[j] = g.y(j);
    }
    double worst = 0.0;
    for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
        const double measured = oracle::density_rms_width(y, density_of(rec.snapshots[k]));
        const double expect = oracle::free_gaussian_density_width(sigma, rec.time_of(k));
        worst = std::max(worst, std::abs(measured - expect) / expect);
    }
    CHECK(worst < 0.01);
}

TEST_CASE("free propagation matches the direct DFT propagator") {
    GridSpec g;
    g.ny = 128;
    g.dy = 0.25;
    g.nt = 40;
    g.dt = 0.01;
    g.snapshot_stride = 40;
    const Field f0 = make_gaussian_packet(g, 1.0, 1.5, 2.0, Complex(0.5, 0.5));
    const auto rec = evolve(f0, free_params(g), g);
    const auto ref = oracle::dft_free_propagate({f0.values().begin(), f0.values().end()}, g.dy,
                                                g.total_time());
    double err = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) {
        err = std::max(err, std::abs(rec.final()[j] - ref[j]));
    }
    CHECK(err < 1e-11);
}

TEST_CASE("zero duration stores the initial field only") {
    const GridSpec g = fig2_like_grid();
    const Field f0 = make_gaussian_packet(g, 0.0, 3.0, 0.0, 1.0);
    const auto rec = evolve(f0, free_params(g), g, 0.0);
    REQUIRE(rec.snapshots.size() == 1);
    CHECK(rec.initial() == f0);
    CHECK_THROWS_AS(evolve(f0, free_params(g), g, 1.234), Error);
}

TEST_CASE("forward then backward evolution is the identity") {
    GridSpec g = fig2_like_grid();
    g.nt = 1000;
    g.snapshot_stride = 1000;
    const Field f0 = make_gaussian_packet(g, -5.0, 2.0, 1.5, Complex(0.3, 0.9));
    for (const auto& p : {free_params(g), harmonic_params(g, 0.15)}) {
        const Field fT = evolve(f0, p, g, g.total_time()).final();
        const Field back = evolve(fT, p, g, -g.total_time()).final();
        CHECK(l2_distance(back, f0) < 1e-10);
    }
}

TEST_CASE("norm conservation") {
    GridSpec g = fig2_like_grid();
    const Field f0 = make_gaussian_packet(g, 0.0, 3.0, 2.0, 1.0);
    auto p = harmonic_params(g, 0.1);
    p.g = 0.5;
    const double n0 = integrated_density(f0);
    const auto rec = evolve(f0, p, g);
    for (const auto& s : rec.snapshots) {
        CHECK(std::abs(integrated_density(s) - n0) / n0 < 1e-10);
    }
}

TEST_CASE("linearity for g = 0") {
    GridSpec g = fig2_like_grid();
    g.nt = 400;
    g.snapshot_stride = 400;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto p = harmonic_params(g, 0.05);
    for (int trial = 0; trial < 5; ++trial) {
        const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
        const Field f1 = make_gaussian_packet(g, 20 * u(rng), 2 + u(rng), 3 * u(rng), 1.0);
        const Field f2 = make_gaussian_packet(g, 20 * u(rng), 3 + u(rng), 3 * u(rng), Complex(0, 1));
        const Field lhs = evolve(a * f1 + b * f2, p, g).final();
        const Field rhs = a * evolve(f1, p, g).final() + b * evolve(f2, p, g).final();
        CHECK(l2_distance(lhs, rhs) < 1e-10);
    }
}

TEST_CASE("second-order convergence in dt") {
    // A free packet is propagated exactly by the kinetic step; a weak
    // harmonic potential makes the splitting error visible.
    GridSpec g = fig2_like_grid();
    g.snapshot_stride = 1;
    const double T = 5.0;
    const Field f0 = make_gaussian_packet(g, 0.0, 3.0, 0.0, 1.0);
    const auto p = harmonic_params(g, 0.3);
    auto run = [&](std::size_t nt) {
        GridSpec gg = g;
        gg.nt = nt;
        gg.dt = T / static_cast<double>(nt);
        gg.snapshot_stride = nt;
        return evolve(Field(gg, {f0.values().begin(), f0.values().end()}), p, gg).final();
    };
    const Field a = run(250), b = run(500), c = run(1000);
    const double e1 = sample_distance(a, b);
    const double e2 = sample_distance(b, c);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 1.9);
}

TEST_CASE("blowup is reported with the step index") {
    GridSpec g = fig2_like_grid();
    g.nt = 10;
    g.snapshot_stride = 10;
    Field f = make_gaussian_packet(g, 0.0, 3.0, 0.0, 1.0);
    f[5] = Complex(std::nan(""), 0.0);
    try {
        evolve(f, free_params(g, -1.0), g);
        FAIL("expected NumericBlowup");
    } catch (const NumericBlowup& e) {
        CHECK(e.step_index() == 0);
        CHECK(e.kind() == ErrorKind::NumericBlowup);
    }
    Field huge = make_plane_wave(g, 0.0, 1e13);
    CHECK_THROWS_AS(evolve(huge, free_params(g), g), NumericBlowup);
}

TEST_CASE("translate") {
    GridSpec g;
    const Field f = make_gaussian_packet(g, 0.0, 2.0, 1.0, 1.0);
    SUBCASE("whole cells roll exactly") {
        const Field t = translate(f, 10 * g.dy);
        for (std::size_t j = 10; j < g.ny; ++j) {
            CHECK(t[j] == f[j - 10]);
        }
    }
    SUBCASE("fractional shift matches the shifted packet") {
        const double shift = 3.37;
        const Field t = translate(f, shift);
        const Field expect = make_gaussian_packet(g, shift, 2.0, 1.0, std::polar(1.0, -shift));
        CHECK(l2_distance(t, expect) < 1e-10);
    }
    SUBCASE("there and back") {
        CHECK(l2_distance(translate(translate(f, -7.21), 7.21), f) < 1e-12);
    }
}
