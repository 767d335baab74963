#include "ctcbeam/core.hpp"

#include "ctcbeam/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ctcbeam {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (!(a == b)) {
        throw_invalid("field arithmetic on mismatched grids");
    }
}

} // namespace

void GridSpec::check() const {
    if (ny < 8 || !is_power_of_two(ny)) {
        throw_invalid("grid.ny must be a power of two >= 8 (got " + std::to_string(ny) + ")");
    }
    if (!(dy > 0.0) || !std::isfinite(dy)) {
        throw_invalid("grid.dy must be positive");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw_invalid("grid.dt must be positive");
    }
    if (nt < 1) {
        throw_invalid("grid.nt must be >= 1");
    }
    if (snapshot_stride < 1 || nt % snapshot_stride != 0) {
        throw_invalid("grid.snapshot_stride must divide grid.nt");
    }
}

double GridSpec::wavenumber(std::size_t j) const {
    const auto n = static_cast<std::ptrdiff_t>(ny);
    auto m = static_cast<std::ptrdiff_t>(j);
    if (m >= n / 2) {
        m -= n;
    }
    return 2.0 * std::numbers::pi * static_cast<double>(m) / length();
}

void PhysicsParams::check(const GridSpec& grid) const {
    if (hbar != 1.0) {
        throw_invalid("hbar is fixed to 1 in code units");
    }
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw_invalid("physics.mass must be positive");
    }
    if (!std::isfinite(g)) {
        throw_invalid("physics.g must be finite");
    }
    if (potential.size() != grid.ny) {
        throw_invalid("potential has " + std::to_string(potential.size()) +
                      " samples, grid has " + std::to_string(grid.ny));
    }
    for (double u : potential) {
        if (!std::isfinite(u)) {
            throw_invalid("potential must be finite everywhere");
        }
    }
}

Field::Field(const GridSpec& grid) : grid_(grid), values_(grid.ny, Complex{0.0, 0.0}) {}

Field::Field(const GridSpec& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.ny) {
        throw_invalid("field length " + std::to_string(values_.size()) +
                      " does not match grid.ny " + std::to_string(grid_.ny));
    }
}

bool Field::all_finite() const {
    for (const Complex& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            return false;
        }
    }
    return true;
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j) {
        values_[j] += other.values_[j];
    }
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t j = 0; j < values_.size(); ++j) {
        values_[j] -= other.values_[j];
    }
    return *this;
}

Field& Field::operator*=(Complex scale) {
    for (Complex& v : values_) {
        v *= scale;
    }
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Complex scale, Field f) { return f *= scale; }

PhysicsParams map_paraxial_to_schrodinger(const ParaxialParams& p) {
    if (!(p.k0 > 0.0) || !std::isfinite(p.k0)) {
        throw_invalid("paraxial k0 must be positive");
    }
    PhysicsParams out;
    out.hbar = 1.0;
    out.mass = p.k0;
    out.g = 0.0;
    out.potential.resize(p.chi.size());
    for (std::size_t j = 0; j < p.chi.size(); ++j) {
        out.potential[j] = -0.5 * p.k0 * p.chi[j];
    }
    return out;
}

Field make_gaussian_packet(const GridSpec& grid, double y0, double sigma, double ky,
                           Complex amplitude) {
    if (!(sigma > 0.0)) {
        throw_invalid("packet sigma must be positive");
    }
    if (!grid.contains(y0)) {
        throw_invalid("packet centre y0 = " + std::to_string(y0) + " lies outside the domain");
    }
    Field f(grid);
    for (std::size_t j = 0; j < grid.ny; ++j) {
        const double y = grid.y(j);
        const double d = y - y0;
        f[j] = amplitude * std::exp(-d * d / (2.0 * sigma * sigma)) *
               std::polar(1.0, ky * y);
    }
    return f;
}

Field make_background_with_dip(const GridSpec& grid, double n0, double depth, double width,
                               double y0) {
    if (!(depth >= 0.0 && depth <= 1.0)) {
        throw_invalid("dip depth must lie in [0, 1]");
    }
    if (!(width > 0.0)) {
        throw_invalid("dip width must be positive");
    }
    if (!(n0 >= 0.0)) {
        throw_invalid("background density must be non-negative");
    }
    Field f(grid);
    const double amp = std::sqrt(n0);
    for (std::size_t j = 0; j < grid.ny; ++j) {
        const double d = grid.y(j) - y0;
        const double profile = 1.0 - depth * std::exp(-d * d / (2.0 * width * width));
        f[j] = amp * std::sqrt(std::max(profile, 0.0));
    }
    return f;
}

Field make_plane_wave(const GridSpec& grid, double ky, Complex amplitude) {
    Field f(grid);
    for (std::size_t j = 0; j < grid.ny; ++j) {
        f[j] = amplitude * std::polar(1.0, ky * grid.y(j));
    }
    return f;
}

double integrated_density(const Field& f) {
    double sum = 0.0;
    for (const Complex& v : f.values()) {
        sum += std::norm(v);
    }
    return sum * f.grid().dy;
}

double l2_norm(const Field& f) { return std::sqrt(integrated_density(f)); }

double euclidean_norm(std::span<const Complex> v) {
    double sum = 0.0;
    for (const Complex& c : v) {
        sum += std::norm(c);
    }
    return std::sqrt(sum);
}

} // namespace ctcbeam
