#pragma once

// Domain types shared by every stage of the simulation: the 1D grid, the
// Schrödinger coefficients, complex fields and recorded histories.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ctcbeam {

using Complex = std::complex<double>;

// Uniform periodic grid in y plus the time discretisation of one pass 0 -> T.
// Sample j sits at y_j = (j - ny/2) * dy, so the domain is [-L/2, L/2).
struct GridSpec {
    std::size_t ny = 1024;
    double dy = 160.0 / 1024.0;
    std::size_t nt = 1;
    double dt = 1e-3;
    std::size_t snapshot_stride = 1;

    // Throws InvalidParameter on a broken invariant.
    void check() const;

    double length() const { return static_cast<double>(ny) * dy; }
    double y_min() const { return -0.5 * length(); }
    double y_max() const { return 0.5 * length(); }
    double y(std::size_t j) const {
        return (static_cast<double>(j) - static_cast<double>(ny / 2)) * dy;
    }
    bool contains(double y) const { return y >= y_min() && y < y_max(); }
    double total_time() const { return static_cast<double>(nt) * dt; }
    std::size_t snapshot_count() const { return nt / snapshot_stride + 1; }

    // Angular wavenumber of FFT bin j in standard FFT ordering.
    double wavenumber(std::size_t j) const;

    bool operator==(const GridSpec&) const = default;
};

// Coefficients of i hbar dpsi/dt = -hbar^2/(2m) psi'' + (U + g|psi|^2) psi.
struct PhysicsParams {
    double hbar = 1.0;
    double mass = 1.0;
    double g = 0.0;
    std::vector<double> potential; // U(y_j), one sample per grid point

    void check(const GridSpec& grid) const;
    bool is_linear() const { return g == 0.0; }
};

// Paraxial envelope coefficients: i dE/dz = -(1/2k0) E'' - (k0 chi/2) E.
struct ParaxialParams {
    double k0 = 1.0;
    std::vector<double> chi;
};

// The field at one time slice.
class Field {
  public:
    Field() = default;
    explicit Field(const GridSpec& grid);
    Field(const GridSpec& grid, std::vector<Complex> values);

    const GridSpec& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    Complex& operator[](std::size_t j) { return values_[j]; }
    const Complex& operator[](std::size_t j) const { return values_[j]; }

    std::span<Complex> values() { return values_; }
    std::span<const Complex> values() const { return values_; }

    bool all_finite() const;

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(Complex scale);

    bool operator==(const Field&) const = default;

  private:
    GridSpec grid_;
    std::vector<Complex> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Complex scale, Field f);

// Snapshots psi(y, t_k) for t_k = k * dt * snapshot_stride, k = 0..nt/stride.
struct EvolutionRecord {
    GridSpec grid;
    PhysicsParams params;
    double T = 0.0;
    std::vector<Field> snapshots;

    const Field& initial() const { return snapshots.front(); }
    const Field& final() const { return snapshots.back(); }
    double time_of(std::size_t k) const {
        return static_cast<double>(k * grid.snapshot_stride) * (T / static_cast<double>(grid.nt));
    }
};

// With hbar = 1: mass = k0 and U = -k0 chi / 2. The nonlinearity is left at 0.
PhysicsParams map_paraxial_to_schrodinger(const ParaxialParams& p);

// amplitude * exp(-(y-y0)^2 / (2 sigma^2)) * exp(i ky y); sigma is the amplitude width.
Field make_gaussian_packet(const GridSpec& grid, double y0, double sigma, double ky,
                           Complex amplitude);

// sqrt(n0) * sqrt(1 - depth * exp(-(y-y0)^2 / (2 width^2))), real and non-negative.
Field make_background_with_dip(const GridSpec& grid, double n0, double depth, double width,
                               double y0);

// amplitude * exp(i ky y) on every sample.
Field make_plane_wave(const GridSpec& grid, double ky, Complex amplitude);

// Rectangle rule: sum_j |psi_j|^2 dy.
double integrated_density(const Field& f);

// sqrt(integrated_density(f)), the physical L2 norm.
double l2_norm(const Field& f);

// Plain Euclidean norm of the sample vector.
double euclidean_norm(std::span<const Complex> v);

} // namespace ctcbeam
