#pragma once

// Observables derived from recorded histories.

#include "ctcbeam/core.hpp"

#include <cstddef>
#include <vector>

namespace ctcbeam {

// Row-major (time, space) samples.
struct Map2D {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }

    bool operator==(const Map2D&) const = default;
};

// |psi(y, t_k)|^2 for every stored snapshot.
Map2D density_map(const EvolutionRecord& rec);

// |psi_a|^2 - |psi_b|^2, snapshot by snapshot. Throws InvalidParameter when
// the records do not share a grid and snapshot times.
Map2D difference_map(const EvolutionRecord& a, const EvolutionRecord& b);

// Acoustic metric of a repulsive background, with the light-speed normalisation
// c = c_s(y); only ratios of components carry physical meaning.
struct MetricField {
    std::vector<double> density;
    std::vector<double> velocity;
    std::vector<double> sound_speed;
    std::vector<double> g00;
    std::vector<double> g0y;
    std::vector<double> gyy;
    // True where the density is too small for a meaningful phase gradient;
    // velocity is reported as 0 there.
    std::vector<bool> masked;
};

inline constexpr double kPhaseMaskFraction = 1e-6;

// Throws InvalidParameter for g <= 0.
MetricField acoustic_metric(const Field& f, const PhysicsParams& p);

struct SolitonTrack {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<double> min_densities;
    double speed = 0.0; // least-squares slope of position against time

    std::size_t length() const { return times.size(); }
    double mean_min_density() const;
};

struct SolitonTrackerOptions {
    double depth_threshold = 0.9;     // minima must fall below this fraction of n0
    double link_radius_cells = 4.0;   // max displacement per snapshot, in units of dy
    std::size_t edge_margin_cells = 8;
};

std::vector<SolitonTrack> detect_soliton_tracks(const EvolutionRecord& rec, double background_n0,
                                                const SolitonTrackerOptions& opts = {});

} // namespace ctcbeam
