#include "ctcbeam/diagnostics.hpp"

#include "ctcbeam/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace ctcbeam {

Map2D density_map(const EvolutionRecord& rec) {
    Map2D map;
    map.rows = rec.snapshots.size();
    map.cols = rec.grid.ny;
    map.data.reserve(map.rows * map.cols);
    for (const Field& f : rec.snapshots) {
        for (const Complex& v : f.values()) {
            map.data.push_back(std::norm(v));
        }
    }
    return map;
}

Map2D difference_map(const EvolutionRecord& a, const EvolutionRecord& b) {
    if (!(a.grid == b.grid) || a.snapshots.size() != b.snapshots.size() || a.T != b.T) {
        throw_invalid("difference_map: records differ in grid or snapshot times");
    }
    Map2D map = density_map(a);
    const Map2D other = density_map(b);
    for (std::size_t i = 0; i < map.data.size(); ++i) {
        map.data[i] -= other.data[i];
    }
    return map;
}

MetricField acoustic_metric(const Field& f, const PhysicsParams& p) {
    if (!(p.g > 0.0)) {
        throw_invalid("acoustic metric requires a repulsive medium (g > 0)");
    }
    const GridSpec& grid = f.grid();
    const std::size_t n = grid.ny;
    MetricField m;
    m.density.resize(n);
    m.velocity.assign(n, 0.0);
    m.sound_speed.resize(n);
    m.g00.resize(n);
    m.g0y.resize(n);
    m.gyy.resize(n);
    m.masked.assign(n, false);

    double max_n = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        m.density[j] = std::norm(f[j]);
        max_n = std::max(max_n, m.density[j]);
    }
    const double floor = kPhaseMaskFraction * max_n;

    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jm = (j + n - 1) % n;
        const std::size_t jp = (j + 1) % n;
        if (m.density[j] < floor || m.density[jm] < floor || m.density[jp] < floor ||
            max_n == 0.0) {
            m.masked[j] = true;
        } else {
            // Phase difference across two cells, unwrapped by taking arg of the product.
            const double dphase = std::arg(f[jp] * std::conj(f[jm]));
            m.velocity[j] = p.hbar / p.mass * dphase / (2.0 * grid.dy);
        }
        const double nj = m.density[j];
        const double cs = std::sqrt(p.g * nj / p.mass);
        m.sound_speed[j] = cs;
        // m n / c with c = c_s, written to stay finite at n = 0.
        const double prefactor = std::sqrt(p.mass * p.mass * p.mass * nj / p.g);
        const double v = m.velocity[j];
        m.g00[j] = -prefactor * (cs * cs - v * v);
        m.g0y[j] = -prefactor * v;
        m.gyy[j] = prefactor;
    }
    return m;
}

double SolitonTrack::mean_min_density() const {
    if (min_densities.empty()) {
        return 0.0;
    }
    return std::accumulate(min_densities.begin(), min_densities.end(), 0.0) /
           static_cast<double>(min_densities.size());
}

namespace {

struct Minimum {
    double position;
    double density;
};

std::vector<Minimum> find_minima(const Field& f, double threshold, std::size_t margin) {
    const GridSpec& grid = f.grid();
    std::vector<Minimum> out;
    if (grid.ny < 2 * margin + 3) {
        return out;
    }
    const std::size_t lo = std::max<std::size_t>(margin, 1);
    const std::size_t hi = grid.ny - std::max<std::size_t>(margin, 1);
    for (std::size_t j = lo; j < hi; ++j) {
        const double dm = std::norm(f[j - 1]);
        const double d0 = std::norm(f[j]);
        const double dp = std::norm(f[j + 1]);
        if (!(d0 < threshold && d0 < dm && d0 <= dp)) {
            continue;
        }
        // Parabolic refinement through the three samples.
        const double curvature = dm - 2.0 * d0 + dp;
        double offset = 0.0;
        double value = d0;
        if (curvature > 0.0) {
            offset = 0.5 * (dm - dp) / curvature;
            value = d0 - 0.25 * (dm - dp) * offset;
        }
        out.push_back({grid.y(j) + offset * grid.dy, std::max(value, 0.0)});
    }
    return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) {
        return 0.0;
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

} // namespace

std::vector<SolitonTrack> detect_soliton_tracks(const EvolutionRecord& rec, double background_n0,
                                                const SolitonTrackerOptions& opts) {
    std::vector<SolitonTrack> tracks;
    std::vector<std::size_t> active; // indices into tracks seen in the previous snapshot
    const double threshold = opts.depth_threshold * background_n0;
    const double radius = opts.link_radius_cells * rec.grid.dy;

    for (std::size_t k = 0; k < rec.snapshots.size(); ++k) {
        const double t = rec.time_of(k);
        const auto minima = find_minima(rec.snapshots[k], threshold, opts.edge_margin_cells);

        std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
        for (std::size_t a = 0; a < active.size(); ++a) {
            const double last = tracks[active[a]].positions.back();
            for (std::size_t m = 0; m < minima.size(); ++m) {
                const double d = std::abs(minima[m].position - last);
                if (d <= radius) {
                    pairs.emplace_back(d, a, m);
                }
            }
        }
        std::sort(pairs.begin(), pairs.end());

        std::vector<bool> track_used(active.size(), false);
        std::vector<bool> min_used(minima.size(), false);
        std::vector<std::size_t> next_active;
        for (const auto& [d, a, m] : pairs) {
            if (track_used[a] || min_used[m]) {
                continue;
            }
            track_used[a] = true;
            min_used[m] = true;
            SolitonTrack& tr = tracks[active[a]];
            tr.times.push_back(t);
            tr.positions.push_back(minima[m].position);
            tr.min_densities.push_back(minima[m].density);
            next_active.push_back(active[a]);
        }
        for (std::size_t m = 0; m < minima.size(); ++m) {
            if (min_used[m]) {
                continue;
            }
            SolitonTrack tr;
            tr.times.push_back(t);
            tr.positions.push_back(minima[m].position);
            tr.min_densities.push_back(minima[m].density);
            tracks.push_back(std::move(tr));
            next_active.push_back(tracks.size() - 1);
        }
        active = std::move(next_active);
    }

    for (SolitonTrack& tr : tracks) {
        tr.speed = least_squares_slope(tr.times, tr.positions);
    }
    return tracks;
}

} // namespace ctcbeam
