#include "ctcbeam/solver.hpp"

#include "ctcbeam/error.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>

namespace ctcbeam {

namespace {

// FFTW's planner is not re-entrant; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Owns an aligned complex buffer plus forward/backward plans over it.
class FftWorkspace {
  public:
    explicit FftWorkspace(std::size_t n) : n_(n) {
        buffer_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (buffer_ == nullptr) {
            throw std::bad_alloc();
        }
        std::lock_guard lock(planner_mutex());
        const int ni = static_cast<int>(n);
        forward_ = fftw_plan_dft_1d(ni, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_1d(ni, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~FftWorkspace() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
        fftw_free(buffer_);
    }

    FftWorkspace(const FftWorkspace&) = delete;
    FftWorkspace& operator=(const FftWorkspace&) = delete;

    Complex* data() { return reinterpret_cast<Complex*>(buffer_); }
    std::size_t size() const { return n_; }

    void forward() { fftw_execute(forward_); }
    // Unnormalised; callers fold 1/n into their spectral multiplier.
    void backward() { fftw_execute(backward_); }

  private:
    std::size_t n_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

} // namespace

std::vector<double> build_barrier_potential(const GridSpec& grid, double edge_offset,
                                            double height, double steepness) {
    std::vector<double> u(grid.ny, 0.0);
    if (height == 0.0) {
        return u;
    }
    if (!(height > 0.0)) {
        throw_invalid("barrier height must be positive");
    }
    if (!(steepness > 0.0)) {
        throw_invalid("barrier steepness must be positive");
    }
    const double wall = 0.5 * grid.length() - edge_offset;
    for (std::size_t j = 0; j < grid.ny; ++j) {
        const double y = std::abs(grid.y(j));
        u[j] = 0.5 * height * (1.0 + std::tanh((y - wall) / steepness));
    }
    return u;
}

struct SplitStepPropagator::Impl {
    GridSpec grid;
    double dt;
    double g;
    bool linear;
    std::vector<Complex> kinetic;        // exp(-i hbar k^2 dt / 2m) / n
    std::vector<Complex> potential_half; // exp(-i U dt / 2), linear case only
    std::vector<double> potential;
    FftWorkspace fft;

    Impl(const GridSpec& gr, const PhysicsParams& p, double step)
        : grid(gr), dt(step), g(p.g), linear(p.is_linear()), potential(p.potential),
          fft(gr.ny) {
        const double inv_n = 1.0 / static_cast<double>(grid.ny);
        kinetic.resize(grid.ny);
        for (std::size_t j = 0; j < grid.ny; ++j) {
            const double k = grid.wavenumber(j);
            kinetic[j] = std::polar(inv_n, -p.hbar * k * k * dt / (2.0 * p.mass));
        }
        if (linear) {
            potential_half.resize(grid.ny);
            for (std::size_t j = 0; j < grid.ny; ++j) {
                potential_half[j] = std::polar(1.0, -potential[j] * dt / 2.0);
            }
        }
    }

    void half_potential(Complex* psi) const {
        if (linear) {
            for (std::size_t j = 0; j < grid.ny; ++j) {
                psi[j] *= potential_half[j];
            }
            return;
        }
        for (std::size_t j = 0; j < grid.ny; ++j) {
            const double phase = -(potential[j] + g * std::norm(psi[j])) * dt / 2.0;
            psi[j] *= std::polar(1.0, phase);
        }
    }

    void run(Field& f) {
        Complex* psi = fft.data();
        std::copy(f.values().begin(), f.values().end(), psi);
        half_potential(psi);
        fft.forward();
        for (std::size_t j = 0; j < grid.ny; ++j) {
            psi[j] *= kinetic[j];
        }
        fft.backward();
        half_potential(psi);

        double max_mod2 = 0.0;
        bool finite = true;
        for (std::size_t j = 0; j < grid.ny; ++j) {
            const double m2 = std::norm(psi[j]);
            if (!std::isfinite(m2)) {
                finite = false;
            }
            max_mod2 = std::max(max_mod2, m2);
        }
        if (!finite || max_mod2 > kBlowupThreshold * kBlowupThreshold) {
            throw NumericBlowup(0, finite ? std::sqrt(max_mod2) : HUGE_VAL);
        }
        std::copy(psi, psi + grid.ny, f.values().begin());
    }
};

SplitStepPropagator::SplitStepPropagator(const GridSpec& grid, const PhysicsParams& params,
                                         double dt) {
    if (dt == 0.0 || !std::isfinite(dt)) {
        throw_invalid("time step must be finite and non-zero");
    }
    params.check(grid);
    impl_ = std::make_unique<Impl>(grid, params, dt);
}

SplitStepPropagator::~SplitStepPropagator() = default;
SplitStepPropagator::SplitStepPropagator(SplitStepPropagator&&) noexcept = default;
SplitStepPropagator& SplitStepPropagator::operator=(SplitStepPropagator&&) noexcept = default;

void SplitStepPropagator::step(Field& f) {
    if (f.size() != impl_->grid.ny) {
        throw_invalid("field size does not match propagator grid");
    }
    impl_->run(f);
}

double SplitStepPropagator::dt() const { return impl_->dt; }

Field step(const Field& f, const PhysicsParams& p, double dt) {
    if (!(dt > 0.0)) {
        throw_invalid("step requires dt > 0");
    }
    if (!f.all_finite()) {
        throw_invalid("step requires a finite input field");
    }
    SplitStepPropagator prop(f.grid(), p, dt);
    Field out = f;
    prop.step(out);
    return out;
}

EvolutionRecord evolve(const Field& f0, const PhysicsParams& p, const GridSpec& grid, double T) {
    grid.check();
    if (!(f0.grid() == grid)) {
        throw_invalid("initial field grid does not match the evolution grid");
    }
    const double span = grid.total_time();
    const double tol = 1e-9 * std::max(1.0, span);
    EvolutionRecord rec;
    rec.grid = grid;
    rec.params = p;
    rec.T = T;
    rec.snapshots.push_back(f0);
    if (T == 0.0) {
        return rec; // zero steps
    }

    double dt = 0.0;
    if (std::abs(T - span) <= tol) {
        dt = grid.dt;
    } else if (std::abs(T + span) <= tol) {
        dt = -grid.dt;
    } else {
        throw_invalid("evolve: T must equal 0 or +/- nt*dt");
    }
    rec.snapshots.reserve(grid.snapshot_count());

    SplitStepPropagator prop(grid, p, dt);
    Field psi = f0;
    for (std::size_t n = 0; n < grid.nt; ++n) {
        try {
            prop.step(psi);
        } catch (const NumericBlowup& e) {
            throw NumericBlowup(n, e.max_modulus());
        }
        if ((n + 1) % grid.snapshot_stride == 0) {
            rec.snapshots.push_back(psi);
        }
    }
    return rec;
}

EvolutionRecord evolve(const Field& f0, const PhysicsParams& p, const GridSpec& grid) {
    return evolve(f0, p, grid, grid.total_time());
}

Field translate(const Field& f, double shift) {
    const GridSpec& grid = f.grid();
    if (shift == 0.0) {
        return f;
    }
    const double cells = shift / grid.dy;
    const double rounded = std::round(cells);
    Field out(grid);
    const auto n = static_cast<std::ptrdiff_t>(grid.ny);
    if (std::abs(cells - rounded) < 1e-9) {
        auto m = static_cast<std::ptrdiff_t>(rounded) % n;
        if (m < 0) {
            m += n;
        }
        for (std::ptrdiff_t j = 0; j < n; ++j) {
            out[static_cast<std::size_t>((j + m) % n)] = f[static_cast<std::size_t>(j)];
        }
        return out;
    }

    FftWorkspace fft(grid.ny);
    Complex* buf = fft.data();
    std::copy(f.values().begin(), f.values().end(), buf);
    fft.forward();
    const double inv_n = 1.0 / static_cast<double>(grid.ny);
    for (std::size_t j = 0; j < grid.ny; ++j) {
        buf[j] *= std::polar(inv_n, -grid.wavenumber(j) * shift);
    }
    fft.backward();
    std::copy(buf, buf + grid.ny, out.values().begin());
    return out;
}

} // namespace ctcbeam
