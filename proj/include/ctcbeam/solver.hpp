#pragma once

// Symmetric split-step Fourier propagator for the linear and cubic
// Schrödinger equations on a periodic 1D grid.

#include "ctcbeam/core.hpp"

#include <memory>
#include <vector>

namespace ctcbeam {

// Samples above this modulus (or non-finite ones) abort a propagation.
inline constexpr double kBlowupThreshold = 1e12;

// Smooth reflecting walls near both domain edges:
// U(y) = height * [1 + tanh((|y| - (L/2 - edge_offset)) / steepness)] / 2.
std::vector<double> build_barrier_potential(const GridSpec& grid, double edge_offset,
                                            double height, double steepness);

// Reusable propagator for a fixed (grid, params, dt). Owns the FFT plans and
// the precomputed kinetic phases, so repeated steps allocate nothing.
class SplitStepPropagator {
  public:
    SplitStepPropagator(const GridSpec& grid, const PhysicsParams& params, double dt);
    ~SplitStepPropagator();
    SplitStepPropagator(SplitStepPropagator&&) noexcept;
    SplitStepPropagator& operator=(SplitStepPropagator&&) noexcept;
    SplitStepPropagator(const SplitStepPropagator&) = delete;
    SplitStepPropagator& operator=(const SplitStepPropagator&) = delete;

    // One Strang step in place. Throws NumericBlowup (step index 0) when the
    // result is non-finite or exceeds kBlowupThreshold.
    void step(Field& f);

    double dt() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One symmetric split step: half potential/nonlinear phase, full kinetic
// phase in spectral space, half potential/nonlinear phase again.
Field step(const Field& f, const PhysicsParams& p, double dt);

// Propagates f0 over grid.nt steps. T must equal +nt*dt (forward), -nt*dt
// (backward) or 0 (no steps: the record holds f0 only). Snapshots are stored
// every snapshot_stride steps.
EvolutionRecord evolve(const Field& f0, const PhysicsParams& p, const GridSpec& grid, double T);

// Convenience: evolve forward over the grid's own total time.
EvolutionRecord evolve(const Field& f0, const PhysicsParams& p, const GridSpec& grid);

// Spectral translation f(y) -> f(y - shift) on the periodic grid. Integer
// multiples of dy are applied as an exact cyclic roll.
Field translate(const Field& f, double shift);

} // namespace ctcbeam
