// dynamics.hpp — time evolution by spectral decomposition, quench-state
// preparation, Husimi-volume tunneling traces T_Ω(t,t0) = V_Ω(t) - V_Ω(t0),
// their time averages, and Δ/K tunneling sweeps.
//
// Times are dimensionless Kt throughout.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "kerrosc/phasespace.hpp"
#include "kerrosc/spectral.hpp"

namespace kerrosc {

// Spectral decomposition of an initial state over both parity blocks;
// |Ψ(t)⟩ = Σ_k e^{-iE_k t} ⟨ψ_k|Ψ(0)⟩ |ψ_k⟩ evaluated at arbitrary t.
class Evolver {
  public:
    Evolver(const SpectrumBlock& even, const SpectrumBlock& odd, const QuantumState& state0);

    QuantumState state_at(double t) const;
    double completeness() const { return completeness_; } // Σ|⟨ψ_k|Ψ(0)⟩|²
    int dimension() const { return dim_; }

  private:
    struct Mode {
        double energy;
        std::complex<double> overlap;
        const double* vec; // block eigenvector
        int block_size;
        int offset; // 0 even, 1 odd
    };
    std::vector<Mode> modes_;
    std::vector<double> storage_; // owned copies of eigenvectors
    int dim_ = 0;
    double completeness_ = 0.0;
};

// One-shot evolution. Throws std::runtime_error if Σ|overlap|² < 1 - 1e-8.
QuantumState evolve(const QuantumState& state0, const SpectrumBlock& even,
                    const SpectrumBlock& odd, double t);

// Lowest eigenvector across both parity blocks, embedded in the full basis.
QuantumState ground_state_of(const ModelParams& params, int n_block);

// Eigenvector k of a parity block as a full-basis QuantumState.
QuantumState state_from_eigenvector(const SpectrumBlock& block, int k);

struct McSettings {
    std::uint64_t samples = 200000;
    std::uint64_t seed = 1;
};

struct TunnelingTrace {
    std::vector<double> times;
    // per region (Region enum order): volumes, their stderr, tunneling, its stderr
    std::array<std::vector<double>, 4> volume, volume_se, tunneling, tunneling_se;
    std::vector<double> raw_total;
    int t0_index = 0;
    double disk_radius = 0.0;
    McSettings mc;
};

// V_Ω(t) on a uniform time grid for the evolved state, with T_Ω relative to
// the first grid point. MC streams are derived per (Δ, time index, region).
TunnelingTrace compute_trace(const Evolver& evolver, const ModelParams& params, double t0,
                             double t1, int n_times, const McSettings& mc, double radius = 0.0);

// T_Ω(t,t0) columns recomputed against the recorded time t0 (must be a grid point).
void effective_tunneling(TunnelingTrace& trace, double t0);

struct MeanTunneling {
    std::array<double, 4> mean{};   // (1/(t-t0)) ∫_{t0}^{t} T_Ω(τ,t0) dτ, trapezoid
    std::array<double, 4> stderr_{};
};

MeanTunneling mean_effective_tunneling(const TunnelingTrace& trace, double t, double t0);

enum class Scenario { coherent_out, coherent_hyperbolic, quench };

const char* to_string(Scenario s);

struct ScenarioOptions {
    int n_block = 800;
    double energy_offset_frac = 0.05; // coherent-center offset, fraction of E'_esqpt
    double quench_delta0 = -6.0;
    int n_times = 101;
};

struct InitialState {
    QuantumState state;
    double q0 = 0.0, p0 = 0.0; // coherent center (coherent scenarios)
    double energy = 0.0;       // ⟨H⟩ of the prepared state
};

// Scenario initial states. coherent_out: coherent state on the p-axis in
// Ω_out at excitation e_esqpt(1+offset); coherent_hyperbolic: coherent state
// in Ω_l beside r1+ at excitation e_esqpt(1-offset); quench: ground state of
// H(Δ0). Throws if the placement violates its region/energy constraint.
InitialState initial_state_for(Scenario scenario, const ModelParams& params,
                               const ScenarioOptions& opts);

struct SweepPoint {
    double delta = 0.0;
    MeanTunneling means;
    double q0 = 0.0, p0 = 0.0;
    double disk_radius = 0.0;
};

struct SweepResult {
    Scenario scenario = Scenario::coherent_out;
    double eps2 = 0.0;
    double t0 = 0.0, t1 = 0.0;
    std::vector<SweepPoint> points;
};

// Mean effective tunneling per region over a Δ/K grid.
SweepResult tunneling_sweep(Scenario scenario, double eps2, std::span<const double> delta_grid,
                            double t0, double t1, const McSettings& mc,
                            const ScenarioOptions& opts);

} // namespace kerrosc
