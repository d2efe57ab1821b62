// classical.hpp — classical limit of the squeeze-driven Kerr oscillator:
//   H_cl(q,p) = -(Δ/2)(q²+p²) + (q²+p²)²/4 - ε₂(q²-p²)        (K = 1)
// Stationary points, parameter regimes, ESQPT critical energies, the four
// invariant regions of Case III, and a trajectory integrator used in tests.

#pragma once

#include <optional>
#include <vector>

#include "kerrosc/hilbert.hpp"

namespace kerrosc {

struct PhasePoint {
    double q = 0.0;
    double p = 0.0;
};

double classical_energy(const ModelParams& params, const PhasePoint& pt);

// (q̇, ṗ) from Hamilton's equations.
PhasePoint hamilton_rhs(const ModelParams& params, const PhasePoint& pt);

enum class Regime { I, II, III };
// I: Δ ≤ -2ε₂ (single minimum), II: -2ε₂ < Δ ≤ 2ε₂ (double well, r0
// hyperbolic), III: Δ > 2ε₂ (double well + inner lobe, r0 local maximum).
Regime classify_regime(const ModelParams& params);

enum class Stability { minimum, hyperbolic, local_maximum };
enum class CriticalLabel { r0, r1_plus, r1_minus, r2_plus, r2_minus };

struct StationaryPoint {
    CriticalLabel label = CriticalLabel::r0;
    PhasePoint location;
    double energy = 0.0;
    Stability stability = Stability::minimum;
};

std::vector<StationaryPoint> stationary_points(const ModelParams& params);

struct EsqptEnergies {
    std::optional<double> e_esqpt; // excitation energy of the log-divergence
    std::optional<double> e_step;  // excitation energy of the step discontinuity
};

// Case I: none. Case II: e_esqpt = (Δ+2ε₂)²/4. Case III: e_esqpt = 2Δε₂,
// e_step = (Δ+2ε₂)²/4. Excitation energies, i.e. relative to the classical
// ground energy.
EsqptEnergies esqpt_energies(const ModelParams& params);

// Absolute classical energy of the global minimum (0 in Case I, else -(Δ+2ε₂)²/4).
double classical_ground_energy(const ModelParams& params);

// Absolute energy of the separatrix through r1±, Case III only: -(Δ-2ε₂)²/4.
double separatrix_energy(const ModelParams& params);

enum class Region { omega_l, omega_r, omega_in, omega_out };

const char* to_string(Region r);

// Analytic Case III region membership via the radial separatrix branches
// z_±(E_sx, φ): z < z_- → Ω_in, z_- ≤ z ≤ z_+ → Ω_l/Ω_r by sign of q
// (q = 0 ties to Ω_r), z > z_+ → Ω_out. Constructor throws outside Case III.
class RegionClassifier {
  public:
    explicit RegionClassifier(const ModelParams& params);
    Region classify(double q, double p) const noexcept;

  private:
    double delta_;
    double two_eps2_;
    double sep_sq_; // (Δ-2ε₂)²
};

Region classify_region(const ModelParams& params, const PhasePoint& pt);

// Adaptive explicit Runge–Kutta integration of Hamilton's equations,
// sampled at t = 0, dt, 2dt, ..., t_end. Relative tolerance 1e-10.
std::vector<PhasePoint> integrate_trajectory(const ModelParams& params, const PhasePoint& start,
                                             double t_end, double dt);

} // namespace kerrosc
