// semiclassical.hpp — lowest-order Gutzwiller density of states and EBK
// quantization in the radial variables z = (q²+p²)/2, φ (q = √(2z) sinφ,
// p = √(2z) cosφ), where H_cl = z² + (γ-Δ)z with γ = 2ε₂ cos2φ.
//
// The transform is area-preserving, so the trace formula reduces to the 1-D
// quadrature ρ(E) = (1/2π)∫ Σ_branches dφ/√((Δ-γ)² + 4E) over the angles
// where the radial roots z_±(E,φ) are admissible (real and ≥ 0).
//
// All energies here are absolute classical energies (E = 0 at the origin).

#pragma once

#include <vector>

#include "kerrosc/hilbert.hpp"

namespace kerrosc {

enum class Branch { inner, outer }; // z_- / z_+ root family

// Admissible radial roots z ≥ 0 of z² + (γ-Δ)z = energy at angle phi;
// 0, 1 (double root) or 2 values, ascending.
std::vector<double> radial_roots(const ModelParams& params, double energy, double phi);

// ρ(E). Throws std::domain_error at or below the global minimum and within
// a small guard of the singular energies (separatrix, local maximum), where
// callers must evaluate one-sided. Adaptive quadrature, rel. tol ~1e-9.
double semiclassical_dos(const ModelParams& params, double energy);

// ∫ρ(E)dE over [lo, hi] by adaptive quadrature of the DOS (the window must
// not contain a singular energy in its interior).
double semiclassical_count(const ModelParams& params, double lo, double hi, int panels = 64);

// Ĩ_branch(E) = (1/2π)∫ z_branch(E,φ) dφ on the inter-ESQPT window
// E_sx < E < 0 of Case III. Monotone: outer increasing, inner decreasing.
double ebk_action(const ModelParams& params, double energy, Branch branch);

struct EbkLevel {
    Branch branch = Branch::inner;
    int n = 0;          // EBK quantum number, Ĩ(E_n) = n + 1/2  (μ=2, b=0)
    double energy = 0.0; // absolute classical energy
};

// All EBK levels of one branch in the inter-ESQPT window, ascending in energy.
std::vector<EbkLevel> ebk_energies(const ModelParams& params, Branch branch);

// Integer Δ/K values in [delta_min, delta_max] at which inter-ESQPT level
// crossings are predicted for the given ε₂ (Case III and at least one inner
// level required). Whether each crossing is real or avoided is not decided
// here.
std::vector<int> predicted_crossings(double eps2, double delta_min, double delta_max);

} // namespace kerrosc
