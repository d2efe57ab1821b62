// phasespace.hpp — Glauber coherent states, Husimi functions
// Q(q,p) = (1/π)|⟨α|ψ⟩|² with α = (q+ip)/√2, grid evaluation, and Monte
// Carlo Husimi volumes over the Case III invariant regions.
//
// With this convention the raw integral ∫Q dq dp over the whole plane is 2
// (resolution of identity, d²α = dq dp/2). Region volumes are therefore
// reported normalized: each raw region integral divided by the sum of the
// four, so the four volumes add to one.

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "kerrosc/classical.hpp"
#include "kerrosc/hilbert.hpp"
#include "kerrosc/rng.hpp"

namespace kerrosc {

struct QuantumState {
    std::vector<std::complex<double>> coeffs;

    int size() const { return static_cast<int>(coeffs.size()); }
    double norm() const;
    void assert_normalized(double tol = 1e-10) const;
    // probability on the top `frac` fraction of Fock indices
    double tail_weight(double frac = 0.1) const;
    // smallest length containing all but `drop` of the norm² (Husimi fast path)
    int effective_support(double drop = 1e-14) const;
};

// c_n = e^{-|α|²/2} α^n/√(n!), evaluated in the log domain and renormalized
// after truncation. Throws std::runtime_error("truncation too small ...")
// if the truncated Poisson tail exceeds 1e-10.
QuantumState coherent_coefficients(double q0, double p0, int n_fock);

// Q(q,p) for a normalized state.
double husimi(const QuantumState& state, double q, double p);

struct HusimiField {
    double q_min = 0, q_max = 0, p_min = 0, p_max = 0;
    int nq = 0, np = 0;
    std::vector<double> values; // row-major, values[ip*nq + iq]

    double q_at(int iq) const { return q_min + (q_max - q_min) * iq / (nq - 1); }
    double p_at(int ip) const { return p_min + (p_max - p_min) * ip / (np - 1); }
};

HusimiField husimi_grid(const QuantumState& state, double q_min, double q_max, double p_min,
                        double p_max, int nq, int np, bool parallel = true);

struct VolumeEstimate {
    double value = 0.0;   // normalized volume (four regions sum to 1)
    double stderr_ = 0.0; // delta-method standard error of `value`
    double raw = 0.0;     // disk-area × mean(Q·indicator), units where total = 2
    double raw_stderr = 0.0;
};

struct RegionVolumes {
    std::array<VolumeEstimate, 4> region{}; // indexed by Region enum order
    double raw_total = 0.0;                 // Σ raw, estimates ∫Q over the disk (≈2)
    double disk_radius = 0.0;
    double tail_outside = 0.0; // analytic bound on Q mass outside the disk (of 1)
    std::uint64_t samples = 0;

    const VolumeEstimate& of(Region r) const { return region[static_cast<int>(r)]; }
};

// Analytic fraction of the (unit-normalized) Husimi mass outside the disk of
// radius R: Σ_n |c_n|² Q(n+1, R²/2) with Q the regularized upper incomplete
// gamma. Exact for the truncated state (cross terms vanish by angular
// integration).
double husimi_tail_outside(const QuantumState& state, double radius);

// ⟨ψ|H|ψ⟩ in the truncated Fock basis.
double state_energy(const QuantumState& state, const ModelParams& params);

// Disk radius from the documented rule: H_cl on the disk boundary exceeds the
// state's mean energy by 25% of its depth above the classical ground, plus 5
// coherent widths; then grown (if needed) until husimi_tail_outside < tail_tol.
double suggest_disk_radius(const QuantumState& state, const ModelParams& params,
                           double tail_tol = 1e-4);

// Uniform Monte Carlo over the disk with one independent counter-RNG stream
// per region (streams derived from `seed`), Q evaluated only on samples whose
// classify_region matches the stream's region. Deterministic for fixed seed
// and sample count, independent of thread count. Throws if the disk fails the
// tail bound (message suggests a radius) or samples < 1e4.
RegionVolumes husimi_volumes(const QuantumState& state, const ModelParams& params,
                             std::uint64_t samples, std::uint64_t seed, double radius = 0.0,
                             bool parallel = true);

// Single-region convenience wrapper: (normalized volume, stderr).
std::pair<double, double> husimi_volume(const QuantumState& state, Region region,
                                        const ModelParams& params, std::uint64_t samples,
                                        std::uint64_t seed);

} // namespace kerrosc
