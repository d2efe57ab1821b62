// spectral.hpp — diagonalization of parity blocks, Δ/K level sweeps,
// real/avoided crossing detection, quantum density of states and
// participation ratios.

#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "kerrosc/hilbert.hpp"

namespace kerrosc {

// Eigenpairs of one parity block. Eigenvectors are stored column-major in
// the block index m; full-space Fock vectors are recovered by striding onto
// the parity sublattice (n = 2m or 2m+1).
struct SpectrumBlock {
    Parity parity = Parity::even;
    int block_size = 0;
    std::vector<double> energies;     // ascending, count entries
    std::vector<double> vectors;      // block_size × count, column-major

    int count() const { return static_cast<int>(energies.size()); }
    std::span<const double> vec(int k) const {
        return {vectors.data() + static_cast<std::size_t>(k) * block_size,
                static_cast<std::size_t>(block_size)};
    }
    // embed eigenvector k into the full Fock basis of dimension 2*block_size
    std::vector<double> full_vector(int k) const;
};

// Lowest `count` eigenpairs of the given parity block.
SpectrumBlock eigensolve(const ModelParams& params, int n_block, Parity parity, int count);

// All eigenvalues of the block, no vectors (fast path for sweeps).
std::vector<double> eigenvalues_only(const ModelParams& params, int n_block, Parity parity);

struct Histogram {
    double lo = 0.0, hi = 0.0;
    std::vector<double> density;  // normalized: sum(density)*bin_width == 1
    std::vector<int> counts;
    int total = 0;

    double bin_width() const { return (hi - lo) / static_cast<double>(density.size()); }
    double center(int i) const { return lo + (i + 0.5) * bin_width(); }
};

// Histogram of excitation energies E' = E - E0 over [lo, hi), both parities.
Histogram quantum_dos(const ModelParams& params, int n_block, int bins, double lo, double hi);

// Peak bin center (argmax of density).
double dos_peak_location(const Histogram& h);

// Center of the most persistent density step-down: minimises the ratio of
// right-window to left-window mean counts over `window` bins each side.
double dos_step_location(const Histogram& h, int window = 16);

struct LevelEntry {
    double excitation = 0.0;
    Parity parity = Parity::even;
    int index = 0; // index within its parity block
};

struct LevelSweep {
    double eps2 = 0.0;
    int n_block = 0;
    int levels = 0;
    std::vector<double> delta_grid;
    std::vector<std::vector<LevelEntry>> entries; // per grid point, ascending E'
};

// Lowest L excitation energies with parity labels at each Δ of an ascending
// grid. Grid points are solved independently (parallel map, deterministic).
LevelSweep sweep_levels(double eps2, std::span<const double> delta_grid, int levels,
                        int n_block, bool parallel = true);

enum class CrossingKind { real, avoided };

struct CrossingRecord {
    CrossingKind kind = CrossingKind::real;
    double delta_location = 0.0;
    double gap = 0.0;                      // K units, at delta_location
    std::pair<int, Parity> level_a{0, Parity::even};
    std::pair<int, Parity> level_b{0, Parity::even};
    double excitation = 0.0;               // mean pair excitation at the crossing
};

// Locate crossings of levels whose excitation lies inside
// [window_lo, window_hi] ∩ (E'_esqpt(Δ), E'_step(Δ)). Opposite-parity pairs
// are tracked through sign changes of their energy difference and refined by
// bisection (kind=real when the refined gap < gap_tol); same-parity adjacent
// gaps are refined at interior minima by golden-section (kind=avoided).
std::vector<CrossingRecord> find_crossings(const LevelSweep& sweep, double window_lo,
                                           double window_hi, double gap_tol = 1e-8);

struct DoubletSplitting {
    double excitation = 0.0; // mean excitation of the pair
    double splitting = 0.0;  // |E_even - E_odd|
};

// Opposite-parity doublets with mean excitation below e_max, ascending.
std::vector<DoubletSplitting> doublet_splittings(const ModelParams& params, double e_max,
                                                 int n_block);

// (Σ|c_n|⁴)⁻¹ for a normalized state; scale-invariant form. Throws on zero norm.
double participation_ratio(std::span<const double> coeffs);
double participation_ratio(std::span<const std::complex<double>> coeffs);

} // namespace kerrosc
