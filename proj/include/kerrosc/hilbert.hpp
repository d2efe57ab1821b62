// hilbert.hpp — truncated Fock representation of the squeeze-driven Kerr
// oscillator H = -Δ a†a + a†²a² - ε₂(a†² + a²), in units K = 1, ħ = 1.
//
// H couples |n⟩ only to |n⟩ and |n±2⟩ and commutes with the parity
// P = (-1)^n, so the matrix splits into two symmetric tridiagonal blocks
// (even/odd Fock sublattices). All spectral work happens on the blocks.

#pragma once

#include <string>
#include <vector>

namespace kerrosc {

struct ModelParams {
    double delta = 0.0; // Δ/K, any sign
    double eps2 = 0.0;  // ε₂/K, must be > 0

    void validate() const; // throws std::invalid_argument
};

enum class Parity { even, odd };

inline const char* to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

// ⟨n|H|m⟩; zero unless |n-m| ∈ {0,2}. Throws std::domain_error on negative index.
double matrix_element(const ModelParams& params, long n, long m);

// Full banded matrix on Fock states 0..size-1.
struct BandedHamiltonian {
    int size = 0;
    std::vector<double> diagonal; // d_n = -Δn + n(n-1)
    std::vector<double> off2;     // o_n = -ε₂ √((n+1)(n+2)), couples n ↔ n+2
};

BandedHamiltonian build_banded(const ModelParams& params, int size);

// One parity sublattice as a symmetric tridiagonal matrix in the block
// index m (Fock index n = 2m for even, n = 2m+1 for odd).
struct ParityBlock {
    Parity parity = Parity::even;
    int size = 0;
    std::vector<double> diag;
    std::vector<double> off; // size-1 entries, m ↔ m+1

    long fock_index(int m) const { return 2L * m + (parity == Parity::odd ? 1 : 0); }
};

ParityBlock build_parity_block(const ModelParams& params, int n_block, Parity parity);

// Smallest full-space truncation N (doubling search, hard cap 16384) such
// that every eigenstate with excitation energy ≤ e_max carries less than
// tail_tol probability on the top 10% of Fock indices. Throws
// std::runtime_error("truncation overflow ...") if the cap is hit.
int suggest_truncation(const ModelParams& params, double e_max, double tail_tol);

// y = H x restricted to one parity block (tridiagonal apply).
void apply_block(const ParityBlock& block, const double* x, double* y);

} // namespace kerrosc
