#include "kerrosc/hilbert.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "kerrosc/spectral.hpp"

namespace kerrosc {

void ModelParams::validate() const {
    if (!std::isfinite(delta)) throw std::invalid_argument("ModelParams: delta must be finite");
    // ε₂ = 0 is admitted as the integrable diagonal limit used by tests;
    // the CLI rejects it for physics runs.
    if (!(eps2 >= 0.0) || !std::isfinite(eps2))
        throw std::invalid_argument("ModelParams: eps2 must be finite and >= 0");
}

double matrix_element(const ModelParams& params, long n, long m) {
    if (n < 0 || m < 0) throw std::domain_error("matrix_element: negative Fock index");
    if (n == m) {
        const double dn = static_cast<double>(n);
        return -params.delta * dn + dn * (dn - 1.0);
    }
    const long lo = n < m ? n : m;
    const long hi = n < m ? m : n;
    if (hi - lo == 2) {
        const double k = static_cast<double>(lo);
        return -params.eps2 * std::sqrt((k + 1.0) * (k + 2.0));
    }
    return 0.0;
}

BandedHamiltonian build_banded(const ModelParams& params, int size) {
    params.validate();
    if (size < 1) throw std::invalid_argument("build_banded: size must be >= 1");
    BandedHamiltonian h;
    h.size = size;
    h.diagonal.resize(size);
    for (int n = 0; n < size; ++n) h.diagonal[n] = matrix_element(params, n, n);
    if (size > 2) {
        h.off2.resize(size - 2);
        for (int n = 0; n + 2 < size; ++n) h.off2[n] = matrix_element(params, n, n + 2);
    }
    return h;
}

ParityBlock build_parity_block(const ModelParams& params, int n_block, Parity parity) {
    params.validate();
    if (n_block < 2) throw std::invalid_argument("build_parity_block: n_block must be >= 2");
    ParityBlock block;
    block.parity = parity;
    block.size = n_block;
    block.diag.resize(n_block);
    block.off.resize(n_block - 1);
    for (int m = 0; m < n_block; ++m) {
        const long n = block.fock_index(m);
        block.diag[m] = matrix_element(params, n, n);
        if (m + 1 < n_block) block.off[m] = matrix_element(params, n, n + 2);
    }
    return block;
}

void apply_block(const ParityBlock& block, const double* x, double* y) {
    const int n = block.size;
    for (int m = 0; m < n; ++m) {
        double acc = block.diag[m] * x[m];
        if (m > 0) acc += block.off[m - 1] * x[m - 1];
        if (m + 1 < n) acc += block.off[m] * x[m + 1];
        y[m] = acc;
    }
}

int suggest_truncation(const ModelParams& params, double e_max, double tail_tol) {
    params.validate();
    if (!(tail_tol > 0.0) || !(tail_tol <= 1.0))
        throw std::invalid_argument("suggest_truncation: tail_tol must be in (0, 1]");
    if (!std::isfinite(e_max)) throw std::invalid_argument("suggest_truncation: e_max not finite");

    constexpr int kCap = 16384;
    for (int n_fock = 64; n_fock <= kCap; n_fock *= 2) {
        const int n_block = n_fock / 2;
        const SpectrumBlock even = eigensolve(params, n_block, Parity::even, n_block);
        const SpectrumBlock odd = eigensolve(params, n_block, Parity::odd, n_block);
        const double e0 = std::min(even.energies.front(), odd.energies.front());

        bool ok = true;
        bool covered = true;
        for (const SpectrumBlock* spec : {&even, &odd}) {
            const int m_tail = static_cast<int>(std::ceil(0.9 * n_block));
            bool any_above = false;
            for (int k = 0; k < spec->count() && ok; ++k) {
                if (spec->energies[k] - e0 > e_max) {
                    any_above = true;
                    break;
                }
                double tail = 0.0;
                const auto v = spec->vec(k);
                for (int m = m_tail; m < n_block; ++m) tail += v[m] * v[m];
                if (!(tail < tail_tol)) ok = false;
            }
            covered = covered && any_above;
            if (!ok) break;
        }
        if (ok && covered) return n_fock;
    }
    throw std::runtime_error("truncation overflow: no N <= 16384 satisfies the tail criterion");
}

} // namespace kerrosc
