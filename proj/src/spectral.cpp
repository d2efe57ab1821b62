#include "kerrosc/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "kerrosc/classical.hpp"
#include "kerrosc/parallel.hpp"

namespace kerrosc {

namespace {

[[noreturn]] void solver_error(const char* routine, const ModelParams& params, int n_block,
                               Parity parity, int info) {
    std::ostringstream msg;
    msg << routine << " failed (info=" << info << ") for block {delta=" << params.delta
        << ", eps2=" << params.eps2 << ", n_block=" << n_block << ", parity=" << to_string(parity)
        << "}";
    throw std::runtime_error(msg.str());
}

} // namespace

std::vector<double> SpectrumBlock::full_vector(int k) const {
    std::vector<double> full(2 * static_cast<std::size_t>(block_size), 0.0);
    const auto v = vec(k);
    const int offset = parity == Parity::odd ? 1 : 0;
    for (int m = 0; m < block_size; ++m) full[2 * m + offset] = v[m];
    return full;
}

namespace {

// deterministic eigenvector sign: largest-magnitude component positive
void canonicalize_columns(std::vector<double>& z, int rows, int cols) {
    for (int k = 0; k < cols; ++k) {
        double* col = z.data() + static_cast<std::size_t>(k) * rows;
        int arg = 0;
        for (int m = 1; m < rows; ++m)
            if (std::abs(col[m]) > std::abs(col[arg])) arg = m;
        if (col[arg] < 0.0)
            for (int m = 0; m < rows; ++m) col[m] = -col[m];
    }
}

} // namespace

SpectrumBlock eigensolve(const ModelParams& params, int n_block, Parity parity, int count) {
    if (count < 1 || count > n_block)
        throw std::invalid_argument("eigensolve: need 1 <= count <= n_block");
    ParityBlock block = build_parity_block(params, n_block, parity);

    SpectrumBlock out;
    out.parity = parity;
    out.block_size = n_block;

    if (count == n_block) {
        // full spectrum: divide and conquer
        std::vector<double> d = block.diag;
        std::vector<double> e = block.off;
        std::vector<double> z(static_cast<std::size_t>(n_block) * n_block);
        const int info =
            LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', n_block, d.data(), e.data(), z.data(), n_block);
        if (info != 0) solver_error("dstevd", params, n_block, parity, info);
        canonicalize_columns(z, n_block, n_block);
        out.energies = std::move(d);
        out.vectors = std::move(z);
        return out;
    }

    std::vector<double> d = block.diag;
    std::vector<double> e = block.off;
    e.push_back(0.0); // dstevr wants n-sized E array
    std::vector<double> w(n_block);
    std::vector<double> z(static_cast<std::size_t>(n_block) * count);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(count));
    lapack_int found = 0;
    const int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n_block, d.data(), e.data(), 0.0,
                                    0.0, 1, count, 0.0, &found, w.data(), z.data(), n_block,
                                    isuppz.data());
    if (info != 0 || found != count) solver_error("dstevr", params, n_block, parity, info);
    canonicalize_columns(z, n_block, count);
    w.resize(count);
    out.energies = std::move(w);
    out.vectors = std::move(z);
    return out;
}

std::vector<double> eigenvalues_only(const ModelParams& params, int n_block, Parity parity) {
    ParityBlock block = build_parity_block(params, n_block, parity);
    std::vector<double> d = std::move(block.diag);
    std::vector<double> e = std::move(block.off);
    const int info = LAPACKE_dsterf(n_block, d.data(), e.data());
    if (info != 0) solver_error("dsterf", params, n_block, parity, info);
    return d;
}

Histogram quantum_dos(const ModelParams& params, int n_block, int bins, double lo, double hi) {
    if (bins < 1) throw std::invalid_argument("quantum_dos: bins must be >= 1");
    if (!(lo < hi)) throw std::invalid_argument("quantum_dos: window must satisfy lo < hi");
    const std::vector<double> even = eigenvalues_only(params, n_block, Parity::even);
    const std::vector<double> odd = eigenvalues_only(params, n_block, Parity::odd);
    const double e0 = std::min(even.front(), odd.front());

    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(bins, 0);
    h.density.assign(bins, 0.0);
    const double width = (hi - lo) / bins;
    auto deposit = [&](const std::vector<double>& evs) {
        for (double energy : evs) {
            const double x = energy - e0;
            if (x < lo || x >= hi) continue;
            int b = static_cast<int>((x - lo) / width);
            if (b == bins) b = bins - 1;
            ++h.counts[b];
            ++h.total;
        }
    };
    deposit(even);
    deposit(odd);
    if (h.total == 0) throw std::runtime_error("quantum_dos: no eigenvalue in window");
    for (int i = 0; i < bins; ++i)
        h.density[i] = static_cast<double>(h.counts[i]) / (h.total * width);
    return h;
}

double dos_peak_location(const Histogram& h) {
    const auto it = std::max_element(h.density.begin(), h.density.end());
    return h.center(static_cast<int>(it - h.density.begin()));
}

double dos_step_location(const Histogram& h, int window) {
    const int bins = static_cast<int>(h.counts.size());
    if (window < 1 || 2 * window > bins)
        throw std::invalid_argument("dos_step_location: bad window");
    // right/left windowed count ratio per bin boundary; the step must lie at
    // least `window` bins from both histogram edges
    std::vector<double> ratio(bins + 1, std::numeric_limits<double>::infinity());
    double best = std::numeric_limits<double>::infinity();
    int arg = window;
    for (int b = window; b + window <= bins; ++b) {
        double left = 0.0, right = 0.0;
        for (int i = b - window; i < b; ++i) left += h.counts[i];
        for (int i = b; i < b + window; ++i) right += h.counts[i];
        ratio[b] = (right + 0.5) / (left + 0.5); // +0.5 regularizes empty windows
        if (ratio[b] < best) {
            best = ratio[b];
            arg = b;
        }
    }
    // with few counts per bin the minimum sits on a plateau; take its center
    const double threshold = best < 1.0 ? best + 0.1 * (1.0 - best) : best;
    int a = arg, b = arg;
    while (a - 1 >= window && ratio[a - 1] <= threshold) --a;
    while (b + 1 + window <= bins && ratio[b + 1] <= threshold) ++b;
    return h.lo + 0.5 * (a + b) * h.bin_width();
}

LevelSweep sweep_levels(double eps2, std::span<const double> delta_grid, int levels, int n_block,
                        bool parallel) {
    if (levels < 1) throw std::invalid_argument("sweep_levels: levels must be >= 1");
    if (delta_grid.empty()) throw std::invalid_argument("sweep_levels: empty grid");
    for (std::size_t i = 1; i < delta_grid.size(); ++i)
        if (!(delta_grid[i] > delta_grid[i - 1]))
            throw std::invalid_argument("sweep_levels: grid must be strictly ascending");

    LevelSweep sweep;
    sweep.eps2 = eps2;
    sweep.n_block = n_block;
    sweep.levels = levels;
    sweep.delta_grid.assign(delta_grid.begin(), delta_grid.end());
    sweep.entries.resize(delta_grid.size());

    std::vector<std::string> errors(delta_grid.size());
    parallel_for(
        delta_grid.size(),
        [&](std::size_t i) {
            try {
                const ModelParams params{delta_grid[i], eps2};
                const std::vector<double> even = eigenvalues_only(params, n_block, Parity::even);
                const std::vector<double> odd = eigenvalues_only(params, n_block, Parity::odd);
                const double e0 = std::min(even.front(), odd.front());
                std::vector<LevelEntry> merged;
                merged.reserve(levels);
                std::size_t ie = 0, io = 0;
                while (static_cast<int>(merged.size()) < levels &&
                       (ie < even.size() || io < odd.size())) {
                    const bool take_even =
                        io >= odd.size() || (ie < even.size() && even[ie] <= odd[io]);
                    if (take_even) {
                        merged.push_back({even[ie] - e0, Parity::even, static_cast<int>(ie)});
                        ++ie;
                    } else {
                        merged.push_back({odd[io] - e0, Parity::odd, static_cast<int>(io)});
                        ++io;
                    }
                }
                sweep.entries[i] = std::move(merged);
            } catch (const std::exception& ex) {
                errors[i] = ex.what();
            }
        },
        parallel);

    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) {
            std::ostringstream msg;
            msg << "sweep_levels at delta=" << delta_grid[i] << ": " << errors[i];
            throw std::runtime_error(msg.str());
        }
    }
    return sweep;
}

namespace {

struct WindowAt {
    double lo = 0.0, hi = 0.0;
    bool valid = false;
};

WindowAt window_at(double delta, double eps2, double wlo, double whi) {
    const ModelParams params{delta, eps2};
    if (classify_regime(params) != Regime::III) return {};
    const EsqptEnergies e = esqpt_energies(params);
    WindowAt w;
    w.lo = std::max(wlo, *e.e_esqpt);
    w.hi = std::min(whi, *e.e_step);
    w.valid = w.lo < w.hi;
    return w;
}

// absolute eigenvalue of one block level at given delta
double level_energy(double delta, double eps2, int n_block, Parity parity, int index) {
    const std::vector<double> evs = eigenvalues_only({delta, eps2}, n_block, parity);
    return evs.at(index);
}

double ground_energy(double delta, double eps2, int n_block) {
    const std::vector<double> even = eigenvalues_only({delta, eps2}, n_block, Parity::even);
    const std::vector<double> odd = eigenvalues_only({delta, eps2}, n_block, Parity::odd);
    return std::min(even.front(), odd.front());
}

} // namespace

std::vector<CrossingRecord> find_crossings(const LevelSweep& sweep, double window_lo,
                                           double window_hi, double gap_tol) {
    const std::size_t npts = sweep.delta_grid.size();
    std::vector<CrossingRecord> records;
    if (npts < 2) return records;
    const double eps2 = sweep.eps2;
    const int n_block = sweep.n_block;

    // per grid point: window-filtered levels, plus (parity,index) -> E' lookup
    std::vector<std::vector<LevelEntry>> in_window(npts);
    std::vector<std::map<std::pair<int, int>, double>> lookup(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        const WindowAt w = window_at(sweep.delta_grid[i], eps2, window_lo, window_hi);
        if (!w.valid) continue; // outside Case III or empty window: skip point
        for (const LevelEntry& entry : sweep.entries[i]) {
            if (entry.excitation < w.lo || entry.excitation > w.hi) continue;
            in_window[i].push_back(entry);
            lookup[i][{static_cast<int>(entry.parity), entry.index}] = entry.excitation;
        }
    }

    // ---- real crossings: opposite-parity sign flips, refined by bisection ----
    for (std::size_t i = 0; i + 1 < npts; ++i) {
        const auto& levels = in_window[i];
        for (std::size_t a = 0; a + 1 < levels.size(); ++a) {
            const LevelEntry& u = levels[a];
            const LevelEntry& v = levels[a + 1];
            if (u.parity == v.parity) continue;
            const auto itu = lookup[i + 1].find({static_cast<int>(u.parity), u.index});
            const auto itv = lookup[i + 1].find({static_cast<int>(v.parity), v.index});
            if (itu == lookup[i + 1].end() || itv == lookup[i + 1].end()) continue;
            const double s0 = u.excitation - v.excitation;
            const double s1 = itu->second - itv->second;
            if (!(s0 < 0.0 && s1 > 0.0) && !(s0 > 0.0 && s1 < 0.0)) continue;

            auto diff = [&](double delta) {
                return level_energy(delta, eps2, n_block, u.parity, u.index) -
                       level_energy(delta, eps2, n_block, v.parity, v.index);
            };
            boost::uintmax_t max_iter = 80;
            auto stop = [](double a_, double b_) { return std::abs(b_ - a_) < 1e-11; };
            const auto bracket = boost::math::tools::toms748_solve(
                diff, sweep.delta_grid[i], sweep.delta_grid[i + 1], s0, s1, stop, max_iter);
            const double delta_star = 0.5 * (bracket.first + bracket.second);
            const double gap = std::abs(diff(delta_star));
            if (gap < gap_tol) {
                CrossingRecord rec;
                rec.kind = CrossingKind::real;
                rec.delta_location = delta_star;
                rec.gap = gap;
                rec.level_a = {u.index, u.parity};
                rec.level_b = {v.index, v.parity};
                const double e0 = ground_energy(delta_star, eps2, n_block);
                rec.excitation =
                    level_energy(delta_star, eps2, n_block, u.parity, u.index) - e0;
                records.push_back(rec);
            }
        }
    }

    // ---- avoided crossings: same-parity adjacent-gap local minima ----
    for (Parity parity : {Parity::even, Parity::odd}) {
        // candidate adjacent index pairs present anywhere in the window
        std::vector<int> candidates;
        for (std::size_t i = 0; i < npts; ++i)
            for (const LevelEntry& entry : in_window[i])
                if (entry.parity == parity) candidates.push_back(entry.index);
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        for (int k : candidates) {
            // gap series where both k and k+1 lie in the window
            std::vector<std::pair<std::size_t, double>> series;
            for (std::size_t i = 0; i < npts; ++i) {
                const auto it0 = lookup[i].find({static_cast<int>(parity), k});
                const auto it1 = lookup[i].find({static_cast<int>(parity), k + 1});
                if (it0 == lookup[i].end() || it1 == lookup[i].end()) continue;
                series.emplace_back(i, it1->second - it0->second);
            }
            for (std::size_t j = 1; j + 1 < series.size(); ++j) {
                const auto [i_prev, g_prev] = series[j - 1];
                const auto [i_mid, g_mid] = series[j];
                const auto [i_next, g_next] = series[j + 1];
                if (i_mid != i_prev + 1 || i_next != i_mid + 1) continue; // need contiguous run
                if (!(g_mid < g_prev && g_mid <= g_next)) continue;
                // prominence: a genuine avoided crossing dips well below its shoulders
                if (!(g_mid < 0.8 * std::min(g_prev, g_next))) continue;

                auto gap_fn = [&](double delta) {
                    const std::vector<double> evs =
                        eigenvalues_only({delta, eps2}, n_block, parity);
                    return evs.at(k + 1) - evs.at(k);
                };
                const auto minimum = boost::math::tools::brent_find_minima(
                    gap_fn, sweep.delta_grid[i_prev], sweep.delta_grid[i_next], 30);
                CrossingRecord rec;
                rec.kind = CrossingKind::avoided;
                rec.delta_location = minimum.first;
                rec.gap = minimum.second;
                rec.level_a = {k, parity};
                rec.level_b = {k + 1, parity};
                const double e0 = ground_energy(minimum.first, eps2, n_block);
                rec.excitation =
                    level_energy(minimum.first, eps2, n_block, parity, k) - e0 + 0.5 * minimum.second;
                records.push_back(rec);
            }
        }
    }

    std::sort(records.begin(), records.end(), [](const CrossingRecord& a, const CrossingRecord& b) {
        return a.delta_location < b.delta_location;
    });
    return records;
}

std::vector<DoubletSplitting> doublet_splittings(const ModelParams& params, double e_max,
                                                 int n_block) {
    const std::vector<double> even = eigenvalues_only(params, n_block, Parity::even);
    const std::vector<double> odd = eigenvalues_only(params, n_block, Parity::odd);
    const double e0 = std::min(even.front(), odd.front());
    std::vector<DoubletSplitting> out;
    const std::size_t n = std::min(even.size(), odd.size());
    for (std::size_t k = 0; k < n; ++k) {
        const double exc = 0.5 * (even[k] + odd[k]) - e0;
        if (exc > e_max) break;
        out.push_back({exc, std::abs(even[k] - odd[k])});
    }
    return out;
}

namespace {

template <class Abs2>
double pr_impl(std::size_t n, Abs2 abs2) {
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = abs2(i);
        s2 += w;
        s4 += w * w;
    }
    if (s4 == 0.0 || s2 == 0.0)
        throw std::invalid_argument("participation_ratio: zero-norm state");
    return s2 * s2 / s4;
}

} // namespace

double participation_ratio(std::span<const double> coeffs) {
    return pr_impl(coeffs.size(), [&](std::size_t i) { return coeffs[i] * coeffs[i]; });
}

double participation_ratio(std::span<const std::complex<double>> coeffs) {
    return pr_impl(coeffs.size(), [&](std::size_t i) { return std::norm(coeffs[i]); });
}

} // namespace kerrosc
