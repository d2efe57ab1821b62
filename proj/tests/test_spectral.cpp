#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "kerrosc/classical.hpp"
#include "kerrosc/spectral.hpp"
#include "support/dense_jacobi.hpp"

using namespace kerrosc;

TEST_CASE("eigensolve: diagonal limit eps2 = 0 gives -Δn + n(n-1) on each sublattice") {
    const ModelParams params{-1.0, 0.0}; // E_n = n + n(n-1) = n²
    const SpectrumBlock even = eigensolve(params, 12, Parity::even, 12);
    const SpectrumBlock odd = eigensolve(params, 12, Parity::odd, 12);
    for (int m = 0; m < 12; ++m) {
        const double ne = 2.0 * m, no = 2.0 * m + 1;
        CHECK(even.energies[m] == doctest::Approx(ne * ne).epsilon(1e-14));
        CHECK(odd.energies[m] == doctest::Approx(no * no).epsilon(1e-14));
    }
}

TEST_CASE("eigensolve: block invariants (norms, residuals, orthogonality, ordering)") {
    const ModelParams params{27.0, 3.0};
    const int n_block = 80;
    const ParityBlock block = build_parity_block(params, n_block, Parity::even);
    const SpectrumBlock spec = eigensolve(params, n_block, Parity::even, 30);

    std::vector<double> hv(n_block);
    for (int k = 0; k < spec.count(); ++k) {
        const auto v = spec.vec(k);
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        CHECK(std::abs(std::sqrt(nrm) - 1.0) < 1e-12);

        apply_block(block, v.data(), hv.data());
        double resid = 0.0;
        for (int m = 0; m < n_block; ++m) {
            const double r = hv[m] - spec.energies[k] * v[m];
            resid += r * r;
        }
        CHECK(std::sqrt(resid) < 1e-9 * std::max(1.0, std::abs(spec.energies[k])));
        if (k > 0) CHECK(spec.energies[k] >= spec.energies[k - 1]);
    }
    for (int k = 0; k < 10; ++k) {
        for (int j = k + 1; j < 10; ++j) {
            double dot = 0.0;
            const auto a = spec.vec(k), b = spec.vec(j);
            for (int m = 0; m < n_block; ++m) dot += a[m] * b[m];
            CHECK(std::abs(dot) < 1e-10);
        }
    }
}

TEST_CASE("eigensolve: partial solve agrees with the dense Jacobi oracle at n_block = 20") {
    const ModelParams params{9.0, 2.5};
    const int n_block = 20;
    for (Parity parity : {Parity::even, Parity::odd}) {
        const ParityBlock block = build_parity_block(params, n_block, parity);
        std::vector<double> dense(n_block * n_block, 0.0);
        for (int i = 0; i < n_block; ++i) {
            dense[i * n_block + i] = block.diag[i];
            if (i + 1 < n_block) {
                dense[i * n_block + i + 1] = block.off[i];
                dense[(i + 1) * n_block + i] = block.off[i];
            }
        }
        const std::vector<double> reference = testing::jacobi_eigenvalues(dense, n_block);
        const SpectrumBlock spec = eigensolve(params, n_block, parity, n_block);
        for (int k = 0; k < n_block; ++k)
            CHECK(std::abs(spec.energies[k] - reference[k]) <
                  1e-10 * std::max(1.0, std::abs(reference[k])));
    }
}

TEST_CASE("eigensolve: spectral stability under 25% truncation growth") {
    const ModelParams params{175.0, 3.0};
    const std::vector<double> a = eigenvalues_only(params, 300, Parity::even);
    const std::vector<double> b = eigenvalues_only(params, 375, Parity::even);
    const double e0a = a.front(), e0b = b.front();
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] - e0a > 8190.25) break;
        CHECK(std::abs(a[k] - b[k]) < 1e-8 * std::max(1.0, std::abs(a[k])));
        CHECK(std::abs((a[k] - e0a) - (b[k] - e0b)) < 1e-8 * std::max(1.0, a[k] - e0a));
    }
}

TEST_CASE("quantum_dos: Case I decays, Case II peaks at the ESQPT energy") {
    SUBCASE("Case I: monotonically decaying density (coarse bins)") {
        const Histogram h = quantum_dos({-3000.0, 400.0}, 1200, 24, 0.0, 6.0e6);
        double integral = 0.0;
        for (double d : h.density) integral += d * h.bin_width();
        CHECK(integral == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t i = 0; i + 1 < h.density.size(); ++i)
            CHECK(h.density[i + 1] <= h.density[i]);
    }
    SUBCASE("Case II: single peak near (Δ+2ε₂)²/4 = 2.25e6") {
        const Histogram h = quantum_dos({0.0, 1500.0}, 1700, 60, 0.0, 3.0e6);
        const double peak = dos_peak_location(h);
        CHECK(std::abs(peak - 2.25e6) <= 2.0 * h.bin_width());
    }
    SUBCASE("empty window throws") {
        CHECK_THROWS_AS(quantum_dos({175.0, 3.0}, 100, 10, 1.0e9, 2.0e9), std::runtime_error);
        CHECK_THROWS_AS(quantum_dos({175.0, 3.0}, 100, 10, 10.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("quantum_dos: Case III peak and step at the closed-form energies (Fig-1 scale)") {
    // peak at 2Δε₂ = 2.4e6, step at (Δ+2ε₂)²/4 = 3.61e6
    const Histogram h = quantum_dos({3000.0, 400.0}, 2080, 96, 0.0, 4.8e6);
    const double peak = dos_peak_location(h);
    CHECK(std::abs(peak - 2.4e6) <= 2.0 * h.bin_width());
    const double step = dos_step_location(h);
    CHECK(std::abs(step - 3.61e6) <= 2.0 * h.bin_width());

    // second parameter set, same detector
    const Histogram h2 = quantum_dos({150.0, 3.0}, 800, 160, 0.0, 8000.0);
    CHECK(std::abs(dos_peak_location(h2) - 900.0) <= 2.0 * h2.bin_width());
    CHECK(std::abs(dos_step_location(h2) - 6084.0) <= 3.0 * h2.bin_width());
}

TEST_CASE("sweep_levels: single point reproduces eigensolve; deterministic and parallel-stable") {
    const double grid1[] = {27.0};
    const LevelSweep one = sweep_levels(3.0, grid1, 12, 60);
    const std::vector<double> even = eigenvalues_only({27.0, 3.0}, 60, Parity::even);
    const std::vector<double> odd = eigenvalues_only({27.0, 3.0}, 60, Parity::odd);
    const double e0 = std::min(even.front(), odd.front());
    CHECK(one.entries[0][0].excitation == 0.0);
    // merged ascending excitation must match the block spectra exactly
    std::vector<double> merged;
    for (double e : even) merged.push_back(e - e0);
    for (double e : odd) merged.push_back(e - e0);
    std::sort(merged.begin(), merged.end());
    for (int k = 0; k < 12; ++k)
        CHECK(one.entries[0][k].excitation == doctest::Approx(merged[k]).epsilon(1e-13));

    const double grid[] = {25.0, 25.5, 26.0};
    const LevelSweep par = sweep_levels(3.0, grid, 20, 80, true);
    const LevelSweep ser = sweep_levels(3.0, grid, 20, 80, false);
    for (std::size_t i = 0; i < par.entries.size(); ++i)
        for (int k = 0; k < 20; ++k) {
            CHECK(par.entries[i][k].excitation == ser.entries[i][k].excitation);
            CHECK(par.entries[i][k].parity == ser.entries[i][k].parity);
        }
    CHECK_THROWS_AS(sweep_levels(3.0, std::vector<double>{2.0, 1.0}, 5, 40),
                    std::invalid_argument);
}

TEST_CASE("doublets below the first ESQPT kiss; even Δ keeps them degenerate throughout") {
    SUBCASE("deep doublets are quasi-degenerate at any Δ") {
        for (double delta : {25.0, 26.5, 28.0, 29.0}) {
            const double e_esqpt = 6.0 * delta;
            const auto pairs = doublet_splittings({delta, 3.0}, 0.5 * e_esqpt, 150);
            REQUIRE(pairs.size() >= 3);
            for (std::size_t k = 0; k + 1 < pairs.size(); ++k) {
                const double spacing = pairs[k + 1].excitation - pairs[k].excitation;
                CHECK(pairs[k].splitting < 1e-4 * spacing);
            }
        }
    }
    SUBCASE("even Δ: degeneracy is not lifted approaching the ESQPT") {
        for (double delta : {26.0, 30.0}) {
            const auto pairs = doublet_splittings({delta, 3.0}, 0.95 * 6.0 * delta, 150);
            for (const auto& pair : pairs) CHECK(pair.splitting < 1e-9);
        }
    }
    SUBCASE("odd Δ: splittings become visible just below the ESQPT") {
        const auto pairs = doublet_splittings({29.0, 3.0}, 0.999 * 174.0, 150);
        REQUIRE(pairs.size() >= 8);
        CHECK(pairs.back().splitting > 1.0);
    }
}

TEST_CASE("find_crossings: desk-scale window reproduces the integer pattern") {
    std::vector<double> grid;
    for (double d = 25.5; d <= 28.5 + 1e-9; d += 0.05) grid.push_back(d);
    const LevelSweep sweep = sweep_levels(3.0, grid, 60, 120);
    const auto records = find_crossings(sweep, 180.0, 230.0, 1e-8);
    REQUIRE(!records.empty());

    bool saw26 = false, saw28 = false, saw27 = false;
    for (const auto& rec : records) {
        if (rec.kind == CrossingKind::real) {
            CHECK(rec.level_a.second != rec.level_b.second); // parities differ
            CHECK(rec.gap < 1e-8);
            const bool near26 = std::abs(rec.delta_location - 26.0) < 0.05;
            const bool near28 = std::abs(rec.delta_location - 28.0) < 0.05;
            CHECK((near26 || near28));
            saw26 = saw26 || near26;
            saw28 = saw28 || near28;
        } else {
            CHECK(rec.level_a.second == rec.level_b.second); // same parity
            const bool near27 = std::abs(rec.delta_location - 27.0) < 0.05;
            CHECK(near27);
            saw27 = saw27 || near27;
        }
    }
    CHECK(saw26);
    CHECK(saw28);
    CHECK(saw27);
}

TEST_CASE("find_crossings: integrable diagonal limit crosses exactly at Δ = n+m-1") {
    // eps2 = 0: levels E_n(Δ) = -Δn + n(n-1); pairs (n,m) cross at Δ = n+m-1
    // with energy -nm, opposite parity iff n+m odd (real crossings at even Δ).
    std::vector<double> grid;
    for (double d = 5.6; d <= 6.4 + 1e-9; d += 0.05) grid.push_back(d);
    const LevelSweep sweep = sweep_levels(0.0, grid, 30, 60);
    // window: inter-ESQPT band (0, Δ²/4); pick a slice holding the (2,5) crossing
    const auto records = find_crossings(sweep, 1.0, 8.9, 1e-8);
    bool found_25 = false;
    for (const auto& rec : records) {
        if (rec.kind != CrossingKind::real) continue;
        CHECK(std::abs(rec.delta_location - 6.0) < 1e-6);
        // excitation of the crossing pair: -nm - E0; for (1,6): -6, (2,5): -10
        found_25 = true;
    }
    CHECK(found_25);
}

TEST_CASE("doublet_splittings") {
    SUBCASE("desk scale: exponential quasi-degeneracy below the ESQPT") {
        const auto splittings = doublet_splittings({175.0, 3.0}, 840.0, 400);
        REQUIRE(splittings.size() > 3);
        // lowest doublet far below the local mean pair spacing
        const double spacing = splittings[1].excitation - splittings[0].excitation;
        CHECK(splittings[0].splitting < 1e-8 * spacing);
        for (std::size_t k = 0; k + 1 < splittings.size(); ++k)
            CHECK(splittings[k].excitation <= splittings[k + 1].excitation);
    }
    SUBCASE("splittings grow on average approaching the ESQPT energy (odd Δ)") {
        const auto splittings = doublet_splittings({29.0, 3.0}, 0.98 * 174.0, 120);
        REQUIRE(splittings.size() >= 6);
        const std::size_t third = splittings.size() / 3;
        double lo = 0.0, hi = 0.0;
        for (std::size_t k = 0; k < third; ++k) lo += splittings[k].splitting;
        for (std::size_t k = splittings.size() - third; k < splittings.size(); ++k)
            hi += splittings[k].splitting;
        CHECK(hi > lo);
    }
    SUBCASE("diagonal limit: lowest pair splitting equals |E1 - E0|") {
        // eps2 = 0, Δ = -6: E_n = 6n + n(n-1), so |E1 - E0| = 6
        const auto splittings = doublet_splittings({-6.0, 0.0}, 100.0, 40);
        REQUIRE(!splittings.empty());
        CHECK(splittings[0].splitting == doctest::Approx(6.0).epsilon(1e-13));
    }
}

TEST_CASE("participation_ratio") {
    std::vector<double> basis(64, 0.0);
    basis[5] = 1.0;
    CHECK(participation_ratio(std::span<const double>(basis)) == doctest::Approx(1.0));

    std::vector<std::complex<double>> uniform(64, {0.125, 0.0}); // 1/√64
    CHECK(participation_ratio(std::span<const std::complex<double>>(uniform)) ==
          doctest::Approx(64.0).epsilon(1e-12));

    std::vector<double> zero(8, 0.0);
    CHECK_THROWS_AS(participation_ratio(std::span<const double>(zero)), std::invalid_argument);
}
