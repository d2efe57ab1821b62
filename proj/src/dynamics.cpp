#include "kerrosc/dynamics.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kerrosc/classical.hpp"
#include "kerrosc/semiclassical.hpp"

namespace kerrosc {

namespace {

std::complex<double> block_overlap(const SpectrumBlock& block, int k, const QuantumState& state) {
    // ⟨ψ_k|Ψ⟩ with real eigenvector ψ_k
    const auto v = block.vec(k);
    const int offset = block.parity == Parity::odd ? 1 : 0;
    std::complex<double> acc = 0.0;
    for (int m = 0; m < block.block_size; ++m) acc += v[m] * state.coeffs[2 * m + offset];
    return acc;
}

} // namespace

Evolver::Evolver(const SpectrumBlock& even, const SpectrumBlock& odd, const QuantumState& state0) {
    if (even.parity != Parity::even || odd.parity != Parity::odd)
        throw std::invalid_argument("Evolver: blocks passed in wrong parity order");
    if (even.block_size != odd.block_size)
        throw std::invalid_argument("Evolver: parity blocks of unequal size");
    dim_ = 2 * even.block_size;
    if (state0.size() != dim_)
        throw std::invalid_argument("Evolver: state dimension does not match blocks");
    state0.assert_normalized(1e-8);

    storage_.reserve(even.vectors.size() + odd.vectors.size());
    for (const SpectrumBlock* block : {&even, &odd}) {
        const int bs = block->block_size;
        const int offset = block->parity == Parity::odd ? 1 : 0;
        for (int k = 0; k < block->count(); ++k) {
            const std::complex<double> o = block_overlap(*block, k, state0);
            const double weight = std::norm(o);
            completeness_ += weight;
            if (weight < 1e-18) continue; // negligible mode
            const std::size_t pos = storage_.size();
            const auto v = block->vec(k);
            storage_.insert(storage_.end(), v.begin(), v.end());
            // reserve above keeps storage_.data() stable
            modes_.push_back({block->energies[k], o, storage_.data() + pos, bs, offset});
        }
    }

    if (completeness_ < 1.0 - 1e-8) {
        std::ostringstream msg;
        msg << "Evolver: eigenbasis incomplete for this state (sum |overlap|^2 = "
            << completeness_ << ")";
        throw std::runtime_error(msg.str());
    }
}

QuantumState Evolver::state_at(double t) const {
    QuantumState out;
    out.coeffs.assign(dim_, {0.0, 0.0});
    for (const Mode& mode : modes_) {
        const std::complex<double> w =
            mode.overlap * std::complex<double>(std::cos(mode.energy * t),
                                                -std::sin(mode.energy * t));
        std::complex<double>* dst = out.coeffs.data() + mode.offset;
        const double* v = mode.vec;
        for (int m = 0; m < mode.block_size; ++m) dst[2 * m] += w * v[m];
    }
    return out;
}

QuantumState evolve(const QuantumState& state0, const SpectrumBlock& even,
                    const SpectrumBlock& odd, double t) {
    return Evolver(even, odd, state0).state_at(t);
}

QuantumState ground_state_of(const ModelParams& params, int n_block) {
    const SpectrumBlock even = eigensolve(params, n_block, Parity::even, 1);
    const SpectrumBlock odd = eigensolve(params, n_block, Parity::odd, 1);
    const SpectrumBlock& lowest = even.energies[0] <= odd.energies[0] ? even : odd;
    const std::vector<double> full = lowest.full_vector(0);
    QuantumState state;
    state.coeffs.assign(full.begin(), full.end());
    return state;
}

QuantumState state_from_eigenvector(const SpectrumBlock& block, int k) {
    const std::vector<double> full = block.full_vector(k);
    QuantumState state;
    state.coeffs.assign(full.begin(), full.end());
    return state;
}

TunnelingTrace compute_trace(const Evolver& evolver, const ModelParams& params, double t0,
                             double t1, int n_times, const McSettings& mc, double radius) {
    if (n_times < 2) throw std::invalid_argument("compute_trace: need at least 2 time samples");
    if (!(t1 > t0)) throw std::invalid_argument("compute_trace: need t1 > t0");

    TunnelingTrace trace;
    trace.mc = mc;
    trace.times.resize(n_times);
    const double h = (t1 - t0) / (n_times - 1);
    for (int i = 0; i < n_times; ++i) trace.times[i] = t0 + i * h;

    if (radius <= 0.0) {
        // the rule-based radius is time-invariant (energy conserved); take the
        // max of the Fock-tail expansions at a few probe times
        for (double t : {t0, 0.5 * (t0 + t1), t1})
            radius = std::max(radius, suggest_disk_radius(evolver.state_at(t), params));
    }
    trace.disk_radius = radius;

    for (int r = 0; r < 4; ++r) {
        trace.volume[r].resize(n_times);
        trace.volume_se[r].resize(n_times);
    }
    trace.raw_total.resize(n_times);

    const CounterRng delta_stream = CounterRng(mc.seed).derive(stream_tag(params.delta));
    for (int i = 0; i < n_times; ++i) {
        const QuantumState state = evolver.state_at(trace.times[i]);
        const std::uint64_t seed_i = delta_stream.derive(static_cast<std::uint64_t>(i)).key();
        const RegionVolumes volumes = husimi_volumes(state, params, mc.samples, seed_i, radius);
        for (int r = 0; r < 4; ++r) {
            trace.volume[r][i] = volumes.region[r].value;
            trace.volume_se[r][i] = volumes.region[r].stderr_;
        }
        trace.raw_total[i] = volumes.raw_total;
    }
    effective_tunneling(trace, t0);
    return trace;
}

namespace {

int grid_index_of(const std::vector<double>& times, double t, const char* what) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double scale = std::max(1.0, std::abs(times[i]));
        if (std::abs(times[i] - t) < 1e-9 * scale) return static_cast<int>(i);
    }
    std::ostringstream msg;
    msg << what << ": t = " << t << " is not a recorded time";
    throw std::invalid_argument(msg.str());
}

} // namespace

void effective_tunneling(TunnelingTrace& trace, double t0) {
    const int i0 = grid_index_of(trace.times, t0, "effective_tunneling");
    trace.t0_index = i0;
    const int n = static_cast<int>(trace.times.size());
    for (int r = 0; r < 4; ++r) {
        trace.tunneling[r].assign(n, 0.0);
        trace.tunneling_se[r].assign(n, 0.0);
        for (int i = 0; i < n; ++i) {
            trace.tunneling[r][i] = trace.volume[r][i] - trace.volume[r][i0];
            trace.tunneling_se[r][i] =
                i == i0 ? 0.0
                        : std::sqrt(trace.volume_se[r][i] * trace.volume_se[r][i] +
                                    trace.volume_se[r][i0] * trace.volume_se[r][i0]);
        }
    }
}

MeanTunneling mean_effective_tunneling(const TunnelingTrace& trace, double t, double t0) {
    const int i0 = grid_index_of(trace.times, t0, "mean_effective_tunneling");
    const int i1 = grid_index_of(trace.times, t, "mean_effective_tunneling");
    if (i1 <= i0)
        throw std::invalid_argument("mean_effective_tunneling: need t > t0 on the grid");

    const double span = trace.times[i1] - trace.times[i0];
    MeanTunneling out;
    for (int r = 0; r < 4; ++r) {
        // trapezoid weights c_i on V_i, then subtract V_{i0} (weights sum to 1)
        double mean = 0.0;
        double var = 0.0;
        for (int i = i0; i <= i1; ++i) {
            const double h_left = i > i0 ? trace.times[i] - trace.times[i - 1] : 0.0;
            const double h_right = i < i1 ? trace.times[i + 1] - trace.times[i] : 0.0;
            const double c = 0.5 * (h_left + h_right) / span;
            mean += c * (trace.volume[r][i] - trace.volume[r][i0]);
            const double a = (i == i0) ? c - 1.0 : c; // -V_{i0} folded into its own node
            var += a * a * trace.volume_se[r][i] * trace.volume_se[r][i];
        }
        out.mean[r] = mean;
        out.stderr_[r] = std::sqrt(var);
    }
    return out;
}

const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::coherent_out: return "coherent-out";
        case Scenario::coherent_hyperbolic: return "hyperbolic";
        case Scenario::quench: return "quench";
    }
    return "?";
}

InitialState initial_state_for(Scenario scenario, const ModelParams& params,
                               const ScenarioOptions& opts) {
    params.validate();
    if (classify_regime(params) != Regime::III)
        throw std::invalid_argument("initial_state_for: scenarios require Case III parameters");
    const int n_fock = 2 * opts.n_block;

    if (scenario == Scenario::quench) {
        InitialState init;
        init.state = ground_state_of({opts.quench_delta0, params.eps2}, opts.n_block);
        init.energy = state_energy(init.state, params);
        return init;
    }

    const double e_sx = separatrix_energy(params);
    const double e_esqpt = *esqpt_energies(params).e_esqpt;

    if (scenario == Scenario::coherent_out) {
        // on the p-axis, just outside the separatrix
        const double e_target = e_sx + opts.energy_offset_frac * e_esqpt;
        if (!(e_target < 0.0))
            throw std::invalid_argument(
                "initial_state_for: coherent-out energy offset pushes past E'_step");
        const double a = params.delta - 2.0 * params.eps2;
        const double z = 0.5 * (a + std::sqrt(a * a + 4.0 * e_target));
        InitialState init;
        init.q0 = 0.0;
        init.p0 = std::sqrt(2.0 * z);
        if (classify_region(params, {init.q0, init.p0}) != Region::omega_out)
            throw std::invalid_argument(
                "initial_state_for: coherent-out center failed the Omega_out constraint");
        init.state = coherent_coefficients(init.q0, init.p0, n_fock);
        init.energy = state_energy(init.state, params);
        return init;
    }

    // coherent_hyperbolic: in Ω_l at the hyperbolic momentum, energy below E_sx
    const double e_target = e_sx - opts.energy_offset_frac * e_esqpt;
    const double p_hyp = std::sqrt(params.delta - 2.0 * params.eps2);
    auto f = [&](double q) { return classical_energy(params, {q, p_hyp}) - e_target; };
    double q_lo = -0.25;
    int guard = 0;
    while (f(q_lo) > 0.0) {
        q_lo *= 2.0;
        if (++guard > 64)
            throw std::invalid_argument(
                "initial_state_for: no Omega_l point at the requested energy");
    }
    boost::uintmax_t max_iter = 120;
    auto stop = [](double a_, double b_) { return std::abs(b_ - a_) < 1e-12; };
    const auto bracket = boost::math::tools::toms748_solve(f, q_lo, 0.0, stop, max_iter);
    InitialState init;
    init.q0 = 0.5 * (bracket.first + bracket.second);
    init.p0 = p_hyp;
    if (classify_region(params, {init.q0, init.p0}) != Region::omega_l)
        throw std::invalid_argument(
            "initial_state_for: hyperbolic center failed the Omega_l constraint");
    init.state = coherent_coefficients(init.q0, init.p0, n_fock);
    init.energy = state_energy(init.state, params);
    return init;
}

SweepResult tunneling_sweep(Scenario scenario, double eps2, std::span<const double> delta_grid,
                            double t0, double t1, const McSettings& mc,
                            const ScenarioOptions& opts) {
    if (delta_grid.empty()) throw std::invalid_argument("tunneling_sweep: empty grid");
    SweepResult result;
    result.scenario = scenario;
    result.eps2 = eps2;
    result.t0 = t0;
    result.t1 = t1;
    result.points.reserve(delta_grid.size());

    const std::uint64_t scenario_seed =
        CounterRng(mc.seed).derive(static_cast<std::uint64_t>(scenario)).key();

    for (double delta : delta_grid) {
        const ModelParams params{delta, eps2};
        if (classify_regime(params) != Regime::III) {
            std::ostringstream msg;
            msg << "tunneling_sweep: delta = " << delta << " is not Case III for eps2 = " << eps2;
            throw std::invalid_argument(msg.str());
        }
        const InitialState init = initial_state_for(scenario, params, opts);
        const SpectrumBlock even = eigensolve(params, opts.n_block, Parity::even, opts.n_block);
        const SpectrumBlock odd = eigensolve(params, opts.n_block, Parity::odd, opts.n_block);
        const Evolver evolver(even, odd, init.state);
        const TunnelingTrace trace = compute_trace(evolver, params, t0, t1, opts.n_times,
                                                   {mc.samples, scenario_seed});
        SweepPoint point;
        point.delta = delta;
        point.means = mean_effective_tunneling(trace, t1, t0);
        point.q0 = init.q0;
        point.p0 = init.p0;
        point.disk_radius = trace.disk_radius;
        result.points.push_back(point);
    }
    return result;
}

} // namespace kerrosc
