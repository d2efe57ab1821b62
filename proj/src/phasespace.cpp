#include "kerrosc/phasespace.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "kerrosc/parallel.hpp"

namespace kerrosc {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.7071067811865475244;
} // namespace

double QuantumState::norm() const {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::norm(c);
    return std::sqrt(s);
}

void QuantumState::assert_normalized(double tol) const {
    if (coeffs.empty()) throw std::invalid_argument("QuantumState: empty state");
    if (std::abs(norm() - 1.0) > tol)
        throw std::invalid_argument("QuantumState: state is not normalized");
}

double QuantumState::tail_weight(double frac) const {
    const int n = size();
    const int start = n - std::max(1, static_cast<int>(std::floor(frac * n)));
    double w = 0.0;
    for (int i = start; i < n; ++i) w += std::norm(coeffs[i]);
    return w;
}

int QuantumState::effective_support(double drop) const {
    double tail = 0.0;
    for (int i = size() - 1; i >= 0; --i) {
        tail += std::norm(coeffs[i]);
        if (tail > drop) return i + 1;
    }
    return 1;
}

QuantumState coherent_coefficients(double q0, double p0, int n_fock) {
    if (n_fock < 1) throw std::invalid_argument("coherent_coefficients: n_fock must be >= 1");
    const double lam = 0.5 * (q0 * q0 + p0 * p0); // |α|²
    QuantumState state;
    state.coeffs.assign(n_fock, {0.0, 0.0});
    if (lam == 0.0) {
        state.coeffs[0] = 1.0;
        return state;
    }
    // Poisson tail beyond the truncation: P(n ≥ N) for mean λ
    const double tail = boost::math::gamma_p(static_cast<double>(n_fock), lam);
    if (tail > 1e-10) {
        std::ostringstream msg;
        msg << "coherent_coefficients: truncation too small (|alpha|^2 = " << lam
            << ", tail = " << tail << "); increase n_fock";
        throw std::runtime_error(msg.str());
    }
    const double log_r = 0.5 * std::log(lam);
    const double theta = std::atan2(p0, q0); // arg α
    for (int n = 0; n < n_fock; ++n) {
        const double log_mod = n * log_r - 0.5 * lam - 0.5 * std::lgamma(n + 1.0);
        const double mod = std::exp(log_mod);
        state.coeffs[n] = {mod * std::cos(n * theta), mod * std::sin(n * theta)};
    }
    const double nrm = state.norm();
    for (auto& c : state.coeffs) c /= nrm;
    return state;
}

namespace {

// Shared fast path for Q(q,p): ⟨α|ψ⟩ through the stable recurrence
// g_{n+1} = g_n · α* / √(n+1) with g_0 = e^{-|α|²/2}; every |g_n| ≤ 1.
// For |α|² beyond exp underflow the prefactor is split off and restored
// after the sum.
class HusimiEvaluator {
  public:
    explicit HusimiEvaluator(const QuantumState& state)
        : coeffs_(state.coeffs.data()), n_eff_(state.effective_support()) {
        inv_sqrt_.resize(n_eff_);
        for (int n = 1; n < n_eff_; ++n) inv_sqrt_[n] = 1.0 / std::sqrt(static_cast<double>(n));
    }

    int effective_support() const { return n_eff_; }

    double operator()(double q, double p) const noexcept {
        const double ar = q * kInvSqrt2;  // Re α*
        const double ai = -p * kInvSqrt2; // Im α*
        const double lam = ar * ar + ai * ai;
        double scale_log = 0.0;
        double ex = -0.5 * lam;
        if (ex < -690.0) { // keep g_0 representable
            scale_log = ex + 350.0;
            ex = -350.0;
        }
        double gr = std::exp(ex), gi = 0.0;
        double sr = 0.0, si = 0.0;
        const std::complex<double>* c = coeffs_;
        sr = c[0].real() * gr;
        si = c[0].imag() * gr;
        for (int n = 1; n < n_eff_; ++n) {
            const double w = inv_sqrt_[n];
            const double tr = (gr * ar - gi * ai) * w;
            const double ti = (gr * ai + gi * ar) * w;
            gr = tr;
            gi = ti;
            sr += c[n].real() * gr - c[n].imag() * gi;
            si += c[n].real() * gi + c[n].imag() * gr;
        }
        double q_val = (sr * sr + si * si) / kPi;
        if (scale_log != 0.0) q_val *= std::exp(2.0 * scale_log);
        return q_val;
    }

  private:
    const std::complex<double>* coeffs_;
    int n_eff_;
    std::vector<double> inv_sqrt_;
};

} // namespace

double husimi(const QuantumState& state, double q, double p) {
    state.assert_normalized();
    return HusimiEvaluator(state)(q, p);
}

HusimiField husimi_grid(const QuantumState& state, double q_min, double q_max, double p_min,
                        double p_max, int nq, int np, bool parallel) {
    state.assert_normalized();
    if (nq < 2 || np < 2) throw std::invalid_argument("husimi_grid: need nq, np >= 2");
    if (!(q_max > q_min) || !(p_max > p_min))
        throw std::invalid_argument("husimi_grid: empty bounds");
    HusimiField field;
    field.q_min = q_min;
    field.q_max = q_max;
    field.p_min = p_min;
    field.p_max = p_max;
    field.nq = nq;
    field.np = np;
    field.values.assign(static_cast<std::size_t>(nq) * np, 0.0);
    const HusimiEvaluator eval(state);
    parallel_for(
        static_cast<std::size_t>(np),
        [&](std::size_t ip) {
            const double p = field.p_at(static_cast<int>(ip));
            double* row = field.values.data() + ip * nq;
            for (int iq = 0; iq < nq; ++iq) row[iq] = eval(field.q_at(iq), p);
        },
        parallel);
    return field;
}

double husimi_tail_outside(const QuantumState& state, double radius) {
    const double x = 0.5 * radius * radius; // |α|² at the rim
    double tail = 0.0;
    for (int n = 0; n < state.size(); ++n) {
        const double w = std::norm(state.coeffs[n]);
        if (w == 0.0) continue;
        tail += w * boost::math::gamma_q(n + 1.0, x);
    }
    return tail;
}

double state_energy(const QuantumState& state, const ModelParams& params) {
    double e = 0.0;
    const int n = state.size();
    for (int i = 0; i < n; ++i) {
        const double w = std::norm(state.coeffs[i]);
        if (w > 0.0) e += w * matrix_element(params, i, i);
        if (i + 2 < n) {
            const double o = matrix_element(params, i, i + 2);
            e += 2.0 * o * (state.coeffs[i] * std::conj(state.coeffs[i + 2])).real();
        }
    }
    return e;
}

double suggest_disk_radius(const QuantumState& state, const ModelParams& params,
                           double tail_tol) {
    state.assert_normalized(1e-8);
    const double e_state = state_energy(state, params);
    const double e_min = classical_ground_energy(params);
    const double target = e_state + 0.25 * std::max(0.0, e_state - e_min);
    const double s = params.delta + 2.0 * params.eps2;
    const double arg = std::max(0.0, s * s + 4.0 * target);
    const double z_req = 0.5 * (s + std::sqrt(arg));
    double radius = std::sqrt(std::max(0.0, 2.0 * z_req)) + 5.0;
    for (int i = 0; i < 200; ++i) {
        if (husimi_tail_outside(state, radius) < tail_tol) return radius;
        radius *= 1.25;
    }
    throw std::runtime_error("suggest_disk_radius: could not contain the Husimi tail");
}

RegionVolumes husimi_volumes(const QuantumState& state, const ModelParams& params,
                             std::uint64_t samples, std::uint64_t seed, double radius,
                             bool parallel) {
    state.assert_normalized(1e-8);
    if (samples < 10000)
        throw std::invalid_argument("husimi_volumes: need at least 1e4 samples");
    const RegionClassifier classifier(params);

    if (radius <= 0.0) {
        radius = suggest_disk_radius(state, params);
    } else {
        const double tail = husimi_tail_outside(state, radius);
        if (tail > 1e-4) {
            double suggested = radius;
            while (husimi_tail_outside(state, suggested) > 1e-4) suggested *= 1.25;
            std::ostringstream msg;
            msg << "husimi_volumes: bounding disk too small (tail " << tail
                << " outside radius " << radius << "); suggested radius " << suggested;
            throw std::runtime_error(msg.str());
        }
    }

    const HusimiEvaluator eval(state);
    const double area = kPi * radius * radius;
    const CounterRng base(seed);

    RegionVolumes out;
    out.samples = samples;
    out.disk_radius = radius;
    out.tail_outside = husimi_tail_outside(state, radius);

    struct Acc {
        double sum = 0.0, sum_sq = 0.0;
    };
    std::array<double, 4> raw{}, raw_se{};
    for (int r = 0; r < 4; ++r) {
        const CounterRng stream = base.derive(static_cast<std::uint64_t>(r));
        const Region region = static_cast<Region>(r);
        const Acc acc = batched_reduce(
            samples, kDefaultBatch, Acc{},
            [&](std::size_t lo, std::size_t hi) {
                Acc a;
                for (std::size_t i = lo; i < hi; ++i) {
                    const double u1 = stream.uniform(2 * i);
                    const double u2 = stream.uniform(2 * i + 1);
                    const double rr = radius * std::sqrt(u1);
                    const double th = 2.0 * kPi * u2;
                    const double q = rr * std::cos(th);
                    const double p = rr * std::sin(th);
                    if (classifier.classify(q, p) != region) continue;
                    const double f = eval(q, p);
                    a.sum += f;
                    a.sum_sq += f * f;
                }
                return a;
            },
            [](Acc a, const Acc& b) {
                a.sum += b.sum;
                a.sum_sq += b.sum_sq;
                return a;
            },
            parallel);
        const double n = static_cast<double>(samples);
        const double mean = acc.sum / n;
        const double var = std::max(0.0, acc.sum_sq / n - mean * mean);
        raw[r] = area * mean;
        raw_se[r] = area * std::sqrt(var / (n - 1.0));
    }

    const double total = raw[0] + raw[1] + raw[2] + raw[3];
    if (!(total > 0.0)) throw std::runtime_error("husimi_volumes: zero total Husimi mass in disk");
    out.raw_total = total;
    for (int r = 0; r < 4; ++r) {
        VolumeEstimate& est = out.region[r];
        est.raw = raw[r];
        est.raw_stderr = raw_se[r];
        est.value = raw[r] / total;
        // delta method for the ratio with independent region streams
        double var = (total - raw[r]) * (total - raw[r]) * raw_se[r] * raw_se[r];
        for (int j = 0; j < 4; ++j)
            if (j != r) var += raw[r] * raw[r] * raw_se[j] * raw_se[j];
        est.stderr_ = std::sqrt(var) / (total * total);
    }
    return out;
}

std::pair<double, double> husimi_volume(const QuantumState& state, Region region,
                                        const ModelParams& params, std::uint64_t samples,
                                        std::uint64_t seed) {
    const RegionVolumes volumes = husimi_volumes(state, params, samples, seed);
    const VolumeEstimate& est = volumes.of(region);
    return {est.value, est.stderr_};
}

} // namespace kerrosc
