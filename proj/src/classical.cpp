#include "kerrosc/classical.hpp"

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <stdexcept>

namespace kerrosc {

double classical_energy(const ModelParams& params, const PhasePoint& pt) {
    const double r2 = pt.q * pt.q + pt.p * pt.p;
    return -0.5 * params.delta * r2 + 0.25 * r2 * r2 - params.eps2 * (pt.q * pt.q - pt.p * pt.p);
}

PhasePoint hamilton_rhs(const ModelParams& params, const PhasePoint& pt) {
    const double r2 = pt.q * pt.q + pt.p * pt.p;
    return {-pt.p * (params.delta - r2 - 2.0 * params.eps2),
            pt.q * (params.delta - r2 + 2.0 * params.eps2)};
}

Regime classify_regime(const ModelParams& params) {
    params.validate();
    if (params.delta <= -2.0 * params.eps2) return Regime::I;
    if (params.delta <= 2.0 * params.eps2) return Regime::II;
    return Regime::III;
}

std::vector<StationaryPoint> stationary_points(const ModelParams& params) {
    const Regime regime = classify_regime(params);
    std::vector<StationaryPoint> pts;
    const double d = params.delta;
    const double e2 = params.eps2;

    const Stability origin_stability = regime == Regime::I    ? Stability::minimum
                                       : regime == Regime::II ? Stability::hyperbolic
                                                              : Stability::local_maximum;
    pts.push_back({CriticalLabel::r0, {0.0, 0.0}, 0.0, origin_stability});

    if (regime == Regime::III) {
        const double p1 = std::sqrt(d - 2.0 * e2);
        const double e_r1 = -0.25 * (d - 2.0 * e2) * (d - 2.0 * e2);
        pts.push_back({CriticalLabel::r1_plus, {0.0, p1}, e_r1, Stability::hyperbolic});
        pts.push_back({CriticalLabel::r1_minus, {0.0, -p1}, e_r1, Stability::hyperbolic});
    }
    if (regime != Regime::I) {
        const double q2 = std::sqrt(d + 2.0 * e2);
        const double e_r2 = -0.25 * (d + 2.0 * e2) * (d + 2.0 * e2);
        pts.push_back({CriticalLabel::r2_plus, {q2, 0.0}, e_r2, Stability::minimum});
        pts.push_back({CriticalLabel::r2_minus, {-q2, 0.0}, e_r2, Stability::minimum});
    }
    return pts;
}

EsqptEnergies esqpt_energies(const ModelParams& params) {
    const Regime regime = classify_regime(params);
    EsqptEnergies out;
    const double d = params.delta;
    const double e2 = params.eps2;
    if (regime == Regime::II) {
        out.e_esqpt = 0.25 * (d + 2.0 * e2) * (d + 2.0 * e2);
    } else if (regime == Regime::III) {
        out.e_esqpt = 2.0 * d * e2;
        out.e_step = 0.25 * (d + 2.0 * e2) * (d + 2.0 * e2);
    }
    return out;
}

double classical_ground_energy(const ModelParams& params) {
    if (classify_regime(params) == Regime::I) return 0.0;
    const double s = params.delta + 2.0 * params.eps2;
    return -0.25 * s * s;
}

double separatrix_energy(const ModelParams& params) {
    if (classify_regime(params) != Regime::III)
        throw std::domain_error("separatrix_energy: defined only in Case III");
    const double s = params.delta - 2.0 * params.eps2;
    return -0.25 * s * s;
}

const char* to_string(Region r) {
    switch (r) {
        case Region::omega_l: return "l";
        case Region::omega_r: return "r";
        case Region::omega_in: return "in";
        case Region::omega_out: return "out";
    }
    return "?";
}

RegionClassifier::RegionClassifier(const ModelParams& params) {
    if (classify_regime(params) != Regime::III)
        throw std::domain_error("regions undefined outside Case III");
    delta_ = params.delta;
    two_eps2_ = 2.0 * params.eps2;
    const double s = params.delta - two_eps2_;
    sep_sq_ = s * s;
}

Region RegionClassifier::classify(double q, double p) const noexcept {
    const double r2 = q * q + p * p;
    const double z = 0.5 * r2;
    if (r2 == 0.0) return Region::omega_in;
    // γ = 2ε₂ cos2φ with cos2φ = (p²-q²)/(q²+p²); q = √(2z) sinφ, p = √(2z) cosφ
    const double gamma = two_eps2_ * (p * p - q * q) / r2;
    const double a = delta_ - gamma;
    const double disc = a * a - sep_sq_; // ≥ 0 in Case III up to rounding
    const double root = std::sqrt(disc > 0.0 ? disc : 0.0);
    const double z_minus = 0.5 * (a - root);
    const double z_plus = 0.5 * (a + root);
    if (z < z_minus) return Region::omega_in;
    if (z > z_plus) return Region::omega_out;
    return q < 0.0 ? Region::omega_l : Region::omega_r;
}

Region classify_region(const ModelParams& params, const PhasePoint& pt) {
    return RegionClassifier(params).classify(pt.q, pt.p);
}

std::vector<PhasePoint> integrate_trajectory(const ModelParams& params, const PhasePoint& start,
                                             double t_end, double dt) {
    params.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_trajectory: dt must be > 0");
    if (!(t_end >= 0.0)) throw std::invalid_argument("integrate_trajectory: t_end must be >= 0");

    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;

    auto rhs = [&params](const State& x, State& dxdt, double /*t*/) {
        const PhasePoint v = hamilton_rhs(params, {x[0], x[1]});
        dxdt[0] = v.q;
        dxdt[1] = v.p;
    };

    std::vector<PhasePoint> out;
    out.reserve(static_cast<std::size_t>(t_end / dt) + 2);
    auto observer = [&out](const State& x, double /*t*/) { out.push_back({x[0], x[1]}); };

    auto stepper = odeint::make_dense_output(1e-12, 1e-10,
                                             odeint::runge_kutta_dopri5<State>());
    State x{start.q, start.p};
    try {
        odeint::integrate_const(stepper, rhs, x, 0.0, t_end + 0.5 * dt, dt, observer,
                                odeint::max_step_checker(10000000));
    } catch (const std::exception& ex) {
        throw std::runtime_error(std::string("integrate_trajectory: step-size underflow: ") +
                                 ex.what());
    }
    return out;
}

} // namespace kerrosc
