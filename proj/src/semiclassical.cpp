#include "kerrosc/semiclassical.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kerrosc/classical.hpp"

namespace kerrosc {

namespace {

constexpr double kPi = std::numbers::pi;

double gamma_of(const ModelParams& params, double phi) {
    return 2.0 * params.eps2 * std::cos(2.0 * phi);
}

template <class F>
double integrate_gk(F f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 20, tol);
}

// one-sided guard around the singular energies
void check_not_singular(const ModelParams& params, double energy) {
    const Regime regime = classify_regime(params);
    auto near = [&](double s) { return std::abs(energy - s) < 1e-9 * std::max(1.0, std::abs(s)); };
    if (regime == Regime::II && near(0.0))
        throw std::domain_error("semiclassical_dos: singular at the hyperbolic energy; "
                                "evaluate with a one-sided offset");
    if (regime == Regime::III && (near(separatrix_energy(params)) || near(0.0)))
        throw std::domain_error("semiclassical_dos: singular at an ESQPT energy; "
                                "evaluate with a one-sided offset");
}

} // namespace

std::vector<double> radial_roots(const ModelParams& params, double energy, double phi) {
    params.validate();
    const double a = params.delta - gamma_of(params, phi);
    const double disc = a * a + 4.0 * energy;
    std::vector<double> roots;
    if (disc < 0.0) return roots;
    const double s = std::sqrt(disc);
    const double z_minus = 0.5 * (a - s);
    const double z_plus = 0.5 * (a + s);
    if (s == 0.0) {
        if (z_plus >= 0.0) roots.push_back(z_plus); // double root
        return roots;
    }
    if (z_minus >= 0.0) roots.push_back(z_minus);
    if (z_plus >= 0.0) roots.push_back(z_plus);
    return roots;
}

// ρ(E) = (1/2π)∫₀^{2π} Σ_adm 1/√((Δ-γ)²+4E) dφ. The integrand depends on φ
// only through γ = 2ε₂cos2φ, so the full circle is 4× the quarter [0, π/2].
double semiclassical_dos(const ModelParams& params, double energy) {
    params.validate();
    const double e_min = classical_ground_energy(params);
    if (!(energy > e_min))
        throw std::domain_error("semiclassical_dos: energy at or below the global minimum");
    check_not_singular(params, energy);

    const double d = params.delta;
    const double tol = 1e-9;
    auto disc_at = [&](double phi) {
        const double a = d - gamma_of(params, phi);
        return a * a + 4.0 * energy;
    };

    if (energy > 0.0) {
        // single branch (z_+) at every angle
        auto f = [&](double phi) { return 1.0 / std::sqrt(disc_at(phi)); };
        // split at the interior minimum of disc (γ = Δ) if it exists
        double acc = 0.0;
        if (std::abs(d) < 2.0 * params.eps2) {
            const double phi_star = 0.5 * std::acos(std::clamp(d / (2.0 * params.eps2), -1.0, 1.0));
            acc = integrate_gk(f, 0.0, phi_star, tol) + integrate_gk(f, phi_star, 0.5 * kPi, tol);
        } else {
            acc = integrate_gk(f, 0.0, 0.5 * kPi, tol);
        }
        return (2.0 / kPi) * acc;
    }

    // E < 0: both roots admissible where Δ-γ ≥ 2√(-E), i.e. cos2φ ≤ u
    const double u = (d - 2.0 * std::sqrt(-energy)) / (2.0 * params.eps2);
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) {
        auto f = [&](double phi) { return 2.0 / std::sqrt(disc_at(phi)); };
        return (2.0 / kPi) * integrate_gk(f, 0.0, 0.5 * kPi, tol);
    }
    // turning angle with a 1/√ endpoint: substitute φ = φ_c + t²
    const double phi_c = 0.5 * std::acos(u);
    auto g = [&](double t) { return 4.0 * t / std::sqrt(disc_at(phi_c + t * t)); };
    const double t_max = std::sqrt(0.5 * kPi - phi_c);
    return (2.0 / kPi) * integrate_gk(g, 0.0, t_max, tol);
}

double semiclassical_count(const ModelParams& params, double lo, double hi, int panels) {
    if (!(hi > lo)) throw std::invalid_argument("semiclassical_count: need hi > lo");
    if (panels < 1) panels = 1;
    double acc = 0.0;
    const double width = (hi - lo) / panels;
    for (int i = 0; i < panels; ++i) {
        const double a = lo + i * width;
        acc += boost::math::quadrature::gauss<double, 31>::integrate(
            [&](double e) { return semiclassical_dos(params, e); }, a, a + width);
    }
    return acc;
}

double ebk_action(const ModelParams& params, double energy, Branch branch) {
    params.validate();
    if (classify_regime(params) != Regime::III)
        throw std::domain_error("ebk_action: requires Case III");
    const double e_sx = separatrix_energy(params);
    if (!(energy > e_sx && energy < 0.0))
        throw std::domain_error("ebk_action: energy outside the inter-ESQPT window");
    const double sign = branch == Branch::outer ? 1.0 : -1.0;
    auto z = [&](double phi) {
        const double a = params.delta - gamma_of(params, phi);
        return 0.5 * (a + sign * std::sqrt(a * a + 4.0 * energy));
    };
    return (2.0 / kPi) * integrate_gk(z, 0.0, 0.5 * kPi, 1e-12);
}

std::vector<EbkLevel> ebk_energies(const ModelParams& params, Branch branch) {
    params.validate();
    if (classify_regime(params) != Regime::III)
        throw std::domain_error("ebk_energies: requires Case III");
    const double e_sx = separatrix_energy(params);
    const double offset = 1e-9 * std::abs(e_sx);
    const double lo = e_sx + offset;
    const double hi = -offset;
    std::vector<EbkLevel> levels;
    if (!(hi > lo)) return levels;

    const double action_lo = ebk_action(params, lo, branch);
    const double action_hi = ebk_action(params, hi, branch);
    const double action_min = std::min(action_lo, action_hi);
    const double action_max = std::max(action_lo, action_hi);

    const int n_first = std::max(0, static_cast<int>(std::ceil(action_min - 0.5)));
    for (int n = n_first; n + 0.5 < action_max; ++n) {
        const double target = n + 0.5;
        if (!(target > action_min && target < action_max)) continue;
        auto f = [&](double e) { return ebk_action(params, e, branch) - target; };
        const double f_lo = action_lo - target;
        const double f_hi = action_hi - target;
        auto stop = [&](double a, double b) { return std::abs(b - a) < 1e-10 * std::abs(e_sx); };
        boost::uintmax_t max_iter = 200;
        const auto bracket = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, stop, max_iter);
        levels.push_back({branch, n, 0.5 * (bracket.first + bracket.second)});
    }
    std::sort(levels.begin(), levels.end(),
              [](const EbkLevel& a, const EbkLevel& b) { return a.energy < b.energy; });
    return levels;
}

std::vector<int> predicted_crossings(double eps2, double delta_min, double delta_max) {
    if (!(eps2 > 0.0)) throw std::invalid_argument("predicted_crossings: eps2 must be > 0");
    std::vector<int> out;
    const int first = static_cast<int>(std::ceil(delta_min));
    const int last = static_cast<int>(std::floor(delta_max));
    for (int d = first; d <= last; ++d) {
        const ModelParams params{static_cast<double>(d), eps2};
        if (classify_regime(params) != Regime::III) continue;
        const double e_sx = separatrix_energy(params);
        const double lo = e_sx + 1e-9 * std::abs(e_sx);
        if (!(lo < 0.0)) continue;
        // at least one inner level must fit: Ĩ_-(E_sx) > 1/2
        if (ebk_action(params, lo, Branch::inner) > 0.5) out.push_back(d);
    }
    return out;
}

} // namespace kerrosc
