#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hivdde/model.hpp"
#include "hivdde/params.hpp"
#include "hivdde/rootfind.hpp"

namespace hivdde {

/// A fixed point of the reduced five-compartment system.
struct Equilibrium {
    enum class Kind { DiseaseFree, Endemic };
    Kind kind;
    double S0, S1, S2, Z, I;
    std::optional<bool> stable_hint;  ///< filled by the stability module when asked

    ReducedState state() const { return {S0, S1, S2, Z, I}; }
};

/// Case split for the nonnegative roots of G(I) = mu + d.
enum class RootCase {
    NoRoot,              ///< subthreshold, G stays below the line
    TwoRoots,            ///< backward regime: two positive roots
    BoundaryUnique,      ///< boundary of the two-root regime (tangency or beta0 at threshold)
    UniqueSupercritical  ///< beta0 above the critical death rate: one positive root
};

struct RootReport {
    RootCase kind;
    std::vector<double> roots;   ///< ascending; empty for NoRoot
    std::vector<double> slopes;  ///< dG/dI at each root
    std::optional<double> I_max; ///< interior maximizer of G, when one was located
};

/// G evaluated with explicit (beta0, tau); beta1/beta2 and the response
/// rates come from p. This is the parametrized family behind the root and
/// threshold analysis.
inline double eval_G(double I, double beta0, double tau, const ModelParams& p) {
    const double gamma = p.gamma0 + p.gamma1 + p.gamma2;
    const double b0 = beta0 + tau * gamma;
    const double den = p.mu + b0 * I;
    const double s = p.beta1 * p.gamma1 * I / (p.mu + p.beta1 * I) +
                     p.beta2 * p.gamma2 * I / (p.mu + p.beta2 * I);
    return beta0 * p.B / den + p.B * tau * s / den;
}

/// G at the model's own beta0 and tau = q/eta.
inline double eval_G(double I, const ModelParams& p) {
    return eval_G(I, p.beta0, p.q / p.eta, p);
}

/// Closed-form dG/dI of the parametrized family.
inline double dG_dI(double I, double beta0, double tau, const ModelParams& p) {
    const double gamma = p.gamma0 + p.gamma1 + p.gamma2;
    const double b0 = beta0 + tau * gamma;
    const double den = p.mu + b0 * I;
    double s = 0.0;
    for (auto [bj, gj] : {std::pair{p.beta1, p.gamma1}, std::pair{p.beta2, p.gamma2}}) {
        const double dj = p.mu + bj * I;
        s += gj * bj * (p.mu * p.mu - bj * b0 * I * I) / (dj * dj);
    }
    return p.B / (den * den) * (-beta0 * b0 + tau * s);
}

inline double dG_dI(double I, const ModelParams& p) {
    return dG_dI(I, p.beta0, p.q / p.eta, p);
}

inline Equilibrium disease_free(const ModelParams& p) {
    return {Equilibrium::Kind::DiseaseFree, p.B / p.mu, 0.0, 0.0, 0.0, 0.0, std::nullopt};
}

/// Builds the endemic equilibrium determined by its I coordinate.
inline Equilibrium assemble_endemic(const ModelParams& p, double I) {
    const DerivedQuantities dq = derived(p);
    Equilibrium e;
    e.kind = Equilibrium::Kind::Endemic;
    e.I = I;
    e.S0 = p.B / (p.mu + dq.b0u * I);
    e.Z = p.q * I / p.eta;
    const double common = p.q * I * p.B / (p.eta * (p.mu + dq.b0u * I));
    e.S1 = p.gamma1 * common / (p.mu + p.beta1 * I);
    e.S2 = p.gamma2 * common / (p.mu + p.beta2 * I);
    return e;
}

namespace detail {

// Everything past mu/sqrt(b0*min(beta1,beta2)) has dG/dI < 0, so the
// interior maximizer (when it exists) lies inside [0, cap].
inline double maximizer_cap(double beta0, double tau, const ModelParams& p) {
    const double gamma = p.gamma0 + p.gamma1 + p.gamma2;
    const double b0 = beta0 + tau * gamma;
    return p.mu / std::sqrt(b0 * std::min(p.beta1, p.beta2)) * (1.0 + 1e-9) + 1e-300;
}

inline double max_of_G(double beta0, double tau, const ModelParams& p, double* argmax = nullptr) {
    const double cap = maximizer_cap(beta0, tau, p);
    const double I_max = golden_section_max(
        [&](double I) { return eval_G(I, beta0, tau, p); }, 0.0, cap, 1e-10);
    if (argmax) *argmax = I_max;
    return eval_G(I_max, beta0, tau, p);
}

// Newton polish of a bracketed root of G = target, kept inside [lo, hi].
inline double polish_root(double x, double lo, double hi, double target, double beta0,
                          double tau, const ModelParams& p) {
    for (int i = 0; i < 12; ++i) {
        const double r = eval_G(x, beta0, tau, p) - target;
        if (std::abs(r) <= 1e-14 * target) break;
        const double g = dG_dI(x, beta0, tau, p);
        if (g == 0.0 || !std::isfinite(g)) break;
        double xn = x - r / g;
        if (!(xn > lo && xn < hi)) break;
        x = xn;
    }
    return x;
}

}  // namespace detail

/// Locates and classifies every nonnegative root of G(I) = mu + d.
inline RootReport classify_roots(const ModelParams& p) {
    const DerivedQuantities dq = derived(p);
    const double target = p.mu + p.d;
    const double tau = dq.tau;
    auto f = [&](double I) { return eval_G(I, p.beta0, tau, p) - target; };

    RootReport rep;
    if (p.beta0 > dq.D0) {
        // One root past the maximizer; bracket from the proven upper bound.
        double I_hi = p.B * (p.beta0 - dq.D0) / (p.mu * p.beta0) + 1.0;
        if (!(f(I_hi) < 0.0)) {
            I_hi = std::max(I_hi, p.B / p.mu);
            I_hi = expand_until([&](double x) { return f(x) < 0.0; }, I_hi);
        }
        double root = brent_root(f, 0.0, I_hi, 1e-12);
        root = detail::polish_root(root, 0.0, I_hi, target, p.beta0, tau, p);
        rep.kind = RootCase::UniqueSupercritical;
        rep.roots = {root};
        rep.slopes = {dG_dI(root, p)};
        return rep;
    }

    double I_max = 0.0;
    const double G_max = detail::max_of_G(p.beta0, tau, p, &I_max);
    const double rel = (G_max - target) / target;
    constexpr double tangency_tol = 1e-9;

    auto upper_root = [&](double lo) {
        double hi = expand_until([&](double x) { return f(x) < 0.0; },
                                 std::max(2.0 * lo, p.B / p.mu));
        double root = brent_root(f, lo, hi, 1e-12);
        return detail::polish_root(root, lo, hi, target, p.beta0, tau, p);
    };

    if (p.beta0 == dq.D0) {
        // G(0) sits exactly on the line; I = 0 is always a root here.
        rep.kind = RootCase::BoundaryUnique;
        if (rel > tangency_tol) {
            const double ip = upper_root(I_max);
            rep.roots = {0.0, ip};
            rep.slopes = {dG_dI(0.0, p), dG_dI(ip, p)};
            rep.I_max = I_max;
        } else {
            rep.roots = {0.0};
            rep.slopes = {dG_dI(0.0, p)};
        }
        return rep;
    }

    if (rel < -tangency_tol) {
        rep.kind = RootCase::NoRoot;
        return rep;
    }
    if (rel > tangency_tol) {
        double lo_root = brent_root(f, 0.0, I_max, 1e-12);
        lo_root = detail::polish_root(lo_root, 0.0, I_max, target, p.beta0, tau, p);
        const double hi_root = upper_root(I_max);
        rep.kind = RootCase::TwoRoots;
        rep.roots = {lo_root, hi_root};
        rep.slopes = {dG_dI(lo_root, p), dG_dI(hi_root, p)};
        rep.I_max = I_max;
        return rep;
    }
    rep.kind = RootCase::BoundaryUnique;
    rep.roots = {I_max};
    rep.slopes = {dG_dI(I_max, p)};
    rep.I_max = I_max;
    return rep;
}

/// The unique endemic equilibrium for beta0 above the critical death rate;
/// empty otherwise. Subthreshold endemic branches are reachable only through
/// classify_roots.
inline std::optional<Equilibrium> solve_endemic(const ModelParams& p) {
    if (!(p.beta0 > derived(p).D0)) return std::nullopt;
    const RootReport rep = classify_roots(p);
    return assemble_endemic(p, rep.roots.back());
}

/// Positive root of beta0*(beta0 + tau*gamma) = tau*sum(gamma_j beta_j),
/// the threshold below which the critical death rate stops being the
/// endemic-onset boundary.
inline double D1_tau(const ModelParams& p, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("D1_tau: require tau > 0");
    const double gamma = p.gamma0 + p.gamma1 + p.gamma2;
    const double sum = p.beta1 * p.gamma1 + p.beta2 * p.gamma2;
    return (2.0 / gamma) * sum / (1.0 + std::sqrt(1.0 + 4.0 * sum / (tau * gamma)));
}

/// Smallest beta0 whose G-curve reaches the mu + d line.
inline double beta0_tau(const ModelParams& p, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("beta0_tau: require tau > 0");
    const DerivedQuantities dq = derived(p);
    const double target = p.mu + p.d;
    if (dq.D0 >= D1_tau(p, tau)) return dq.D0;
    auto reaches = [&](double beta0) { return detail::max_of_G(beta0, tau, p) >= target; };
    double lo = 0.0, hi = dq.D0;  // reaches(D0) always holds: G(0) = D0*B/mu
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (reaches(mid) ? hi : lo) = mid;
    }
    return hi;
}

/// Crossover dissemination rate of the subthreshold regime, when it exists.
inline std::optional<double> tau_star(const ModelParams& p) {
    const DerivedQuantities dq = derived(p);
    const double gamma = dq.gamma_total;
    const double sum = p.beta1 * p.gamma1 + p.beta2 * p.gamma2;
    if (!(sum > dq.D0 * gamma)) return std::nullopt;
    return dq.D0 * dq.D0 / (sum - dq.D0 * gamma);
}

/// Limit of the endemic infected level as the dissemination rate grows.
inline double I_star_limit(const ModelParams& p) {
    const DerivedQuantities dq = derived(p);
    if (!(p.beta0 > dq.D0))
        throw std::invalid_argument("I_star_limit: require beta0 > critical death rate");
    if (dq.D0 >= dq.rel_weight) return 0.0;
    const double gamma = dq.gamma_total;
    auto f = [&](double I) {
        return (p.mu / gamma) * (p.beta1 * p.gamma1 / (p.mu + p.beta1 * I) +
                                 p.beta2 * p.gamma2 / (p.mu + p.beta2 * I)) -
               dq.D0;
    };
    const double hi = expand_until([&](double x) { return f(x) < 0.0; }, 1.0);
    double root = brent_root(f, 0.0, hi, 1e-14);
    for (int i = 0; i < 8; ++i) {  // Newton polish, derivative in closed form
        const double r = f(root);
        if (std::abs(r) <= 1e-15) break;
        double g = 0.0;
        for (auto [bj, gj] : {std::pair{p.beta1, p.gamma1}, std::pair{p.beta2, p.gamma2}}) {
            const double dj = p.mu + bj * root;
            g -= (p.mu / gamma) * gj * bj * bj / (dj * dj);
        }
        if (g == 0.0) break;
        const double next = root - r / g;
        if (!(next > 0.0)) break;
        root = next;
    }
    return root;
}

/// Limits of the three susceptible components as the dissemination rate
/// grows, split by how the relative infection weight compares to the
/// critical death rate.
inline std::array<double, 3> S_star_limits(const ModelParams& p) {
    const DerivedQuantities dq = derived(p);
    if (!(p.beta0 > dq.D0))
        throw std::invalid_argument("S_star_limits: require beta0 > critical death rate");
    const double gamma = dq.gamma_total;
    const double scale = std::max(dq.D0, dq.rel_weight);
    if (std::abs(dq.D0 - dq.rel_weight) <= 1e-12 * scale) {
        return {0.0, p.gamma1 * p.B / (p.mu * gamma), p.gamma2 * p.B / (p.mu * gamma)};
    }
    if (dq.D0 > dq.rel_weight) {
        const double sum = p.beta1 * p.gamma1 + p.beta2 * p.gamma2;
        auto f = [&](double Z) { return p.mu * (p.beta0 - dq.D0) + Z * (sum - dq.D0 * gamma); };
        const double hi = expand_until([&](double x) { return f(x) < 0.0; }, 1.0);
        const double Zinf = brent_root(f, 0.0, hi, 1e-14);
        const double den = p.mu + gamma * Zinf;
        return {p.B / den, p.gamma1 * p.B * Zinf / (p.mu * den), p.gamma2 * p.B * Zinf / (p.mu * den)};
    }
    const double Iinf = I_star_limit(p);
    return {0.0, p.gamma1 * p.B / (gamma * (p.mu + p.beta1 * Iinf)),
            p.gamma2 * p.B / (gamma * (p.mu + p.beta2 * Iinf))};
}

struct SweepRow {
    double tau;
    double I, S0, S1, S2, Z;
    double lower_bound, upper_bound;  ///< proven bracket for the infected level
};

/// Endemic equilibrium across a grid of dissemination rates. tau is varied
/// by scaling q with eta held fixed.
inline std::vector<SweepRow> sweep_tau(const ModelParams& p, std::span<const double> tau_grid) {
    const DerivedQuantities dq = derived(p);
    if (!(p.beta0 > dq.D0))
        throw std::invalid_argument("sweep_tau: require beta0 > critical death rate");
    std::vector<SweepRow> rows;
    rows.reserve(tau_grid.size());
    const double gamma = dq.gamma_total;
    for (double tau : tau_grid) {
        ModelParams pt = p;
        pt.q = tau * pt.eta;
        const auto e = solve_endemic(pt);
        if (!e) throw BracketFailure("sweep_tau: endemic equilibrium vanished on grid");
        SweepRow row;
        row.tau = tau;
        row.I = e->I;
        row.S0 = e->S0;
        row.S1 = e->S1;
        row.S2 = e->S2;
        row.Z = e->Z;
        row.lower_bound = p.B * (p.beta0 - dq.D0) / ((p.mu + p.d) * (p.beta0 + tau * gamma));
        row.upper_bound = std::min(p.B * (p.beta0 - dq.D0) / (p.mu * p.beta0), p.mu / dq.D0);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace hivdde
