#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hivdde/equilibria.hpp"
#include "hivdde/linalg.hpp"
#include "hivdde/params.hpp"
#include "hivdde/polyroots.hpp"

namespace hivdde {

/// Raised when an operation is called outside its supercritical regime.
class PreconditionViolated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;
    double max_real_part;
    bool stable;  ///< max_real_part < 0
};

/// Explicit bounds on limsup I(t) in the supercritical regime (millions).
struct PersistenceBounds {
    double weak_lower;
    double upper;
};

namespace detail {

/// The delayed linearization matrix at an equilibrium; lambda enters through
/// the e^{-lambda u} factors on the delayed infection couplings.
inline CMat5 char_matrix(std::complex<double> lambda, const Equilibrium& e, const ModelParams& p) {
    if (!(e.S0 > 0.0)) throw std::invalid_argument("char_matrix: equilibrium needs S0 > 0");
    const double gamma = p.gamma0 + p.gamma1 + p.gamma2;
    const double target = p.mu + p.d;  // = D0*B/mu
    const std::complex<double> ex = std::exp(-lambda * p.u);
    CMat5 m;
    m(0, 0) = -p.B / e.S0;
    m(0, 3) = -gamma * e.S0;
    m(0, 4) = -p.beta0 * e.S0 * ex;
    m(1, 0) = p.gamma1 * e.Z;
    m(1, 1) = -(p.mu + p.beta1 * e.I);
    m(1, 3) = p.gamma1 * e.S0;
    m(1, 4) = -p.beta1 * e.S1 * ex;
    m(2, 0) = p.gamma2 * e.Z;
    m(2, 2) = -(p.mu + p.beta2 * e.I);
    m(2, 3) = p.gamma2 * e.S0;
    m(2, 4) = -p.beta2 * e.S2 * ex;
    m(3, 3) = -p.eta;
    m(3, 4) = p.q;
    m(4, 0) = p.beta0 * e.I;
    m(4, 1) = p.beta1 * e.I;
    m(4, 2) = p.beta2 * e.I;
    m(4, 4) = (p.beta0 * e.S0 + p.beta1 * e.S1 + p.beta2 * e.S2) * ex - target;
    return m;
}

}  // namespace detail

/// Value of the delayed characteristic function det(lambda I - M(lambda)).
inline std::complex<double> char_function(std::complex<double> lambda, const Equilibrium& e,
                                          const ModelParams& p) {
    const CMat5 m = detail::char_matrix(lambda, e, p);
    CMat5 shifted;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            shifted(i, j) = (i == j ? lambda : std::complex<double>(0.0)) - m(i, j);
    return determinant(shifted);
}

struct DfeStability {
    enum class Verdict { Stable, Marginal, Unstable };
    Verdict verdict;
    std::optional<double> positive_root;  ///< dominant real root when unstable (0 when marginal)
};

/// Trichotomy for the disease-free equilibrium, driven by sign(beta0 - D0).
/// In the unstable case the unique positive root of the scalar transcendental
/// factor is located by bisection on [0, beta0*B/mu].
inline DfeStability dfe_stability(const ModelParams& p) {
    const DerivedQuantities dq = derived(p);
    if (p.beta0 < dq.D0) return {DfeStability::Verdict::Stable, std::nullopt};
    if (p.beta0 == dq.D0) return {DfeStability::Verdict::Marginal, 0.0};

    const double a = dq.D0 * p.B / p.mu;   // = mu + d
    const double b = p.beta0 * p.B / p.mu; // > a
    auto g = [&](double lam) { return lam + a - b * std::exp(-lam * p.u); };
    // g(0) = a - b < 0 and g(b) >= a > 0; g is strictly increasing.
    double lo = 0.0, hi = b;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
        if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
    }
    double root = 0.5 * (lo + hi);
    for (int i = 0; i < 6; ++i) {  // Newton polish on the smooth residual
        const double r = g(root);
        const double gp = 1.0 + p.u * b * std::exp(-root * p.u);
        const double next = root - r / gp;
        if (next > 0.0 && next < b) root = next;
    }
    return {DfeStability::Verdict::Unstable, root};
}

/// Jacobian of the reduced system at an equilibrium for the delay-free model
/// (delayed couplings evaluated at current time).
inline Mat5 jacobian_u0(const Equilibrium& e, const ModelParams& p) {
    if (p.u != 0.0) throw std::invalid_argument("jacobian_u0: require u == 0");
    const CMat5 cm = detail::char_matrix(0.0, e, p);
    Mat5 m;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) m(i, j) = cm(i, j).real();
    return m;
}

/// Spectrum of a real 5x5 matrix: characteristic polynomial extraction
/// followed by simultaneous root iteration.
inline SpectrumReport eigenvalues_5x5(const Mat5& m) {
    const auto c = charpoly(m);
    const auto roots = poly_roots(std::vector<double>(c.begin(), c.end()));
    SpectrumReport rep;
    rep.eigenvalues = roots;
    rep.max_real_part = -std::numeric_limits<double>::infinity();
    for (const auto& ev : roots) rep.max_real_part = std::max(rep.max_real_part, ev.real());
    rep.stable = rep.max_real_part < 0.0;
    return rep;
}

/// Spectrum of the endemic equilibrium for the delay-free model.
inline SpectrumReport endemic_stable_u0(const ModelParams& p) {
    if (p.u != 0.0) throw std::invalid_argument("endemic_stable_u0: require u == 0");
    const auto e = solve_endemic(p);
    if (!e) throw PreconditionViolated("endemic_stable_u0: no endemic equilibrium (beta0 <= D0)");
    return eigenvalues_5x5(jacobian_u0(*e, p));
}

/// Closed-form permanence bounds on limsup I(t).
inline PersistenceBounds persistence_bounds(const ModelParams& p) {
    const DerivedQuantities dq = derived(p);
    if (!(p.beta0 > dq.D0))
        throw PreconditionViolated("persistence_bounds: require beta0 > critical death rate");
    PersistenceBounds b;
    b.weak_lower = p.mu * (p.beta0 - dq.D0) / (dq.D0 * (p.beta0 + dq.tau * dq.gamma_total));
    b.upper = (p.mu + p.d) * (p.beta0 - dq.D0) / (dq.D0 * p.beta0);
    return b;
}

struct Beta0ScanRow {
    double beta0;
    double max_real_part;
};

struct Beta0ScanResult {
    std::vector<Beta0ScanRow> rows;
    std::optional<double> first_unstable;  ///< empty when the cap was reached while stable
    double cap;
};

/// Geometric scan of beta0 above the critical death rate for the delay-free
/// model, looking for the loss of endemic stability. The supremum where
/// stability first fails is only known to exist, not computable in closed
/// form, so this reports the first sampled beta0 with a nonnegative leading
/// real part (or the cap).
inline Beta0ScanResult scan_beta0_max(const ModelParams& p, double step_factor = 1.1,
                                      double cap_multiple = 100.0) {
    if (p.u != 0.0) throw std::invalid_argument("scan_beta0_max: require u == 0");
    if (!(step_factor > 1.0)) throw std::invalid_argument("scan_beta0_max: step factor must exceed 1");
    const double D0 = derived(p).D0;
    Beta0ScanResult res;
    res.cap = cap_multiple * D0;
    for (double beta0 = D0 * step_factor; beta0 <= res.cap; beta0 *= step_factor) {
        ModelParams ps = p;
        ps.beta0 = beta0;
        const SpectrumReport rep = endemic_stable_u0(ps);
        res.rows.push_back({beta0, rep.max_real_part});
        if (rep.max_real_part >= 0.0) {
            res.first_unstable = beta0;
            break;
        }
    }
    return res;
}

}  // namespace hivdde
