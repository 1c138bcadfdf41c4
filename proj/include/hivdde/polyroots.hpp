#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hivdde/linalg.hpp"

namespace hivdde {

/// Root iteration failed to converge within its budget.
class NoConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Characteristic polynomial of a real matrix by the Faddeev-LeVerrier
/// recurrence. Returns monic coefficients c where
/// p(x) = x^N + c[N-1] x^{N-1} + ... + c[0].
template <std::size_t N>
std::array<double, N> charpoly(const SquareMatrix<double, N>& m) {
    std::array<double, N> c{};
    SquareMatrix<double, N> mk = SquareMatrix<double, N>::identity();
    for (std::size_t k = 1; k <= N; ++k) {
        mk = m * mk;
        const double ck = -mk.trace() / static_cast<double>(k);
        c[N - k] = ck;
        for (std::size_t i = 0; i < N; ++i) mk(i, i) += ck;
    }
    return c;
}

namespace detail {

inline std::pair<std::complex<double>, std::complex<double>> horner(
    const std::vector<double>& c, std::complex<double> z) {
    // c holds the monic tail: p(z) = z^n + c[n-1] z^{n-1} + ... + c[0]
    std::complex<double> p(1.0, 0.0), dp(0.0, 0.0);
    for (std::size_t k = c.size(); k-- > 0;) {
        dp = dp * z + p;
        p = p * z + c[k];
    }
    return {p, dp};
}

}  // namespace detail

/// All roots of a monic polynomial by Aberth-Ehrlich simultaneous iteration
/// followed by a Newton polish. Complex roots come out as exact conjugate
/// pairs (the pairing step symmetrizes them).
inline std::vector<std::complex<double>> poly_roots(const std::vector<double>& coeffs,
                                                    int max_iter = 400) {
    const std::size_t n = coeffs.size();
    if (n == 0) return {};

    double radius = 0.0;
    for (double c : coeffs) radius = std::max(radius, std::abs(c));
    radius += 1.0;  // Cauchy bound for monic polynomials

    std::vector<std::complex<double>> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.25) /
                                 static_cast<double>(n) +
                             0.4;
        z[k] = std::polar(radius * 0.5, angle);
    }

    bool converged = false;
    for (int iter = 0; iter < max_iter && !converged; ++iter) {
        converged = true;
        for (std::size_t i = 0; i < n; ++i) {
            auto [p, dp] = detail::horner(coeffs, z[i]);
            if (std::abs(p) == 0.0) continue;
            if (std::abs(dp) == 0.0) {
                z[i] += 1e-8 * (1.0 + std::abs(z[i]));
                converged = false;
                continue;
            }
            const std::complex<double> newton = p / dp;
            std::complex<double> sum(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            const std::complex<double> denom = 1.0 - newton * sum;
            const std::complex<double> w = std::abs(denom) > 1e-300 ? newton / denom : newton;
            z[i] -= w;
            if (std::abs(w) > 1e-13 * (1.0 + std::abs(z[i]))) converged = false;
        }
    }
    if (!converged) throw NoConvergence("poly_roots: Aberth iteration budget exceeded");

    for (auto& zi : z) {  // Newton polish
        for (int it = 0; it < 4; ++it) {
            auto [p, dp] = detail::horner(coeffs, zi);
            if (std::abs(dp) == 0.0) break;
            const std::complex<double> step = p / dp;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            zi -= step;
        }
    }

    // Symmetrize: snap near-real roots, then average conjugate partners.
    double scale = 0.0;
    for (const auto& zi : z) scale = std::max(scale, std::abs(zi));
    const double tol = 1e-9 * std::max(1.0, scale);
    std::vector<std::complex<double>> out;
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        if (std::abs(z[i].imag()) <= tol) {
            out.emplace_back(z[i].real(), 0.0);
            used[i] = true;
            continue;
        }
        std::size_t mate = n;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = i + 1; j < n; ++j) {
            if (used[j]) continue;
            const double dist = std::abs(z[j] - std::conj(z[i]));
            if (dist < best) {
                best = dist;
                mate = j;
            }
        }
        used[i] = true;
        if (mate < n && best <= 1e-6 * std::max(1.0, scale)) {
            used[mate] = true;
            const double re = 0.5 * (z[i].real() + z[mate].real());
            const double im = 0.5 * (std::abs(z[i].imag()) + std::abs(z[mate].imag()));
            out.emplace_back(re, im);
            out.emplace_back(re, -im);
        } else {
            out.push_back(z[i]);  // unpaired; leave as computed
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

}  // namespace hivdde
