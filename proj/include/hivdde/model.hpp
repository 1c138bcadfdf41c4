#pragma once

#include <array>
#include <cstddef>

#include "hivdde/params.hpp"

namespace hivdde {

// Component layout shared by the reduced and full state vectors.
inline constexpr std::size_t kS0 = 0;
inline constexpr std::size_t kS1 = 1;
inline constexpr std::size_t kS2 = 2;
inline constexpr std::size_t kZ = 3;
inline constexpr std::size_t kI = 4;
inline constexpr std::size_t kR = 5;

using ReducedState = std::array<double, 5>;  ///< (S0, S1, S2, Z, I)
using FullState = std::array<double, 6>;     ///< (S0, S1, S2, Z, I, R)
using SiState = std::array<double, 2>;       ///< (S0, I)

/// Right-hand side of the full six-compartment model. Every infection term
/// couples the current susceptible level to the delayed infective count
/// `I_delayed` = I(t-u); all other couplings use current-time values.
inline FullState rhs_full(const ModelParams& p, const FullState& s, double I_delayed) {
    const double gamma = p.gamma0 + p.gamma1 + p.gamma2;
    const double S0 = s[kS0], S1 = s[kS1], S2 = s[kS2], Z = s[kZ], I = s[kI], R = s[kR];
    FullState ds;
    ds[kS0] = p.B - gamma * S0 * Z - p.beta0 * S0 * I_delayed - p.mu * S0;
    ds[kS1] = p.gamma1 * S0 * Z - p.beta1 * S1 * I_delayed - p.mu * S1;
    ds[kS2] = p.gamma2 * S0 * Z - p.beta2 * S2 * I_delayed - p.mu * S2;
    ds[kZ] = p.q * I - p.eta * Z;
    ds[kI] = (p.beta0 * S0 + p.beta1 * S1 + p.beta2 * S2) * I_delayed - (p.mu + p.d) * I;
    ds[kR] = p.gamma0 * S0 * Z - p.mu * R;
    return ds;
}

/// Right-hand side of the decoupled five-compartment sub-system (no R class).
inline ReducedState rhs_reduced(const ModelParams& p, const ReducedState& s, double I_delayed) {
    const double gamma = p.gamma0 + p.gamma1 + p.gamma2;
    const double S0 = s[kS0], S1 = s[kS1], S2 = s[kS2], Z = s[kZ], I = s[kI];
    ReducedState ds;
    ds[kS0] = p.B - gamma * S0 * Z - p.beta0 * S0 * I_delayed - p.mu * S0;
    ds[kS1] = p.gamma1 * S0 * Z - p.beta1 * S1 * I_delayed - p.mu * S1;
    ds[kS2] = p.gamma2 * S0 * Z - p.beta2 * S2 * I_delayed - p.mu * S2;
    ds[kZ] = p.q * I - p.eta * Z;
    ds[kI] = (p.beta0 * S0 + p.beta1 * S1 + p.beta2 * S2) * I_delayed - (p.mu + p.d) * I;
    return ds;
}

/// Information-free SI model: the limit of the full model with Z = 0.
inline SiState rhs_si(const ModelParams& p, double S0, double I, double I_delayed) {
    return {p.B - p.beta0 * S0 * I_delayed - p.mu * S0,
            p.beta0 * S0 * I_delayed - (p.mu + p.d) * I};
}

}  // namespace hivdde
