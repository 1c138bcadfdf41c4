#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hivdde/equilibria.hpp"
#include "hivdde/model.hpp"

using namespace hivdde;

TEST_CASE("full-model derivatives vanish at the disease-free state") {
    const ModelParams p = uganda_fitted_params(6.0);
    const FullState dfe = {p.B / p.mu, 0.0, 0.0, 0.0, 0.0, 0.0};
    const FullState ds = rhs_full(p, dfe, 0.0);
    for (double v : ds) CHECK(v == 0.0);
}

TEST_CASE("infection terms vanish without delayed infectives or information") {
    const ModelParams p = uganda_fitted_params(6.0);
    const FullState s = {3.0, 1.0, 2.0, 0.0, 0.7, 0.4};
    const FullState ds = rhs_full(p, s, 0.0);
    CHECK(ds[kS0] == Catch::Approx(p.B - p.mu * 3.0).epsilon(1e-15));
    CHECK(ds[kI] == Catch::Approx(-(p.mu + p.d) * 0.7).epsilon(1e-15));
}

TEST_CASE("full model is stationary at the endemic equilibrium with R at steady state") {
    const ModelParams p = uganda_fitted_params(6.0);
    const auto e = solve_endemic(p);
    REQUIRE(e.has_value());
    const double Rstar = p.gamma0 * e->S0 * e->Z / p.mu;
    const FullState s = {e->S0, e->S1, e->S2, e->Z, e->I, Rstar};
    const FullState ds = rhs_full(p, s, e->I);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(ds[i]) < 1e-9);
    CHECK(std::abs(ds[kR]) < 1e-9);
}

TEST_CASE("reduced system zeroes at both equilibria") {
    const ModelParams p = uganda_fitted_params(6.0);
    const ReducedState e0 = {p.B / p.mu, 0.0, 0.0, 0.0, 0.0};
    for (double v : rhs_reduced(p, e0, 0.0)) CHECK(v == 0.0);

    const auto estar = solve_endemic(p);
    REQUIRE(estar.has_value());
    for (double v : rhs_reduced(p, estar->state(), estar->I)) CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("information decays when no infectives feed it") {
    const ModelParams p = uganda_fitted_params(6.0);
    const ReducedState s = {10.0, 0.5, 0.5, 2.0, 0.0};
    const ReducedState ds = rhs_reduced(p, s, 0.0);
    CHECK(ds[kZ] == Catch::Approx(-p.eta * 2.0).epsilon(1e-15));
    CHECK(ds[kZ] < 0.0);
}

TEST_CASE("SI model matches its closed-form right-hand side") {
    const ModelParams p = uganda_fitted_params(6.0);

    const SiState at_dfe = rhs_si(p, p.B / p.mu, 0.0, 0.0);
    CHECK(at_dfe[0] == 0.0);
    CHECK(at_dfe[1] == 0.0);

    const SiState decay = rhs_si(p, 4.0, 0.9, 0.0);
    CHECK(decay[1] == Catch::Approx(-(p.mu + p.d) * 0.9).epsilon(1e-15));

    // direct arithmetic oracle at the 1992 state
    const double S0 = 5.014983, I = 0.884997;
    const SiState ds = rhs_si(p, S0, I, I);
    CHECK(ds[0] == Catch::Approx(0.55 - 0.021509 * S0 * I - 0.01176 * S0).epsilon(1e-14));
    CHECK(ds[1] == Catch::Approx(0.021509 * S0 * I - (0.01176 + 0.14) * I).epsilon(1e-14));
}

TEST_CASE("population growth obeys the comparison inequality") {
    const ModelParams p = uganda_fitted_params(6.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 30.0);
    for (int k = 0; k < 500; ++k) {
        const ReducedState s = {unif(rng), unif(rng), unif(rng), unif(rng), unif(rng)};
        const ReducedState ds = rhs_reduced(p, s, s[kI]);
        const double dN = ds[kS0] + ds[kS1] + ds[kS2] + ds[kI];
        const double N = s[kS0] + s[kS1] + s[kS2] + s[kI];
        CHECK(dN <= p.B - p.mu * N + 1e-12);
    }
}

TEST_CASE("right-hand sides are deterministic") {
    const ModelParams p = uganda_fitted_params(3.0);
    const ReducedState s = {1.1, 2.2, 3.3, 0.4, 0.5};
    const ReducedState a = rhs_reduced(p, s, 0.25);
    const ReducedState b = rhs_reduced(p, s, 0.25);
    for (std::size_t i = 0; i < 5; ++i) CHECK(a[i] == b[i]);
}
