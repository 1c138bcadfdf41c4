#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "hivdde/params.hpp"

using namespace hivdde;

TEST_CASE("critical death rate of the Uganda fixed parameters") {
    const ModelParams p = uganda_fitted_params(6.0);
    const DerivedQuantities dq = derived(p);
    CHECK(std::round(dq.D0 * 1e4) / 1e4 == 0.0032);
}

TEST_CASE("tau is one when information grows and decays at the same rate") {
    ModelParams p = uganda_fitted_params(6.0);
    p.q = p.eta = 0.3;
    CHECK(derived(p).tau == 1.0);
}

TEST_CASE("relative infection weight of the fitted u=6 row") {
    const ModelParams p = uganda_fitted_params(6.0);
    const DerivedQuantities dq = derived(p);
    // independent arithmetic from the 0.05/0.40 ties
    const double gamma = 0.252445 + 0.1 + 0.8;
    const double expected = (0.05 * 0.021509 * 0.1 + 0.40 * 0.021509 * 0.8) / gamma;
    CHECK(dq.rel_weight == Catch::Approx(expected).epsilon(1e-14));
    CHECK(dq.rel_weight == Catch::Approx(0.00607).margin(5e-5));
    CHECK(dq.rel_weight > dq.D0);
}

TEST_CASE("reproduction number identities hold on random parameters") {
    std::mt19937_64 rng(20240901);
    std::uniform_real_distribution<double> unif(0.01, 2.0);
    for (int i = 0; i < 200; ++i) {
        ModelParams p;
        p.B = unif(rng);
        p.mu = unif(rng);
        p.d = unif(rng);
        p.gamma0 = unif(rng);
        p.gamma1 = unif(rng);
        p.gamma2 = unif(rng);
        p.beta0 = unif(rng);
        p.beta1 = unif(rng);
        p.beta2 = unif(rng);
        p.q = unif(rng);
        p.eta = unif(rng);
        const DerivedQuantities dq = derived(p);
        CHECK(dq.R0 * (p.mu * (p.mu + p.d)) == Catch::Approx(p.B * p.beta0).epsilon(1e-15));
        CHECK(dq.R0 == Catch::Approx(p.beta0 / dq.D0).epsilon(1e-14));
        CHECK(((dq.R0 <= 1.0) == (p.beta0 <= dq.D0)));
        CHECK(((dq.R0 > 1.0) == (p.beta0 > dq.D0)));
    }
}

TEST_CASE("validate rejects out-of-range rates") {
    ModelParams p = uganda_fitted_params(0.0);
    CHECK_NOTHROW(validate(p));
    p.mu = 0.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = uganda_fitted_params(0.0);
    p.gamma0 = p.gamma1 = p.gamma2 = 0.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = uganda_fitted_params(0.0);
    p.u = -1.0;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
}

TEST_CASE("fitted rows carry the transmission-rate ties") {
    for (double u : {0.0, 3.0, 6.0, 9.0, 12.0}) {
        const ModelParams p = uganda_fitted_params(u);
        CHECK(p.beta1 == Catch::Approx(0.05 * p.beta0).epsilon(1e-15));
        CHECK(p.beta2 == Catch::Approx(0.40 * p.beta0).epsilon(1e-15));
        CHECK(p.u == u);
        CHECK_NOTHROW(validate(p));
    }
    CHECK_THROWS_AS(uganda_fitted_params(5.0), std::invalid_argument);
}

TEST_CASE("parameter files parse with comments and merge over a base") {
    std::istringstream in(
        "# fitted transmission rate\n"
        "beta0 = 0.0215   # overrides the base\n"
        "\n"
        "u = 9\n");
    const ModelParams p = parse_params(in, uganda_fitted_params(6.0));
    CHECK(p.beta0 == 0.0215);
    CHECK(p.u == 9.0);
    CHECK(p.eta == 0.055251);  // untouched base value
}

TEST_CASE("parameter file errors carry line numbers") {
    std::istringstream bad_key("B = 0.5\nnot_a_key = 1\n");
    CHECK_THROWS_WITH(parse_params(bad_key), Catch::Matchers::ContainsSubstring("line 2"));
    std::istringstream bad_value("B = zero\n");
    CHECK_THROWS_AS(parse_params(bad_value), ParseError);
    std::istringstream no_eq("Bee 0.5\n");
    CHECK_THROWS_AS(parse_params(no_eq), ParseError);
}

TEST_CASE("parameter save/load round-trips") {
    const ModelParams p = uganda_fitted_params(3.0);
    std::ostringstream out;
    save_params(out, p);
    std::istringstream in(out.str());
    const ModelParams q = parse_params(in);
    CHECK(q.beta0 == p.beta0);
    CHECK(q.beta1 == p.beta1);
    CHECK(q.q == p.q);
    CHECK(q.eta == p.eta);
    CHECK(q.u == p.u);
    CHECK(q.B == p.B);
}
