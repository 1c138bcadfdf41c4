#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hivdde/integrator.hpp"
#include "hivdde/model.hpp"

using namespace hivdde;

namespace {

using Scalar = std::array<double, 1>;

// y'(t) = -y(t-1): piecewise-polynomial solution under constant history 1.
const auto delayed_decay = [](double, const Scalar&, double ydel) { return Scalar{-ydel}; };

Trajectory<1> solve_delayed_decay(double t1, SolverConfig cfg = {}) {
    return integrate<1>(delayed_decay, constant_history(Scalar{1.0}), 0.0, t1, 1.0, 0, cfg);
}

}  // namespace

TEST_CASE("method of steps reproduces the first-interval closed form") {
    const auto traj = solve_delayed_decay(1.0);
    for (double t : {0.1, 0.25, 0.5, 0.9, 1.0})
        CHECK(traj.sample(t)[0] == Catch::Approx(1.0 - t).margin(1e-12));
}

TEST_CASE("second delay interval matches the hand-integrated quadratic") {
    const auto traj = solve_delayed_decay(2.0);
    auto exact = [](double t) { return 0.5 * t * t - 2.0 * t + 1.5; };
    for (double t : {1.25, 1.5, 1.75, 2.0})
        CHECK(traj.sample(t)[0] == Catch::Approx(exact(t)).margin(1e-12));
}

TEST_CASE("sampling at a mesh node returns the stored state bitwise") {
    const auto traj = solve_delayed_decay(2.0);
    for (const auto& node : traj.nodes()) {
        CHECK(traj.sample(node.t)[0] == node.y[0]);
    }
}

TEST_CASE("mesh is strictly increasing and spans the request") {
    const auto traj = solve_delayed_decay(2.0);
    CHECK(traj.t_begin() == 0.0);
    CHECK(traj.t_end() == Catch::Approx(2.0).margin(1e-12));
    for (std::size_t i = 1; i < traj.nodes().size(); ++i)
        CHECK(traj.nodes()[i].t > traj.nodes()[i - 1].t);
}

TEST_CASE("sampling outside the span throws") {
    const auto traj = solve_delayed_decay(1.0);
    CHECK_THROWS_AS(traj.sample(-0.1), OutOfSpan);
    CHECK_THROWS_AS(traj.sample(1.5), OutOfSpan);
}

TEST_CASE("interpolation agrees with a half-tolerance re-integration") {
    const ModelParams p = uganda_fitted_params(6.0);
    const ReducedState y0 = {5.014983, 0.0, 0.0, 0.20, 0.884997};
    auto rhs = [&p](double, const ReducedState& y, double Idel) { return rhs_reduced(p, y, Idel); };

    SolverConfig coarse;
    SolverConfig fine;
    fine.rel_tol = coarse.rel_tol / 16.0;
    fine.abs_tol = coarse.abs_tol / 16.0;
    const auto a = integrate<5>(rhs, constant_history(y0), 0.0, 30.0, p.u, kI, coarse);
    const auto b = integrate<5>(rhs, constant_history(y0), 0.0, 30.0, p.u, kI, fine);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ts(0.0, 30.0);
    for (int k = 0; k < 50; ++k) {
        const double t = ts(rng);
        const auto ya = a.sample(t);
        const auto yb = b.sample(t);
        for (std::size_t i = 0; i < 5; ++i) {
            const double tol = 10.0 * (coarse.rel_tol * std::abs(yb[i]) + coarse.abs_tol);
            CHECK(std::abs(ya[i] - yb[i]) <= tol);
        }
    }
}

TEST_CASE("fixed-step convergence order is at least three") {
    // y' = -y over [0,2]; huge tolerances force fixed steps of size h_init.
    auto rhs = [](double, const Scalar& y, double) { return Scalar{-y[0]}; };
    auto run = [&](double h) {
        SolverConfig cfg;
        cfg.rel_tol = cfg.abs_tol = 1e10;
        cfg.h_init = cfg.h_max = h;
        const auto traj = integrate<1>(rhs, constant_history(Scalar{1.0}), 0.0, 2.0, 0.0, 0, cfg);
        return std::abs(traj.sample(2.0)[0] - std::exp(-2.0));
    };
    const double e1 = run(0.2);
    const double e2 = run(0.1);
    REQUIRE(e1 > 0.0);
    REQUIRE(e2 > 0.0);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.0);
}

TEST_CASE("zero infective history keeps the disease extinct") {
    const ModelParams p = uganda_fitted_params(6.0);
    const ReducedState y0 = {2.0, 0.0, 0.0, 0.3, 0.0};
    const auto traj = integrate<5>(
        [&p](double, const ReducedState& y, double Idel) { return rhs_reduced(p, y, Idel); },
        constant_history(y0), 0.0, 600.0, p.u, kI);
    for (const auto& node : traj.nodes()) CHECK(node.y[kI] == 0.0);
    CHECK(traj.sample(600.0)[kS0] == Catch::Approx(p.B / p.mu).epsilon(1e-4));
    CHECK(traj.sample(600.0)[kZ] == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("model trajectories stay nonnegative and bounded on the invariant set") {
    const ModelParams p = uganda_fitted_params(6.0);
    const DerivedQuantities dq = derived(p);
    const SolverConfig cfg;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 25; ++k) {
        // random point of the forward-invariant region
        const double budget = p.B / p.mu;
        double w[4] = {unif(rng), unif(rng), unif(rng), unif(rng)};
        const double sum = w[0] + w[1] + w[2] + w[3] + 1.0;
        ReducedState y0 = {budget * w[0] / sum, budget * w[1] / sum, budget * w[2] / sum,
                           unif(rng) * p.q * budget / (p.mu * p.eta) * 0.99,
                           budget * w[3] / sum};
        const double n0 = y0[kS0] + y0[kS1] + y0[kS2] + y0[kI];
        const double zcap = std::max(y0[kZ], dq.tau * std::max(n0, budget));
        const auto traj = integrate<5>(
            [&p](double, const ReducedState& y, double Idel) { return rhs_reduced(p, y, Idel); },
            constant_history(y0), 0.0, 50.0, p.u, kI, cfg);
        for (const auto& node : traj.nodes()) {
            for (double v : node.y) CHECK(v >= -cfg.abs_tol);
            const double n = node.y[kS0] + node.y[kS1] + node.y[kS2] + node.y[kI];
            CHECK(n <= std::max(n0, budget) + 10.0 * cfg.abs_tol);
            CHECK(node.y[kZ] <= zcap + 10.0 * cfg.abs_tol);
        }
    }
}

TEST_CASE("step budget violations are reported") {
    SolverConfig cfg;
    cfg.max_steps = 3;
    cfg.h_max = 1e-3;
    auto rhs = [](double, const Scalar& y, double) { return Scalar{-y[0]}; };
    CHECK_THROWS_AS(integrate<1>(rhs, constant_history(Scalar{1.0}), 0.0, 1.0, 0.0, 0, cfg),
                    StepBudgetExceeded);
}

TEST_CASE("finite-time blowup is reported as a non-finite state") {
    auto rhs = [](double, const Scalar& y, double) { return Scalar{y[0] * y[0]}; };
    CHECK_THROWS_AS(integrate<1>(rhs, constant_history(Scalar{1.0}), 0.0, 2.0, 0.0, 0),
                    NonFiniteState);
}

TEST_CASE("delay zero follows the plain ODE path with no step cap") {
    auto rhs = [](double, const Scalar& y, double ydel) {
        CHECK(ydel == y[0]);  // current value is handed through
        return Scalar{-y[0]};
    };
    SolverConfig cfg;
    cfg.h_max = 5.0;
    const auto traj = integrate<1>(rhs, constant_history(Scalar{1.0}), 0.0, 3.0, 0.0, 0, cfg);
    CHECK(traj.sample(3.0)[0] == Catch::Approx(std::exp(-3.0)).epsilon(1e-6));
}
