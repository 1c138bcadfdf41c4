#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "hivdde/dataset.hpp"
#include "hivdde/integrator.hpp"
#include "hivdde/model.hpp"
#include "hivdde/optimize.hpp"
#include "hivdde/params.hpp"

namespace hivdde {

/// Free parameters of the Uganda fit, in optimizer order.
struct FreeParams {
    double beta0, eta, gamma0, q;
};

/// Everything needed to score one parameter vector against the data: the
/// fixed rates, the 1992 initial state, and the solver settings. The
/// beta1 = 0.05*beta0 and beta2 = 0.40*beta0 ties are re-applied on every
/// objective evaluation.
struct FitProblem {
    ModelParams fixed = uganda_fixed_params();
    double delay = 0.0;
    FullState initial_state = {5.014983, 0.0, 0.0, 0.20, 0.884997, 0.0};
    SolverConfig solver{.rel_tol = 1e-7, .abs_tol = 1e-9, .h_init = 1e-2};
    double penalty = 1e12;  ///< objective value returned for nonpositive parameters

    ModelParams materialize(const FreeParams& x) const {
        ModelParams p = fixed;
        p.beta0 = x.beta0;
        p.beta1 = 0.05 * x.beta0;
        p.beta2 = 0.40 * x.beta0;
        p.eta = x.eta;
        p.gamma0 = x.gamma0;
        p.q = x.q;
        p.u = delay;
        return p;
    }
};

inline FitProblem make_fit_problem(double delay_years) {
    FitProblem fp;
    fp.delay = delay_years;
    return fp;
}

/// Relative sum of squared errors between the simulated full model and the
/// observations: susceptible totals are compared as S0+S1+S2, infected as I,
/// information as Z, each residual squared and divided by the observed value.
inline double sse(const FitProblem& fp, const Dataset& ds, const FreeParams& x) {
    if (!(x.beta0 > 0.0 && x.eta > 0.0 && x.gamma0 > 0.0 && x.q > 0.0)) return fp.penalty;
    const ModelParams p = fp.materialize(x);

    const double t_end = static_cast<double>(ds.last_year() - ds.epoch_year);
    const auto traj = integrate<6>(
        [&p](double, const FullState& y, double I_delayed) { return rhs_full(p, y, I_delayed); },
        constant_history(fp.initial_state), 0.0, t_end, p.u, kI, fp.solver);

    double total = 0.0;
    for (const auto& o : ds.susceptible) {
        const FullState m = traj.sample(static_cast<double>(o.year - ds.epoch_year));
        const double model_s = m[kS0] + m[kS1] + m[kS2];
        total += (model_s - o.value) * (model_s - o.value) / std::abs(o.value);
    }
    for (const auto& o : ds.infected) {
        const double model_i = traj.sample_component(static_cast<double>(o.year - ds.epoch_year), kI);
        total += (model_i - o.value) * (model_i - o.value) / std::abs(o.value);
    }
    for (const auto& o : ds.info) {
        const double model_z = traj.sample_component(static_cast<double>(o.year - ds.epoch_year), kZ);
        total += (model_z - o.value) * (model_z - o.value) / std::abs(o.value);
    }
    return total;
}

struct FitResult {
    FreeParams x;
    double sse;
    std::size_t iterations;
    bool converged;
    std::vector<double> trace;  ///< best objective value per iteration
};

/// Fits (beta0, eta, gamma0, q) to a dataset for a fixed delay by simplex
/// search from the given starting point.
inline FitResult fit(const Dataset& ds, double delay_years, const FreeParams& start,
                     const NelderMeadConfig& cfg = {}) {
    const FitProblem fp = make_fit_problem(delay_years);
    auto objective = [&](const std::vector<double>& v) {
        return sse(fp, ds, FreeParams{v[0], v[1], v[2], v[3]});
    };
    const auto r = nelder_mead(objective, {start.beta0, start.eta, start.gamma0, start.q}, cfg);
    return {FreeParams{r.x[0], r.x[1], r.x[2], r.x[3]}, r.f, r.iterations, r.converged,
            r.best_trace};
}

/// The starting point used for every delay in the Uganda study.
inline FreeParams uganda_initial_guess() { return {0.028, 0.041, 0.264, 0.071}; }

}  // namespace hivdde
