#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace hivdde {

/// Step budget exhausted before reaching the end of the time span.
class StepBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// NaN or infinity produced while stepping; signals bad parameters or an
/// unreachable tolerance.
class NonFiniteState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Trajectory evaluation outside the integrated span.
class OutOfSpan : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct SolverConfig {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    double h_init = 1e-2;
    double h_max = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 1'000'000;  ///< budget of step attempts (accepted + rejected)
};

/// History segment for a delay system: any callable of t <= t0 returning the
/// state. The default used throughout is the constant extension of the
/// initial condition.
template <std::size_t N>
using History = std::function<std::array<double, N>(double)>;

template <std::size_t N>
History<N> constant_history(const std::array<double, N>& y0) {
    return [y0](double) { return y0; };
}

/// Dense-output solution: the accepted mesh with states and derivatives,
/// interpolated by cubic Hermite polynomials between nodes. Immutable once
/// integration finishes; safe to share across threads.
template <std::size_t N>
class Trajectory {
public:
    using State = std::array<double, N>;

    struct Node {
        double t;
        State y;
        State dy;
    };

    const std::vector<Node>& nodes() const { return nodes_; }
    double t_begin() const { return nodes_.front().t; }
    double t_end() const { return nodes_.back().t; }

    /// Interpolated state at time t in [t_begin, t_end]; exact at mesh nodes.
    State sample(double t) const {
        const std::size_t i = locate(t);
        if (nodes_[i].t == t) return nodes_[i].y;
        if (i + 1 < nodes_.size() && nodes_[i + 1].t == t) return nodes_[i + 1].y;
        return hermite(i, t);
    }

    double sample_component(double t, std::size_t comp) const { return sample(t)[comp]; }

private:
    template <std::size_t M, typename Rhs>
    friend Trajectory<M> integrate(Rhs&& rhs, const History<M>& history, double t0, double t1,
                                   double delay, std::size_t delayed_component, const SolverConfig& cfg);

    std::vector<Node> nodes_;

    std::size_t locate(double t) const {
        const double lo = nodes_.front().t;
        const double hi = nodes_.back().t;
        if (t < lo || t > hi) throw OutOfSpan("trajectory sampled outside span");
        auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                                   [](double v, const Node& n) { return v < n.t; });
        std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
        if (i > 0) --i;
        if (i + 1 >= nodes_.size()) i = nodes_.size() - 2;
        return i;
    }

    State hermite(std::size_t i, double t) const {
        const Node& a = nodes_[i];
        const Node& b = nodes_[i + 1];
        const double h = b.t - a.t;
        const double th = (t - a.t) / h;
        const double th2 = th * th;
        const double th3 = th2 * th;
        const double h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
        const double h10 = th3 - 2.0 * th2 + th;
        const double h01 = -2.0 * th3 + 3.0 * th2;
        const double h11 = th3 - th2;
        State out;
        for (std::size_t k = 0; k < N; ++k)
            out[k] = h00 * a.y[k] + h10 * h * a.dy[k] + h01 * b.y[k] + h11 * h * b.dy[k];
        return out;
    }
};

/// Integrates y'(t) = rhs(t, y(t), y_delayed) over [t0, t1] by the explicit
/// method of steps. `rhs` receives the scalar delayed component
/// y[delayed_component](t - delay); for delay == 0 it receives the current
/// value and the step cap does not apply.
///
/// The stepper is an embedded Runge-Kutta pair: classic 4th-order advancing
/// solution with a 3rd-order companion (Zonneveld's extra stage) for the
/// local error estimate. The derivative stored at each accepted node doubles
/// as the first stage of the next step.
template <std::size_t N, typename Rhs>
Trajectory<N> integrate(Rhs&& rhs, const History<N>& history, double t0, double t1,
                        double delay, std::size_t delayed_component,
                        const SolverConfig& cfg = {}) {
    using State = std::array<double, N>;
    if (!(t1 > t0)) throw std::invalid_argument("integrate: require t1 > t0");
    if (delay < 0.0) throw std::invalid_argument("integrate: require delay >= 0");

    Trajectory<N> traj;
    auto& nodes = traj.nodes_;

    auto delayed_lookup = [&](double t) -> double {
        const double td = t - delay;
        if (td <= t0) return history(td)[delayed_component];
        // Clamp the tiny forward overshoot that h == delay can produce.
        const double back = nodes.back().t;
        return traj.sample(td > back ? back : td)[delayed_component];
    };
    auto eval = [&](double t, const State& y) -> State {
        const double dv = delay > 0.0 ? delayed_lookup(t) : y[delayed_component];
        return rhs(t, y, dv);
    };
    auto finite = [](const State& y) {
        for (double v : y)
            if (!std::isfinite(v)) return false;
        return true;
    };

    State y = history(t0);
    if (!finite(y)) throw NonFiniteState("integrate: history is not finite at t0");
    nodes.push_back({t0, y, eval(t0, y)});

    double t = t0;
    double h = cfg.h_init;
    const double span_eps = 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t1), 1.0);
    std::size_t attempts = 0;

    while (t1 - t > span_eps) {
        if (++attempts > cfg.max_steps)
            throw StepBudgetExceeded("integrate: step budget exceeded");
        h = std::min({h, cfg.h_max, t1 - t});
        if (delay > 0.0) h = std::min(h, delay);
        const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0);
        if (h < h_floor) throw NonFiniteState("integrate: step size underflow");

        const State& k1 = nodes.back().dy;  // first-same-as-last reuse
        State ys;
        for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + 0.5 * h * k1[i];
        const State k2 = eval(t + 0.5 * h, ys);
        for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + 0.5 * h * k2[i];
        const State k3 = eval(t + 0.5 * h, ys);
        for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + h * k3[i];
        const State k4 = eval(t + h, ys);
        for (std::size_t i = 0; i < N; ++i)
            ys[i] = y[i] + h * ((5.0 / 32.0) * k1[i] + (7.0 / 32.0) * k2[i] +
                                (13.0 / 32.0) * k3[i] - (1.0 / 32.0) * k4[i]);
        const State k5 = eval(t + 0.75 * h, ys);

        State ynew;
        double err_norm = 0.0;
        bool ok = true;
        for (std::size_t i = 0; i < N; ++i) {
            ynew[i] = y[i] + h * (k1[i] / 6.0 + k2[i] / 3.0 + k3[i] / 3.0 + k4[i] / 6.0);
            const double err = h * ((2.0 / 3.0) * k1[i] - 2.0 * k2[i] - 2.0 * k3[i] -
                                    2.0 * k4[i] + (16.0 / 3.0) * k5[i]);
            const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            if (!std::isfinite(err) || !std::isfinite(ynew[i])) {
                ok = false;
                break;
            }
            err_norm = std::max(err_norm, std::abs(err) / scale);
        }

        if (!ok) {
            if (h <= 2.0 * h_floor) throw NonFiniteState("integrate: non-finite state produced");
            h *= 0.25;
            continue;
        }
        if (err_norm <= 1.0) {
            t += h;
            y = ynew;
            nodes.push_back({t, y, eval(t, y)});
            const double grow = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.25) : 5.0;
            h *= std::clamp(grow, 0.2, 5.0);
        } else {
            h *= std::clamp(0.9 * std::pow(err_norm, -0.25), 0.2, 0.9);
        }
    }
    return traj;
}

}  // namespace hivdde
