#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace hivdde {

struct NelderMeadConfig {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double f_tol = 1e-8;
    double x_tol = 1e-8;
    std::size_t max_iter = 2000;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f;
    std::size_t iterations;
    bool converged;                 ///< false when the iteration budget ran out
    std::vector<double> best_trace; ///< best objective value after each iteration
};

/// Derivative-free simplex minimization. The initial simplex perturbs each
/// coordinate by 5% (absolute 0.00025 for coordinates smaller than 0.005),
/// and the loop stops once both the objective spread and the vertex spread
/// fall below their tolerances.
inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    const std::vector<double>& x0,
                                    const NelderMeadConfig& cfg = {}) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> xs(n + 1, x0);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(x0[j]) < 0.005)
            xs[j + 1][j] += 0.00025;
        else
            xs[j + 1][j] *= 1.05;
    }
    std::vector<double> fs(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    };

    NelderMeadResult res;
    res.best_trace.reserve(cfg.max_iter);
    std::size_t iter = 0;
    for (; iter < cfg.max_iter; ++iter) {
        sort_simplex();
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];

        double f_spread = std::abs(fs[worst] - fs[best]);
        double x_spread = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                x_spread = std::max(x_spread, std::abs(xs[order[i]][j] - xs[best][j]));
        if (f_spread <= cfg.f_tol && x_spread <= cfg.x_tol) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < n; ++j) centroid[j] += xs[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto affine = [&](double coef) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + coef * (centroid[j] - xs[worst][j]);
            return x;
        };

        const auto xr = affine(cfg.reflection);
        const double fr = f(xr);
        if (fr < fs[best]) {
            const auto xe = affine(cfg.expansion);
            const double fe = f(xe);
            if (fe < fr) {
                xs[worst] = xe;
                fs[worst] = fe;
            } else {
                xs[worst] = xr;
                fs[worst] = fr;
            }
        } else if (fr < fs[second]) {
            xs[worst] = xr;
            fs[worst] = fr;
        } else {
            const bool outside = fr < fs[worst];
            const auto xc = affine(outside ? cfg.contraction : -cfg.contraction);
            const double fc = f(xc);
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = xc;
                fs[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {  // shrink toward the best vertex
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j)
                        xs[i][j] = xs[best][j] + cfg.shrink * (xs[i][j] - xs[best][j]);
                    fs[i] = f(xs[i]);
                }
            }
        }
        res.best_trace.push_back(*std::min_element(fs.begin(), fs.end()));
    }

    sort_simplex();
    res.x = xs[order[0]];
    res.f = fs[order[0]];
    res.iterations = iter;
    res.converged = iter < cfg.max_iter;
    return res;
}

}  // namespace hivdde
