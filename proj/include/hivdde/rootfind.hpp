#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hivdde {

/// Raised when a root bracket does not enclose a sign change, or cannot be
/// established from the analytic bounds. Indicates inconsistent parameters.
class BracketFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bracketed scalar root solve, Brent style: bisection with secant /
/// inverse-quadratic acceleration. Requires f(a) and f(b) of opposite sign.
template <typename F>
double brent_root(F&& f, double a, double b, double x_tol = 1e-12, int max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw BracketFailure("brent_root: no sign change on bracket");

    double c = a, fc = fa;
    double e = b - a, dd = e;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            e = dd = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * x_tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, qq;
            const double s = fb / fa;
            if (a == c) {  // secant
                p = 2.0 * xm * s;
                qq = 1.0 - s;
            } else {  // inverse quadratic
                const double q2 = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * q2 * (q2 - r) - (b - a) * (r - 1.0));
                qq = (q2 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) qq = -qq;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * qq - std::abs(tol1 * qq), std::abs(e * qq))) {
                e = dd;
                dd = p / qq;
            } else {
                dd = xm;
                e = dd;
            }
        } else {
            dd = xm;
            e = dd;
        }
        a = b;
        fa = fb;
        b += (std::abs(dd) > tol1) ? dd : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

/// Golden-section search for the maximizer of a unimodal function on [a, b].
template <typename F>
double golden_section_max(F&& f, double a, double b, double x_tol = 1e-10) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

/// Doubles `hi` until pred(hi) holds (or the expansion budget runs out).
template <typename Pred>
double expand_until(Pred&& pred, double hi, int max_doublings = 200) {
    for (int i = 0; i < max_doublings; ++i) {
        if (pred(hi)) return hi;
        hi *= 2.0;
    }
    throw BracketFailure("expand_until: no bracket found within expansion budget");
}

}  // namespace hivdde
