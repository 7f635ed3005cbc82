#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library.

#include <cmath>
#include <functional>
#include <random>

namespace oracle {

/// Bisection for a sign change of fn on [lo, hi].
inline double bisect(const std::function<double(double)>& fn, double lo, double hi, int iters = 200) {
    double flo = fn(lo);
    for (int k = 0; k < iters; ++k) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid);
        if ((fm <= 0.0) == (flo <= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Roots of a u^2 - u + u0 = 0 located by bisection on each side of the vertex.
struct Roots {
    double lower, upper;
};
inline Roots scalar_roots_bisection(double a, double u0) {
    const auto g = [=](double u) { return a * u * u - u + u0; };
    const double vertex = 1.0 / (2.0 * a);
    double far = vertex;
    while (g(far) < 0.0) far *= 2.0;
    return {bisect(g, 0.0, vertex), bisect(g, vertex, far)};
}

inline double simpson_segment(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                              double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                                   double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_segment(f, a, m, fa, flm, fm);
    const double right = simpson_segment(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

/// Adaptive Simpson quadrature of f on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double eps = 1e-13) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, simpson_segment(f, a, b, fa, fm, fb), eps, 50);
}

/// Continuous Green function of -u'' on [0,1], written independently.
inline double green_unit(double t, double s) { return std::min(t, s) * (1.0 - std::max(t, s)); }

}  // namespace oracle
