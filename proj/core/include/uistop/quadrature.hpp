#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

namespace uistop {

namespace detail {

template <class F>
double simpson_rec(const F& f, double a, double fa, double b, double fb, double m, double fm,
                   double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace detail

// Adaptive Simpson with Richardson correction; abs_tol is an absolute
// tolerance on the integral over [a, b].
template <class F>
double adaptive_simpson(const F& f, double a, double b, double abs_tol, int max_depth = 48) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

// Integrates over [points[0], points.back()] splitting at interior points
// (kinks of piecewise integrands); tolerance is divided across segments.
template <class F>
double adaptive_simpson_split(const F& f, const std::vector<double>& points, double abs_tol) {
    if (points.size() < 2) return 0.0;
    const double per = abs_tol / static_cast<double>(points.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        total += adaptive_simpson(f, points[i], points[i + 1], per);
    return total;
}

} // namespace uistop
