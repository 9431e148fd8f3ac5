#include "uistop/rng.hpp"

#include <cmath>

namespace uistop {
namespace detail {

namespace {

double npdf(double x) { return std::exp(-0.5 * x * x); }

// Upper tail area of the unnormalized density exp(-x^2/2).
double ntail(double r) {
    return std::sqrt(3.14159265358979323846 / 2.0) * std::erfc(r / std::sqrt(2.0));
}

// Builds the 256-layer table for a candidate base edge r and reports the
// closure error of the top layer; the correct r makes it zero.
double build(double r, double* x, double* y) {
    const double v = r * npdf(r) + ntail(r);
    x[1] = r;
    for (int i = 2; i <= 255; ++i) {
        const double t = npdf(x[i - 1]) + v / x[i - 1];
        if (t >= 1.0) return 1.0; // layers overshot the mode
        x[i] = std::sqrt(-2.0 * std::log(t));
    }
    x[0] = v / npdf(r);
    x[256] = 0.0;
    for (int i = 0; i <= 256; ++i) y[i] = npdf(x[i]);
    y[0] = npdf(r); // virtual base edge shares the base height
    return (npdf(x[255]) + v / x[255]) - 1.0;
}

} // namespace

ZigguratTables::ZigguratTables() {
    // Bisect the base edge: too small an r makes the strip area v too
    // large and the recurrence overshoots the mode (positive closure
    // error), so positive error moves the bracket up.
    double lo = 3.0, hi = 4.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (build(mid, x, y) > 0.0 ? lo : hi) = mid;
    }
    build(hi, x, y);
}

const ZigguratTables zig{};

} // namespace detail

double Rng::normal() {
    const auto& Z = detail::zig;
    for (;;) {
        const std::uint64_t b = next();
        const int i = static_cast<int>(b & 255);
        const bool neg = (b >> 8) & 1;
        const double u = static_cast<double>(b >> 11) * 0x1.0p-53;
        const double xc = u * Z.x[i];
        if (xc < Z.x[i + 1]) return neg ? -xc : xc;
        if (i == 0) {
            // fallback for the tail beyond the base edge r = x[1]
            const double r = Z.x[1];
            double xt, yt;
            do {
                xt = -std::log(1.0 - uniform()) / r;
                yt = -std::log(1.0 - uniform());
            } while (yt + yt < xt * xt);
            return neg ? -(r + xt) : (r + xt);
        }
        const double yc = Z.y[i] + uniform() * (Z.y[i + 1] - Z.y[i]);
        if (yc < std::exp(-0.5 * xc * xc)) return neg ? -xc : xc;
    }
}

} // namespace uistop
