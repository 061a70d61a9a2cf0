#pragma once

#include <cmath>
#include <utility>

namespace wedge {

struct GoldenResult {
    double arg = 0.0;
    double value = 0.0;
    double bracket_lo = 0.0, bracket_hi = 0.0;
};

// Golden-section minimization of a unimodal function on [a, b] down to an
// argument tolerance xtol. Returns the best sampled point.
template <class F>
GoldenResult golden_min(F&& f, double a, double b, double xtol) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    GoldenResult r;
    r.bracket_lo = a;
    r.bracket_hi = b;
    if (f1 <= f2) { r.arg = x1; r.value = f1; }
    else          { r.arg = x2; r.value = f2; }
    return r;
}

// Coarse scan on [a, b] with the given step; returns index of the minimum
// and fills xs/fs if non-null.
template <class F>
std::pair<double, double> scan_min(F&& f, double a, double b, double step) {
    double best_x = a, best_f = f(a);
    for (double x = a + step; x <= b + 1e-12; x += step) {
        double fx = f(x);
        if (fx < best_f) { best_f = fx; best_x = x; }
    }
    return {best_x, best_f};
}

} // namespace wedge
